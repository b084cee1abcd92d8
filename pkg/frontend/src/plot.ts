import { readFileSync, writeFileSync, mkdirSync } from 'fs';
import { dirname } from 'path';

import { readTable } from './csv.js';
import { FigureSpec, parseFigureSpec } from './spec.js';
import { renderColormap, renderDynamics, renderSweep } from './figures.js';

/** Pure function of (CSV contents, spec): same inputs, same SVG bytes. */
export function renderFigure(spec: FigureSpec): string {
  const table = readTable(spec.input, spec.kind);
  switch (spec.kind) {
    case 'dynamics':
      return renderDynamics(table, spec);
    case 'colormap':
      return renderColormap(table, spec);
    case 'sweep':
      return renderSweep(table, spec);
  }
}

export function plotFromSpecFile(path: string): string {
  const doc = JSON.parse(readFileSync(path, 'utf8'));
  const spec = parseFigureSpec(doc);
  const svg = renderFigure(spec);
  mkdirSync(dirname(spec.output), { recursive: true });
  writeFileSync(spec.output, svg);
  return spec.output;
}
