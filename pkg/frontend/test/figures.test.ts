import { describe, expect, it } from 'vitest';
import { mkdtempSync, writeFileSync, readFileSync, existsSync } from 'fs';
import { tmpdir } from 'os';
import { dirname, join } from 'path';
import { fileURLToPath } from 'url';

import { readTable, SchemaError } from '../src/csv.js';
import { parseFigureSpec, SpecError } from '../src/spec.js';
import { renderFigure, plotFromSpecFile } from '../src/plot.js';
import { LinearScale } from '../src/scale.js';
import { colorToValue } from '../src/colormap.js';
import {
  MARGIN,
  PANEL_GAP,
  OCCUPATION_SERIES,
  PHOTON_SERIES,
  PAIR_SERIES,
} from '../src/figures.js';
import { extractCells, extractPolylines } from './extract.js';

const GOLDEN = join(dirname(fileURLToPath(import.meta.url)), '..', 'golden');

// rendered coordinates carry 2 decimals; values re-extracted through the
// declared ranges are exact up to half that quantum per pixel span
function coordTolerance(span: number, pxSpan: number): number {
  return (0.005 * span) / Math.abs(pxSpan) + 1e-9;
}

describe('dynamics figure', () => {
  const spec = parseFigureSpec({
    kind: 'dynamics',
    input: join(GOLDEN, 'dynamics.csv'),
    output: 'unused.svg',
    xRange: [-10.8, 200],
    yRange: [0, 1.05],
    valueRange: [0, 0.1],
    width: 640,
    height: 420,
  });

  it('re-extracted series match the CSV within quantization', () => {
    const svg = renderFigure(spec);
    const table = readTable(spec.input, 'dynamics');
    const lines = extractPolylines(svg);
    expect(lines.map((l) => l.series)).toEqual(
      [...OCCUPATION_SERIES, ...PHOTON_SERIES].map(([c]) => c),
    );

    const panelH = (spec.height - MARGIN.top - MARGIN.bottom - PANEL_GAP) / 2;
    const xScale = new LinearScale(spec.xRange!, [MARGIN.left, spec.width - MARGIN.right]);
    const topScale = new LinearScale(spec.yRange!, [MARGIN.top + panelH, MARGIN.top]);
    const botTop = MARGIN.top + panelH + PANEL_GAP;
    const botScale = new LinearScale(spec.valueRange, [botTop + panelH, botTop]);

    const xTol = coordTolerance(spec.xRange![1] - spec.xRange![0], spec.width - MARGIN.left - MARGIN.right);
    for (const line of lines) {
      const scale = line.series.startsWith('occ_') ? topScale : botScale;
      const yTol = coordTolerance(scale.domain[1] - scale.domain[0], panelH);
      expect(line.points.length).toBe(table.rows.length);
      line.points.forEach(([px, py], i) => {
        expect(Math.abs(xScale.invert(px) - table.rows[i].t_ps)).toBeLessThan(xTol);
        expect(Math.abs(scale.invert(py) - table.rows[i][line.series])).toBeLessThan(yTol);
      });
    }
  });

  it('is deterministic', () => {
    expect(renderFigure(spec)).toBe(renderFigure(spec));
  });
});

describe('colormap figure', () => {
  const spec = parseFigureSpec({
    kind: 'colormap',
    input: join(GOLDEN, 'map.csv'),
    output: 'unused.svg',
    valueRange: [0, 1],
    valueColumn: 'b_final',
  });

  it('cell colors invert back to CSV values within 1/255', () => {
    const svg = renderFigure(spec);
    const table = readTable(spec.input, 'colormap');
    const cells = extractCells(svg);
    expect(cells.length).toBe(table.rows.length);
    for (const cell of cells) {
      const row = table.rows.find(
        (r) => r.delta_b_mev === cell.x && r.alpha1_pi === cell.y,
      );
      expect(row).toBeDefined();
      const value = colorToValue(cell.fill, 0, 1);
      expect(Math.abs(value - row!.b_final)).toBeLessThanOrEqual(1 / 255 + 1e-12);
    }
  });

  it('accepts a single-row CSV as a 1xN strip', () => {
    const dir = mkdtempSync(join(tmpdir(), 'strip-'));
    const csv = join(dir, 'strip.csv');
    writeFileSync(
      csv,
      'delta_b_mev,alpha1_pi,alpha2_pi,delta2_mev,b_final\n' +
        '1,32,12.8,-12.96,0.97\n',
    );
    const stripSpec = parseFigureSpec({
      kind: 'colormap', input: csv, output: 'unused.svg',
    });
    const svg = renderFigure(stripSpec);
    expect(extractCells(svg).length).toBe(1);
  });
});

describe('sweep figure', () => {
  const spec = parseFigureSpec({
    kind: 'sweep',
    input: join(GOLDEN, 'sweep.csv'),
    output: 'unused.svg',
    xRange: [0, 0.5],
    yRange: [0, 1.05],
    valueRange: [0, 0.3],
  });

  it('concurrence and pair-count curves match the CSV', () => {
    const svg = renderFigure(spec);
    const table = readTable(spec.input, 'sweep');
    const lines = extractPolylines(svg);
    expect(lines.map((l) => l.series)).toEqual(
      ['concurrence', ...PAIR_SERIES.map(([c]) => c)],
    );
    const xScale = new LinearScale(spec.xRange!, [MARGIN.left, spec.width - MARGIN.right]);
    const plotH = spec.height - MARGIN.top - MARGIN.bottom;
    const left = new LinearScale(spec.yRange!, [spec.height - MARGIN.bottom, MARGIN.top]);
    const right = new LinearScale(spec.valueRange, [spec.height - MARGIN.bottom, MARGIN.top]);
    for (const line of lines) {
      const scale = line.series === 'concurrence' ? left : right;
      const yTol = coordTolerance(scale.domain[1] - scale.domain[0], plotH);
      line.points.forEach(([px, py], i) => {
        expect(Math.abs(scale.invert(py) - table.rows[i][line.series])).toBeLessThan(yTol);
        expect(Math.abs(xScale.invert(px) - table.rows[i].g_mev)).toBeLessThan(
          coordTolerance(0.5, spec.width - MARGIN.left - MARGIN.right),
        );
      });
    }
  });
});

describe('validation', () => {
  it('rejects specs with unknown kinds', () => {
    expect(() =>
      parseFigureSpec({ kind: 'pie', input: 'x.csv', output: 'x.svg' }),
    ).toThrow(SpecError);
  });

  it('rejects CSVs missing documented columns', () => {
    const dir = mkdtempSync(join(tmpdir(), 'bad-'));
    const csv = join(dir, 'bad.csv');
    writeFileSync(csv, 'g_mev,concurrence\n0.06,0.9\n');
    expect(() => readTable(csv, 'sweep')).toThrow(SchemaError);
  });

  it('rejects non-numeric payloads', () => {
    const dir = mkdtempSync(join(tmpdir(), 'nan-'));
    const csv = join(dir, 'nan.csv');
    writeFileSync(
      csv,
      'g_mev,concurrence,n_pair_xx,n_pair_xy,n_pair_yx,n_pair_yy\n0.06,oops,0,0,0,0\n',
    );
    expect(() => readTable(csv, 'sweep')).toThrow(SchemaError);
  });
});

describe('plot command path', () => {
  it('writes the SVG named by the spec file', () => {
    const dir = mkdtempSync(join(tmpdir(), 'plot-'));
    const specPath = join(dir, 'fig.json');
    const outPath = join(dir, 'out', 'fig.svg');
    writeFileSync(
      specPath,
      JSON.stringify({
        kind: 'sweep',
        input: join(GOLDEN, 'sweep.csv'),
        output: outPath,
      }),
    );
    expect(plotFromSpecFile(specPath)).toBe(outPath);
    expect(existsSync(outPath)).toBe(true);
    expect(readFileSync(outPath, 'utf8')).toContain('<svg');
  });
});
