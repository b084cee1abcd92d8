import { Table, extent } from './csv.js';
import { FigureSpec } from './spec.js';
import { LinearScale } from './scale.js';
import { valueToColor } from './colormap.js';
import { el, fmt, polyline, svgDocument, text } from './svg.js';

/** Fixed layout constants; the extraction tests share them. */
export const MARGIN = { left: 60, right: 70, top: 30, bottom: 42 };
export const PANEL_GAP = 34;

export const OCCUPATION_SERIES: Array<[string, string]> = [
  ['occ_G', '#777777'],
  ['occ_X', '#1f77b4'],
  ['occ_Y', '#2ca02c'],
  ['occ_B', '#d62728'],
];
export const PHOTON_SERIES: Array<[string, string]> = [
  ['N_X', '#9467bd'],
  ['N_Y', '#8c564b'],
];
export const PAIR_SERIES: Array<[string, string]> = [
  ['n_pair_xx', '#1f77b4'],
  ['n_pair_xy', '#2ca02c'],
  ['n_pair_yx', '#9467bd'],
  ['n_pair_yy', '#d62728'],
];

function axisFrame(x0: number, y0: number, x1: number, y1: number): string {
  return el('rect', {
    x: fmt(x0), y: fmt(y0), width: fmt(x1 - x0), height: fmt(y1 - y0),
    fill: 'none', stroke: 'black', 'stroke-width': 1,
  });
}

function xTicks(scale: LinearScale, y: number): string {
  return scale
    .ticks()
    .map(
      (v) =>
        el('line', {
          x1: fmt(scale.apply(v)), y1: fmt(y), x2: fmt(scale.apply(v)), y2: fmt(y + 4),
          stroke: 'black',
        }) + text(scale.apply(v), y + 16, String(v), { 'text-anchor': 'middle' }),
    )
    .join('');
}

function yTicks(scale: LinearScale, x: number): string {
  return scale
    .ticks()
    .map(
      (v) =>
        el('line', {
          x1: fmt(x - 4), y1: fmt(scale.apply(v)), x2: fmt(x), y2: fmt(scale.apply(v)),
          stroke: 'black',
        }) + text(x - 7, scale.apply(v) + 3, String(v), { 'text-anchor': 'end' }),
    )
    .join('');
}

function seriesLine(
  table: Table,
  xCol: string,
  yCol: string,
  xScale: LinearScale,
  yScale: LinearScale,
  color: string,
): string {
  const pts: Array<[number, number]> = table.rows.map((r) => [
    xScale.apply(r[xCol]),
    yScale.apply(r[yCol]),
  ]);
  return polyline(pts, color, { 'data-series': yCol });
}

/** Two-panel dynamics figure: occupations on top, photon numbers below. */
export function renderDynamics(table: Table, spec: FigureSpec): string {
  const { width, height } = spec;
  const xRange = spec.xRange ?? extent(table.rows.map((r) => r.t_ps));
  const yTop = spec.yRange ?? [0, 1.05];
  const yBottom = spec.valueRange;
  const panelH = (height - MARGIN.top - MARGIN.bottom - PANEL_GAP) / 2;
  const xScale = new LinearScale(xRange, [MARGIN.left, width - MARGIN.right]);
  const topScale = new LinearScale(yTop, [MARGIN.top + panelH, MARGIN.top]);
  const botTop = MARGIN.top + panelH + PANEL_GAP;
  const botScale = new LinearScale(yBottom, [botTop + panelH, botTop]);

  const parts: string[] = [];
  if (spec.title) parts.push(text(width / 2, 16, spec.title, { 'text-anchor': 'middle' }));
  parts.push(axisFrame(MARGIN.left, MARGIN.top, width - MARGIN.right, MARGIN.top + panelH));
  parts.push(axisFrame(MARGIN.left, botTop, width - MARGIN.right, botTop + panelH));
  parts.push(yTicks(topScale, MARGIN.left), yTicks(botScale, MARGIN.left));
  parts.push(xTicks(xScale, botTop + panelH));
  parts.push(text(width / 2, height - 8, spec.xLabel ?? 'time (ps)', { 'text-anchor': 'middle' }));
  for (const [col, color] of OCCUPATION_SERIES) {
    parts.push(seriesLine(table, 't_ps', col, xScale, topScale, color));
  }
  for (const [col, color] of PHOTON_SERIES) {
    parts.push(seriesLine(table, 't_ps', col, xScale, botScale, color));
  }
  return svgDocument(width, height, parts.join('\n'));
}

/** Heat map over (delta_B, alpha1) cells; single-row inputs give a strip. */
export function renderColormap(table: Table, spec: FigureSpec): string {
  const { width, height } = spec;
  const xs = uniqueSorted(table.rows.map((r) => r.delta_b_mev));
  const ys = uniqueSorted(table.rows.map((r) => r.alpha1_pi));
  const [lo, hi] = spec.valueRange;
  const col = spec.valueColumn;
  if (!table.columns.includes(col)) {
    throw new Error(`colormap value column '${col}' not in CSV`);
  }
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const cellW = plotW / xs.length;
  const cellH = plotH / ys.length;

  const parts: string[] = [];
  if (spec.title) parts.push(text(width / 2, 16, spec.title, { 'text-anchor': 'middle' }));
  for (const r of table.rows) {
    const ix = xs.indexOf(r.delta_b_mev);
    const iy = ys.indexOf(r.alpha1_pi);
    const x = MARGIN.left + ix * cellW;
    // alpha1 increases upward, as on a conventional axis
    const y = MARGIN.top + (ys.length - 1 - iy) * cellH;
    parts.push(
      el('rect', {
        x: fmt(x), y: fmt(y), width: fmt(cellW), height: fmt(cellH),
        fill: valueToColor(r[col], lo, hi),
        'data-x': r.delta_b_mev, 'data-y': r.alpha1_pi,
      }),
    );
  }
  parts.push(axisFrame(MARGIN.left, MARGIN.top, MARGIN.left + plotW, MARGIN.top + plotH));
  xs.forEach((v, i) =>
    parts.push(text(MARGIN.left + (i + 0.5) * cellW, MARGIN.top + plotH + 16, String(v), {
      'text-anchor': 'middle',
    })),
  );
  ys.forEach((v, i) =>
    parts.push(
      text(MARGIN.left - 7, MARGIN.top + (ys.length - 0.5 - i) * cellH + 3, String(v), {
        'text-anchor': 'end',
      }),
    ),
  );
  parts.push(text(width / 2, height - 8, spec.xLabel ?? 'binding energy (meV)', { 'text-anchor': 'middle' }));
  return svgDocument(width, height, parts.join('\n'));
}

/** Dual-axis sweep: concurrence (left axis) and pair counts (right axis). */
export function renderSweep(table: Table, spec: FigureSpec): string {
  const { width, height } = spec;
  const xRange = spec.xRange ?? extent(table.rows.map((r) => r.g_mev));
  const yLeft = spec.yRange ?? [0, 1.05];
  const yRight = spec.valueRange;
  const xScale = new LinearScale(xRange, [MARGIN.left, width - MARGIN.right]);
  const leftScale = new LinearScale(yLeft, [height - MARGIN.bottom, MARGIN.top]);
  const rightScale = new LinearScale(yRight, [height - MARGIN.bottom, MARGIN.top]);

  const parts: string[] = [];
  if (spec.title) parts.push(text(width / 2, 16, spec.title, { 'text-anchor': 'middle' }));
  parts.push(axisFrame(MARGIN.left, MARGIN.top, width - MARGIN.right, height - MARGIN.bottom));
  parts.push(yTicks(leftScale, MARGIN.left));
  parts.push(xTicks(xScale, height - MARGIN.bottom));
  rightScale.ticks().forEach((v) =>
    parts.push(
      el('line', {
        x1: fmt(width - MARGIN.right), y1: fmt(rightScale.apply(v)),
        x2: fmt(width - MARGIN.right + 4), y2: fmt(rightScale.apply(v)),
        stroke: 'black',
      }) +
        text(width - MARGIN.right + 7, rightScale.apply(v) + 3, String(v)),
    ),
  );
  parts.push(seriesLine(table, 'g_mev', 'concurrence', xScale, leftScale, '#000000'));
  for (const [col, color] of PAIR_SERIES) {
    parts.push(seriesLine(table, 'g_mev', col, xScale, rightScale, color));
  }
  parts.push(text(width / 2, height - 8, spec.xLabel ?? 'cavity coupling (meV)', { 'text-anchor': 'middle' }));
  return svgDocument(width, height, parts.join('\n'));
}

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}
