/** Tiny deterministic SVG builder: pure string assembly, fixed precision. */

export const COORD_DECIMALS = 2;

export function fmt(v: number): string {
  return v.toFixed(COORD_DECIMALS);
}

function attrs(a: Record<string, string | number>): string {
  return Object.entries(a)
    .map(([k, v]) => ` ${k}="${v}"`)
    .join('');
}

export function el(
  tag: string,
  a: Record<string, string | number>,
  children = '',
): string {
  return children === ''
    ? `<${tag}${attrs(a)}/>`
    : `<${tag}${attrs(a)}>${children}</${tag}>`;
}

export function text(
  x: number,
  y: number,
  content: string,
  extra: Record<string, string | number> = {},
): string {
  return el(
    'text',
    { x: fmt(x), y: fmt(y), 'font-family': 'sans-serif', 'font-size': 11, ...extra },
    escapeXml(content),
  );
}

export function polyline(
  points: Array<[number, number]>,
  stroke: string,
  extra: Record<string, string | number> = {},
): string {
  const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(' ');
  return el('polyline', { points: pts, fill: 'none', stroke, 'stroke-width': 1.5, ...extra });
}

export function svgDocument(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">\n` +
    `<rect width="${width}" height="${height}" fill="white"/>\n` +
    body +
    '\n</svg>\n'
  );
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}
