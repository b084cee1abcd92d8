/** Fixed 256-step sequential colormap (dark blue -> teal -> yellow).
 *
 * The mapping is injective over the lookup table, so a rendered cell color
 * can be inverted back to its value to within 1/255 of the value range —
 * that quantization bound is what the extraction tests assert against.
 */

const ANCHORS: Array<[number, number, number]> = [
  [13, 8, 135],
  [30, 105, 160],
  [36, 170, 131],
  [128, 210, 80],
  [248, 230, 33],
];

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

function rgbAt(t: number): [number, number, number] {
  const clamped = Math.min(1, Math.max(0, t));
  const seg = Math.min(ANCHORS.length - 2, Math.floor(clamped * (ANCHORS.length - 1)));
  const local = clamped * (ANCHORS.length - 1) - seg;
  const [r0, g0, b0] = ANCHORS[seg];
  const [r1, g1, b1] = ANCHORS[seg + 1];
  return [
    Math.round(lerp(r0, r1, local)),
    Math.round(lerp(g0, g1, local)),
    Math.round(lerp(b0, b1, local)),
  ];
}

export const LUT: Array<[number, number, number]> = Array.from(
  { length: 256 },
  (_, i) => rgbAt(i / 255),
);

function hex(rgb: [number, number, number]): string {
  return '#' + rgb.map((c) => c.toString(16).padStart(2, '0')).join('');
}

/** Value in [lo, hi] -> color, quantized to the 256-entry table. */
export function valueToColor(v: number, lo: number, hi: number): string {
  const t = (v - lo) / (hi - lo);
  const idx = Math.min(255, Math.max(0, Math.round(t * 255)));
  return hex(LUT[idx]);
}

/** Inverse lookup: nearest table color -> value; used by extraction tests. */
export function colorToValue(color: string, lo: number, hi: number): number {
  const r = parseInt(color.slice(1, 3), 16);
  const g = parseInt(color.slice(3, 5), 16);
  const b = parseInt(color.slice(5, 7), 16);
  let best = 0;
  let bestDist = Infinity;
  for (let i = 0; i < 256; i++) {
    const [lr, lg, lb] = LUT[i];
    const dist = (r - lr) ** 2 + (g - lg) ** 2 + (b - lb) ** 2;
    if (dist < bestDist) {
      bestDist = dist;
      best = i;
    }
  }
  return lo + (best / 255) * (hi - lo);
}
