/** Linear data-to-pixel scale; the inverse is used by the extraction tests. */
export class LinearScale {
  constructor(
    readonly domain: [number, number],
    readonly range: [number, number],
  ) {}

  apply(v: number): number {
    const [d0, d1] = this.domain;
    const [r0, r1] = this.range;
    return r0 + ((v - d0) / (d1 - d0)) * (r1 - r0);
  }

  invert(px: number): number {
    const [d0, d1] = this.domain;
    const [r0, r1] = this.range;
    return d0 + ((px - r0) / (r1 - r0)) * (d1 - d0);
  }

  /** Round-numbered tick positions covering the domain. */
  ticks(count = 5): number[] {
    const [d0, d1] = this.domain;
    const span = d1 - d0;
    const step = niceStep(span / count);
    const start = Math.ceil(d0 / step) * step;
    const out: number[] = [];
    for (let v = start; v <= d1 + 1e-12 * span; v += step) {
      out.push(Number(v.toPrecision(12)));
    }
    return out;
  }
}

function niceStep(raw: number): number {
  const pow = Math.pow(10, Math.floor(Math.log10(raw)));
  const frac = raw / pow;
  if (frac <= 1) return pow;
  if (frac <= 2) return 2 * pow;
  if (frac <= 5) return 5 * pow;
  return 10 * pow;
}
