/** Minimal linear scale between a data domain and pixel range. */
export class LinearScale {
  constructor(
    private readonly d0: number,
    private readonly d1: number,
    private readonly r0: number,
    private readonly r1: number,
  ) {}

  apply(value: number): number {
    const span = this.d1 - this.d0;
    if (span === 0) return (this.r0 + this.r1) / 2;
    return this.r0 + ((value - this.d0) / span) * (this.r1 - this.r0);
  }

  invert(pixel: number): number {
    const span = this.r1 - this.r0;
    if (span === 0) return this.d0;
    return this.d0 + ((pixel - this.r0) / span) * (this.d1 - this.d0);
  }
}

export function extent(values: readonly number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}
