import { colorFor } from "./palette.js";
import { LinearScale, extent } from "./scale.js";

/** Linked scatter: a 2-D projection of the dataset colored by the labels
 * the service returned (noise black). The label array is used verbatim. */
export interface ScatterPoint {
  index: number;
  px: number;
  py: number;
  color: string;
}

export function scatterViewModel(
  points: readonly number[][],
  labels: readonly number[] | null,
  pair: [number, number],
  width: number,
  height: number,
  pad = 24,
): ScatterPoint[] {
  const xs = points.map((p) => p[pair[0]]);
  const ys = points.map((p) => p[pair[1]]);
  const [xLo, xHi] = extent(xs);
  const [yLo, yHi] = extent(ys);
  const xScale = new LinearScale(xLo, xHi, pad, width - pad);
  const yScale = new LinearScale(yLo, yHi, height - pad, pad);
  return points.map((_, index) => ({
    index,
    px: xScale.apply(xs[index]),
    py: yScale.apply(ys[index]),
    color: colorFor(labels ? labels[index] : 0),
  }));
}
