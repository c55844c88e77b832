import { DecisionGraphData } from "./types.js";
import { LinearScale, extent } from "./scale.js";

/** View model for the density/separation scatter used to pick peaks. */
export interface GraphPoint {
  index: number;
  px: number;
  py: number;
  selected: boolean;
}

export interface DecisionGraphViewModel {
  points: GraphPoint[];
  xScale: LinearScale;
  yScale: LinearScale;
}

export function decisionGraphViewModel(
  graph: DecisionGraphData,
  selected: readonly number[],
  width: number,
  height: number,
  pad = 30,
): DecisionGraphViewModel {
  const [rLo, rHi] = extent(graph.rho);
  const [dLo, dHi] = extent(graph.delta);
  const xScale = new LinearScale(rLo, rHi, pad, width - pad);
  const yScale = new LinearScale(dLo, dHi, height - pad, pad);
  const chosen = new Set(selected);
  const points = graph.rho.map((rho, index) => ({
    index,
    px: xScale.apply(rho),
    py: yScale.apply(graph.delta[index]),
    selected: chosen.has(index),
  }));
  return { points, xScale, yScale };
}

/** Index of the nearest point within `radius` pixels, or null. */
export function hitTest(
  model: DecisionGraphViewModel,
  px: number,
  py: number,
  radius = 8,
): number | null {
  let best: number | null = null;
  let bestDist = radius * radius;
  for (const point of model.points) {
    const dx = point.px - px;
    const dy = point.py - py;
    const d2 = dx * dx + dy * dy;
    if (d2 <= bestDist) {
      bestDist = d2;
      best = point.index;
    }
  }
  return best;
}
