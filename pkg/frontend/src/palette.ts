/** Cluster colors: a fixed 12-color palette keyed by label, noise black. */

export const NOISE_COLOR = "#000000";

export const CLUSTER_PALETTE: readonly string[] = [
  "#1f77b4",
  "#ff7f0e",
  "#2ca02c",
  "#d62728",
  "#9467bd",
  "#8c564b",
  "#e377c2",
  "#7f7f7f",
  "#bcbd22",
  "#17becf",
  "#aec7e8",
  "#ffbb78",
];

export function colorFor(label: number): string {
  if (label <= 0) return NOISE_COLOR;
  return CLUSTER_PALETTE[(label - 1) % CLUSTER_PALETTE.length];
}
