import { CondensedTreeData, HierarchyData } from "./types.js";

/** Dendrogram geometry computed from SciPy-style merge rows.
 *
 * Leaves are ordered by a left-to-right walk of the final tree; every
 * merge becomes one bracket at its height. Rendering caps at 200 leaves,
 * beyond which callers should show a condensed view instead.
 */
export const MAX_DIRECT_LEAVES = 200;

export interface Bracket {
  /** x positions (leaf units) of the two children and the parent center */
  xa: number;
  xb: number;
  /** heights of the children tops and this merge */
  ya: number;
  yb: number;
  y: number;
}

export interface DendrogramLayout {
  leafOrder: number[];
  brackets: Bracket[];
  maxHeight: number;
}

interface NodeGeom {
  x: number;
  y: number;
}

export function layoutDendrogram(h: HierarchyData): DendrogramLayout {
  const n = h.n;
  const children = new Map<number, [number, number, number]>();
  h.rows.forEach(([a, b, height], index) => {
    children.set(n + index, [a, b, height]);
  });
  // roots: ids never appearing as children (forests keep isolated leaves)
  const used = new Set<number>();
  for (const [a, b] of h.rows) {
    used.add(a);
    used.add(b);
  }
  const roots: number[] = [];
  for (let id = 0; id < n + h.rows.length; id += 1) {
    if (!used.has(id) && (id < n || children.has(id))) roots.push(id);
  }
  const leafOrder: number[] = [];
  const visit = (id: number): void => {
    const entry = children.get(id);
    if (!entry) {
      leafOrder.push(id);
      return;
    }
    visit(entry[0]);
    visit(entry[1]);
  };
  roots.forEach(visit);

  const position = new Map<number, NodeGeom>();
  leafOrder.forEach((leaf, i) => position.set(leaf, { x: i, y: 0 }));
  const brackets: Bracket[] = [];
  let maxHeight = 0;
  h.rows.forEach(([a, b, height], index) => {
    const ga = position.get(a)!;
    const gb = position.get(b)!;
    brackets.push({ xa: ga.x, xb: gb.x, ya: ga.y, yb: gb.y, y: height });
    position.set(n + index, { x: (ga.x + gb.x) / 2, y: height });
    if (height > maxHeight) maxHeight = height;
  });
  return { leafOrder, brackets, maxHeight };
}

/** Clamp a dragged cut position into the hierarchy's height range. */
export function clampCut(layout: DendrogramLayout, value: number): number {
  if (value < 0) return 0;
  if (value > layout.maxHeight) return layout.maxHeight;
  return value;
}

/** Condensed-tree bars, used instead of a dendrogram beyond 200 leaves.
 *
 * One bar per cluster node spanning its birth density to the last
 * departure from it; bar thickness tracks the member count.
 */
export interface ClusterBar {
  cluster: number;
  parent: number | null;
  birth: number;
  death: number;
  size: number;
}

export function layoutCondensed(tree: CondensedTreeData): ClusterBar[] {
  const birth = new Map<number, number>([[0, 0]]);
  const parent = new Map<number, number>();
  const size = new Map<number, number>([[0, tree.n_points]]);
  let maxLambda = 0;
  for (const [p, child, isCluster, lambda] of tree.rows) {
    if (lambda !== null && lambda > maxLambda) maxLambda = lambda;
    if (isCluster) {
      birth.set(child, lambda ?? 0);
      parent.set(child, p);
    }
  }
  for (const [, child, isCluster, , rowSize] of tree.rows) {
    if (isCluster) size.set(child, rowSize);
  }
  const death = new Map<number, number>();
  for (const [p, , , lambda] of tree.rows) {
    if (lambda === null) continue;
    death.set(p, Math.max(death.get(p) ?? 0, lambda));
  }
  const bars: ClusterBar[] = [];
  for (const [cluster, born] of birth) {
    bars.push({
      cluster,
      parent: parent.get(cluster) ?? null,
      birth: born,
      death: death.get(cluster) ?? maxLambda,
      size: size.get(cluster) ?? 0,
    });
  }
  bars.sort((a, b) => a.cluster - b.cluster);
  return bars;
}
