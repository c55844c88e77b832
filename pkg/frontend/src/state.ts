import { CondensedTreeData, DecisionGraphData, HierarchyData, Scores, SessionSummary } from "./types.js";

/** Single source of truth for the explorer.
 *
 * Two hard rules, both asserted by tests:
 *  - labels shown anywhere come verbatim from a service response, never
 *    from local computation;
 *  - each view has at most one request in flight, and responses arriving
 *    out of order are dropped via sequence numbers.
 */
export interface ViewState {
  session: string | null;
  summary: SessionSummary | null;
  /** exact label array of the most recent service response */
  labels: number[] | null;
  labelsSource: string | null;
  clusterCount: number | null;
  noiseCount: number | null;
  scores: Scores | null;
  selectedPeaks: number[];
  decisionGraph: DecisionGraphData | null;
  decisionGraphKey: string | null;
  hierarchy: HierarchyData | null;
  hierarchyKey: string | null;
  condensedTree: CondensedTreeData | null;
  cutValue: number | null;
  featurePair: [number, number];
  warning: string | null;
}

export function initialState(): ViewState {
  return {
    session: null,
    summary: null,
    labels: null,
    labelsSource: null,
    clusterCount: null,
    noiseCount: null,
    scores: null,
    selectedPeaks: [],
    decisionGraph: null,
    decisionGraphKey: null,
    hierarchy: null,
    hierarchyKey: null,
    condensedTree: null,
    cutValue: null,
    featurePair: [0, 1],
    warning: null,
  };
}

export function setSession(state: ViewState, summary: SessionSummary): ViewState {
  return {
    ...initialState(),
    session: summary.session,
    summary,
    featurePair: summary.m >= 2 ? [0, 1] : [0, 0],
  };
}

/** Selecting a selected peak deselects it (toggle is its own inverse). */
export function togglePeak(state: ViewState, index: number): ViewState {
  const selected = state.selectedPeaks.includes(index)
    ? state.selectedPeaks.filter((p) => p !== index)
    : [...state.selectedPeaks, index];
  return { ...state, selectedPeaks: selected };
}

export function assignEnabled(state: ViewState): boolean {
  return state.selectedPeaks.length > 0;
}

export interface LabelsUpdate {
  labels: number[];
  n_clusters: number;
  n_noise: number;
  scores?: Scores | null;
}

/** Store a label response exactly as received. */
export function applyLabels(
  state: ViewState,
  source: string,
  update: LabelsUpdate,
): ViewState {
  return {
    ...state,
    labels: update.labels,
    labelsSource: source,
    clusterCount: update.n_clusters,
    noiseCount: update.n_noise,
    scores: update.scores ?? null,
    warning:
      update.n_clusters === 0 && update.labels.length > 0
        ? "every point is noise at this setting"
        : null,
  };
}

export function setDecisionGraph(
  state: ViewState,
  graph: DecisionGraphData,
  key: string,
): ViewState {
  return {
    ...state,
    decisionGraph: graph,
    decisionGraphKey: key,
    selectedPeaks: [],
  };
}

export function setHierarchy(
  state: ViewState,
  hierarchy: HierarchyData,
  key: string,
  condensedTree: CondensedTreeData | null = null,
): ViewState {
  return { ...state, hierarchy, hierarchyKey: key, condensedTree, cutValue: null };
}

export function setFeaturePair(state: ViewState, x: number, y: number): ViewState {
  // switching the projection never touches the labels
  return { ...state, featurePair: [x, y] };
}

/** Per-view guard: one request in flight, stale responses discarded. */
export class RequestGate {
  private seq = 0;

  next(): number {
    this.seq += 1;
    return this.seq;
  }

  isCurrent(token: number): boolean {
    return token === this.seq;
  }
}
