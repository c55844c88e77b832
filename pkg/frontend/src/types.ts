/** Wire types for the clustering service (JSON over HTTP). */

export interface SessionSummary {
  session: string;
  n: number;
  m: number;
  feature_names: string[];
  classes: number | null;
  points: number[][];
  true_labels: number[] | null;
}

export interface Scores {
  match: number | null;
  match_ignore_noise: number | null;
  v_measure: number;
  ari: number;
  ami: number;
  [key: string]: number | null;
}

export interface DecisionGraphData {
  rho: number[];
  delta: number[];
  nearest_denser: (number | null)[];
}

export interface HierarchyData {
  n: number;
  columns: string[];
  /** merge rows: child a, child b, height, member count */
  rows: [number, number, number, number][];
}

export interface CondensedTreeData {
  n_points: number;
  min_cluster_size: number;
  columns: string[];
  /** rows: parent cluster, child id, child-is-cluster, lambda (null for
   * zero-height merges), subtree size */
  rows: [number, number, boolean, number | null, number][];
}

export interface ComputeResponse {
  method: string;
  params: Record<string, unknown>;
  seed: number;
  labels: number[];
  n_clusters: number;
  n_noise: number;
  artifact_keys: Record<string, string>;
  artifacts: Record<string, unknown>;
  scores?: Scores;
}

export interface LabelsResponse {
  labels: number[];
  n_clusters: number;
  n_noise: number;
  scores: Scores | null;
}
