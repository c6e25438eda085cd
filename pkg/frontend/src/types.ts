/** Payload shapes of the session API, mirrored field-for-field. */

export interface DatasetMeta {
  dataset_id: string;
  n: number;
  d: number;
  cell_types: string[];
  image_size: [number, number];
  spot_radius_px?: number;
}

export interface EmbeddingPayload {
  coords: [number, number][];
  explained_variance: number[];
  pc1_order: number[];
}

export interface ClusterPayload {
  k: number;
  seed: number;
  labels: number[];
  centroids: number[][];
  inertia: number;
  iterations: number;
}

export interface SpotsPage {
  total: number;
  offset: number;
  limit: number;
  spot_ids: string[];
  positions: [number, number][];
  proportions: number[][];
}

export interface SessionSnapshot {
  session_id: string;
  dataset_id: string;
  revision: number;
  k: number | null;
  seed: number | null;
  selection: number[];
  count: number;
}

export interface BarsPayload {
  revision: number;
  bar_indices: number[];
  spot_ids: string[];
  compositions: number[][];
}

export interface TableRow {
  spot_id: string;
  proportions: number[];
}

export interface TablePayload {
  cell_types: string[];
  rows: TableRow[];
}

export type ChangeKind = "selection" | "clustering";

export interface SessionEvent {
  revision: number;
  changed: ChangeKind[];
}

export interface ApiError {
  error: string;
  field: string | null;
  message: string;
  revision?: number;
}

export type SelectionMode = "replace" | "union" | "intersect" | "subtract";
export type SelectionSpace = "image" | "scatter";

export type SelectionBody =
  | { source: "rect"; payload: { x0: number; y0: number; x1: number; y1: number; space: SelectionSpace } }
  | { source: "polygon"; payload: { vertices: [number, number][]; space: SelectionSpace } }
  | { source: "cluster"; payload: { label: number } }
  | { source: "ids"; payload: { ids: number[] } };

/** One committed, internally consistent rendering state: every cached
 *  payload in it belongs to the same server revision. */
export interface ViewState {
  revision: number;
  dataset: DatasetMeta;
  embedding: EmbeddingPayload;
  positions: [number, number][];
  selection: Set<number>;
  k: number | null;
  seed: number | null;
  clustering: ClusterPayload | null;
  bars: BarsPayload;
  maskUrl: string;
}
