/** Thin typed client over the session HTTP API.
 *
 *  The fetch implementation is injectable so tests can drive the client
 *  without a server (and without a DOM).
 */

import type {
  ApiError,
  BarsPayload,
  ClusterPayload,
  DatasetMeta,
  EmbeddingPayload,
  SelectionBody,
  SelectionMode,
  SessionSnapshot,
  SpotsPage,
  TablePayload,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiRequestError extends Error {
  readonly status: number;
  readonly body: ApiError;

  constructor(status: number, body: ApiError) {
    super(`${body.error}: ${body.message}`);
    this.status = status;
    this.body = body;
  }
}

export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(base = "", fetchImpl: FetchLike = (u, i) => fetch(u, i)) {
    this.base = base.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, init);
    if (!resp.ok) {
      let body: ApiError;
      try {
        body = (await resp.json()) as ApiError;
      } catch {
        body = { error: `HTTP${resp.status}`, field: null, message: resp.statusText };
      }
      throw new ApiRequestError(resp.status, body);
    }
    return (await resp.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  listDatasets(): Promise<{ datasets: DatasetMeta[] }> {
    return this.request("/datasets");
  }

  loadDataset(manifestPath: string): Promise<DatasetMeta> {
    return this.post("/datasets", { manifest_path: manifestPath });
  }

  datasetMeta(datasetId: string): Promise<DatasetMeta> {
    return this.request(`/datasets/${datasetId}`);
  }

  spots(datasetId: string, offset = 0, limit = 100000): Promise<SpotsPage> {
    return this.request(`/datasets/${datasetId}/spots?offset=${offset}&limit=${limit}`);
  }

  embedding(datasetId: string): Promise<EmbeddingPayload> {
    return this.request(`/datasets/${datasetId}/embedding`);
  }

  cluster(datasetId: string, k: number, seed: number): Promise<ClusterPayload> {
    return this.post(`/datasets/${datasetId}/cluster`, { k, seed });
  }

  imageUrl(datasetId: string): string {
    return `${this.base}/datasets/${datasetId}/image`;
  }

  createSession(datasetId: string): Promise<{ session_id: string; revision: number }> {
    return this.post("/sessions", { dataset_id: datasetId });
  }

  snapshot(sessionId: string): Promise<SessionSnapshot> {
    return this.request(`/sessions/${sessionId}`);
  }

  postSelection(
    sessionId: string,
    body: SelectionBody,
    mode: SelectionMode,
    revision?: number,
  ): Promise<{ revision: number; count: number }> {
    return this.post(`/sessions/${sessionId}/selection`, { ...body, mode, revision });
  }

  setClustering(
    sessionId: string,
    k: number,
    seed: number,
    revision?: number,
  ): Promise<{ revision: number; k: number; seed: number }> {
    return this.post(`/sessions/${sessionId}/cluster`, { k, seed, revision });
  }

  bars(sessionId: string, cap = 500): Promise<BarsPayload> {
    return this.request(`/sessions/${sessionId}/bars?cap=${cap}`);
  }

  table(
    sessionId: string,
    sortBy: string,
    desc: boolean,
    filterType: string | null,
    filterMin: number,
  ): Promise<TablePayload> {
    const params = new URLSearchParams({ sort_by: sortBy, desc: String(desc) });
    if (filterType !== null) {
      params.set("filter_type", filterType);
      params.set("filter_min", String(filterMin));
    }
    return this.request(`/sessions/${sessionId}/table?${params}`);
  }

  maskUrl(sessionId: string, revision: number): string {
    return `${this.base}/sessions/${sessionId}/mask.png?rev=${revision}`;
  }

  eventsUrl(sessionId: string, location: { protocol: string; host: string }): string {
    const scheme = location.protocol === "https:" ? "wss:" : "ws:";
    return `${scheme}//${location.host}${this.base}/sessions/${sessionId}/events`;
  }
}
