/** Shared session state behind all views.
 *
 *  The store owns the WebSocket, refetches after every server mutation,
 *  and commits one internally consistent ViewState per revision: every
 *  subscriber always renders snapshot, bars, clustering, and mask URL
 *  from the same revision, and committed revisions never go backwards.
 *
 *  Selection posts are debounced (trailing edge, >= 50 ms) and tagged
 *  with the revision they were computed against; a 409 answer triggers
 *  a resync and a single retry on top of the fresh revision.
 */

import { ApiClient, ApiRequestError } from "./api.js";
import type {
  BarsPayload,
  ClusterPayload,
  DatasetMeta,
  EmbeddingPayload,
  SelectionBody,
  SelectionMode,
  SessionEvent,
  SessionSnapshot,
  TablePayload,
  ViewState,
} from "./types.js";

export interface SocketLike {
  onopen: (() => void) | null;
  onmessage: ((ev: { data: string }) => void) | null;
  onclose: (() => void) | null;
  close(): void;
}

export type SocketFactory = (url: string) => SocketLike;

export interface StoreOptions {
  barCap?: number;
  debounceMs?: number;
  reconnectMs?: number;
  onError?: (err: Error) => void;
}

type Listener = (state: ViewState) => void;

const SYNC_ATTEMPTS = 4;

export class SessionStore {
  readonly api: ApiClient;
  readonly datasetId: string;
  readonly sessionId: string;

  private readonly socketFactory: SocketFactory;
  private readonly barCap: number;
  private readonly debounceMs: number;
  private readonly reconnectMs: number;
  private readonly onError: (err: Error) => void;

  private listeners: Listener[] = [];
  private current: ViewState | null = null;

  private dataset!: DatasetMeta;
  private embedding!: EmbeddingPayload;
  private positions!: [number, number][];

  private socket: SocketLike | null = null;
  private disposed = false;

  private syncing = false;
  private syncQueued = false;
  private syncTimer: ReturnType<typeof setTimeout> | null = null;

  private pendingSelection: { body: SelectionBody; mode: SelectionMode } | null = null;
  private selectionTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    api: ApiClient,
    datasetId: string,
    sessionId: string,
    socketFactory: SocketFactory,
    opts: StoreOptions = {},
  ) {
    this.api = api;
    this.datasetId = datasetId;
    this.sessionId = sessionId;
    this.socketFactory = socketFactory;
    this.barCap = opts.barCap ?? 500;
    this.debounceMs = opts.debounceMs ?? 50;
    this.reconnectMs = opts.reconnectMs ?? 1000;
    this.onError = opts.onError ?? ((err) => console.error(err));
  }

  get state(): ViewState | null {
    return this.current;
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    if (this.current) fn(this.current);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  /** Re-deliver the committed state, e.g. after a canvas resize. */
  renotify(): void {
    if (!this.current) return;
    for (const fn of this.listeners) fn(this.current);
  }

  /** Fetch the immutable dataset payloads, sync once, open the socket. */
  async start(wsUrl: string): Promise<void> {
    this.dataset = await this.api.datasetMeta(this.datasetId);
    this.embedding = await this.api.embedding(this.datasetId);
    this.positions = (await this.api.spots(this.datasetId)).positions;
    await this.sync();
    this.connect(wsUrl);
  }

  dispose(): void {
    this.disposed = true;
    if (this.syncTimer !== null) clearTimeout(this.syncTimer);
    if (this.selectionTimer !== null) clearTimeout(this.selectionTimer);
    this.socket?.close();
  }

  private connect(wsUrl: string): void {
    if (this.disposed) return;
    const socket = this.socketFactory(wsUrl);
    this.socket = socket;
    socket.onopen = () => this.syncSoon();
    socket.onmessage = (ev) => {
      const event = JSON.parse(ev.data) as SessionEvent;
      this.handleEvent(event);
    };
    socket.onclose = () => {
      if (!this.disposed) setTimeout(() => this.connect(wsUrl), this.reconnectMs);
    };
  }

  /** Server events arrive in revision order; anything at or below the
   *  committed revision is already reflected and gets dropped. */
  handleEvent(event: SessionEvent): void {
    if (this.current && event.revision <= this.current.revision) return;
    this.syncSoon();
  }

  /** Trailing-edge coalescing: bursts of events cause one refetch. */
  private syncSoon(): void {
    if (this.syncTimer !== null) clearTimeout(this.syncTimer);
    this.syncTimer = setTimeout(() => {
      this.syncTimer = null;
      void this.sync();
    }, this.debounceMs);
  }

  /** Refetch until snapshot and bars agree on one revision, then commit. */
  async sync(): Promise<void> {
    if (this.syncing) {
      this.syncQueued = true;
      return;
    }
    this.syncing = true;
    try {
      for (let attempt = 0; attempt < SYNC_ATTEMPTS; attempt++) {
        const snap = await this.api.snapshot(this.sessionId);
        const bars = await this.api.bars(this.sessionId, this.barCap);
        if (bars.revision !== snap.revision) continue; // raced a mutation
        let clustering = this.current?.clustering ?? null;
        if (snap.k !== null && snap.seed !== null) {
          if (!clustering || clustering.k !== snap.k || clustering.seed !== snap.seed) {
            clustering = await this.api.cluster(this.datasetId, snap.k, snap.seed);
          }
        } else {
          clustering = null;
        }
        if (this.current && snap.revision < this.current.revision) return;
        this.commit(snap, bars, clustering);
        return;
      }
      this.onError(new Error("session kept mutating during sync; giving up"));
    } catch (err) {
      this.onError(err as Error);
    } finally {
      this.syncing = false;
      if (this.syncQueued) {
        this.syncQueued = false;
        void this.sync();
      }
    }
  }

  private commit(
    snap: SessionSnapshot,
    bars: BarsPayload,
    clustering: ClusterPayload | null,
  ): void {
    this.current = {
      revision: snap.revision,
      dataset: this.dataset,
      embedding: this.embedding,
      positions: this.positions,
      selection: new Set(snap.selection),
      k: snap.k,
      seed: snap.seed,
      clustering,
      bars,
      maskUrl: this.api.maskUrl(this.sessionId, snap.revision),
    };
    for (const fn of this.listeners) fn(this.current);
  }

  /** Queue a brush result; rapid calls within the debounce window
   *  collapse to the latest one. */
  requestSelection(body: SelectionBody, mode: SelectionMode): void {
    this.pendingSelection = { body, mode };
    if (this.selectionTimer !== null) clearTimeout(this.selectionTimer);
    this.selectionTimer = setTimeout(() => {
      this.selectionTimer = null;
      void this.flushSelection();
    }, this.debounceMs);
  }

  selectCluster(label: number): void {
    this.requestSelection({ source: "cluster", payload: { label } }, "replace");
  }

  selectSpot(index: number): void {
    this.requestSelection({ source: "ids", payload: { ids: [index] } }, "replace");
  }

  clearSelection(): void {
    this.requestSelection({ source: "ids", payload: { ids: [] } }, "replace");
  }

  private async flushSelection(): Promise<void> {
    const pending = this.pendingSelection;
    if (!pending) return;
    this.pendingSelection = null;
    try {
      await this.postSelectionOnce(pending.body, pending.mode);
    } catch (err) {
      this.onError(err as Error);
    }
  }

  private async postSelectionOnce(
    body: SelectionBody,
    mode: SelectionMode,
  ): Promise<void> {
    const expected = this.current?.revision;
    try {
      await this.api.postSelection(this.sessionId, body, mode, expected);
    } catch (err) {
      if (err instanceof ApiRequestError && err.status === 409) {
        // another client moved the session; rebase on its revision
        await this.sync();
        await this.api.postSelection(this.sessionId, body, mode, this.current?.revision);
      } else {
        throw err;
      }
    }
    await this.sync();
  }

  async recluster(k: number, seed: number): Promise<void> {
    try {
      try {
        await this.api.setClustering(this.sessionId, k, seed, this.current?.revision);
      } catch (err) {
        if (err instanceof ApiRequestError && err.status === 409) {
          await this.sync();
          await this.api.setClustering(this.sessionId, k, seed, this.current?.revision);
        } else {
          throw err;
        }
      }
      await this.sync();
    } catch (err) {
      this.onError(err as Error);
    }
  }

  fetchTable(
    sortBy: string,
    desc: boolean,
    filterType: string | null,
    filterMin: number,
  ): Promise<TablePayload> {
    return this.api.table(this.sessionId, sortBy, desc, filterType, filterMin);
  }
}
