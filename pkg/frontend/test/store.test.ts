import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";
import { ApiClient } from "../src/api.js";
import { SessionStore, type SocketLike } from "../src/store.js";
import type { ViewState } from "../src/types.js";

const CELL_TYPES = ["typeA", "typeB", "typeC"];
const POSITIONS: [number, number][] = [
  [10, 10],
  [90, 10],
  [10, 90],
  [90, 90],
];
const COMPOSITIONS = [
  [0.2, 0.3, 0.5],
  [0.5, 0.5, 0.0],
  [0.25, 0.25, 0.5],
  [0.1, 0.1, 0.8],
];

/** Single-session in-memory stand-in for the HTTP API. */
class FakeServer {
  revision = 0;
  selection: number[] = [];
  k: number | null = null;
  seed: number | null = null;
  staleBarsReads = 0; // serve bars at revision-1 for this many reads
  getCount = new Map<string, number>();
  clusterComputes = 0;
  selectionPosts: Record<string, unknown>[] = [];

  private countGet(path: string): void {
    this.getCount.set(path, (this.getCount.get(path) ?? 0) + 1);
  }

  fetch = async (url: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    const body = init?.body ? (JSON.parse(init.body as string) as Record<string, unknown>) : {};
    const path = url.split("?")[0];
    if (method === "GET") this.countGet(path);

    const reply = (status: number, payload: unknown) =>
      new Response(JSON.stringify(payload), { status });

    if (path === "/datasets/d1" && method === "GET") {
      return reply(200, {
        dataset_id: "d1",
        n: 4,
        d: 3,
        cell_types: CELL_TYPES,
        image_size: [100, 100],
        spot_radius_px: 4,
      });
    }
    if (path === "/datasets/d1/embedding") {
      return reply(200, {
        coords: [
          [-2, 0],
          [-1, 0.5],
          [1, -0.5],
          [2, 0],
        ],
        explained_variance: [3, 1],
        pc1_order: [0, 1, 2, 3],
      });
    }
    if (path === "/datasets/d1/spots") {
      return reply(200, {
        total: 4,
        offset: 0,
        limit: 100000,
        spot_ids: ["s0", "s1", "s2", "s3"],
        positions: POSITIONS,
        proportions: COMPOSITIONS,
      });
    }
    if (path === "/datasets/d1/cluster" && method === "POST") {
      this.clusterComputes++;
      return reply(200, {
        k: body.k,
        seed: body.seed,
        labels: [0, 0, 1, 1],
        centroids: [
          [0.3, 0.4, 0.3],
          [0.2, 0.2, 0.6],
        ],
        inertia: 1.5,
        iterations: 3,
      });
    }
    if (path === "/sessions/s1" && method === "GET") {
      return reply(200, {
        session_id: "s1",
        dataset_id: "d1",
        revision: this.revision,
        k: this.k,
        seed: this.seed,
        selection: [...this.selection],
        count: this.selection.length,
      });
    }
    if (path === "/sessions/s1/bars") {
      let revision = this.revision;
      if (this.staleBarsReads > 0) {
        this.staleBarsReads--;
        revision = this.revision - 1;
      }
      const indices = this.selection.length > 0 ? [...this.selection].sort() : [0, 1, 2, 3];
      return reply(200, {
        revision,
        bar_indices: indices,
        spot_ids: indices.map((i) => `s${i}`),
        compositions: indices.map((i) => COMPOSITIONS[i]),
      });
    }
    if (path === "/sessions/s1/selection" && method === "POST") {
      this.selectionPosts.push(body);
      if (body.revision != null && body.revision !== this.revision) {
        return reply(409, { error: "StaleRevision", field: null, message: "stale", revision: this.revision });
      }
      const payload = body.payload as { ids: number[] };
      this.selection = [...payload.ids];
      this.revision++;
      return reply(200, { revision: this.revision, count: this.selection.length });
    }
    if (path === "/sessions/s1/cluster" && method === "POST") {
      if (body.revision != null && body.revision !== this.revision) {
        return reply(409, { error: "StaleRevision", field: null, message: "stale", revision: this.revision });
      }
      this.k = body.k as number;
      this.seed = body.seed as number;
      this.revision++;
      return reply(200, { revision: this.revision, k: this.k, seed: this.seed });
    }
    return reply(404, { error: "NotFound", field: null, message: path });
  };
}

class FakeSocket implements SocketLike {
  onopen: (() => void) | null = null;
  onmessage: ((ev: { data: string }) => void) | null = null;
  onclose: (() => void) | null = null;
  closed = false;
  close(): void {
    this.closed = true;
  }
  emit(revision: number, changed: string[] = ["selection"]): void {
    this.onmessage?.({ data: JSON.stringify({ revision, changed }) });
  }
}

function makeStore(server: FakeServer, onError?: (e: Error) => void) {
  const api = new ApiClient("", (u, i) => server.fetch(u, i));
  const sockets: FakeSocket[] = [];
  const store = new SessionStore(
    api,
    "d1",
    "s1",
    () => {
      const s = new FakeSocket();
      sockets.push(s);
      return s;
    },
    { debounceMs: 50, onError: onError ?? ((e) => { throw e; }) },
  );
  return { store, sockets };
}

describe("SessionStore", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });

  afterEach(() => {
    vi.useRealTimers();
  });

  it("commits a consistent initial state on start", async () => {
    const server = new FakeServer();
    const { store, sockets } = makeStore(server);
    await store.start("ws://test/sessions/s1/events");
    expect(sockets).toHaveLength(1);
    const state = store.state;
    expect(state).not.toBeNull();
    expect(state!.revision).toBe(0);
    expect(state!.dataset.n).toBe(4);
    expect(state!.positions).toHaveLength(4);
    expect(state!.selection.size).toBe(0);
    expect(state!.clustering).toBeNull();
    expect(state!.bars.bar_indices).toEqual([0, 1, 2, 3]);
    expect(state!.maskUrl).toBe("/sessions/s1/mask.png?rev=0");
    store.dispose();
  });

  it("coalesces an event burst into one resync", async () => {
    const server = new FakeServer();
    const { store, sockets } = makeStore(server);
    await store.start("ws://test");
    const before = server.getCount.get("/sessions/s1") ?? 0;

    server.selection = [1, 2];
    server.revision = 3;
    sockets[0].emit(1);
    sockets[0].emit(2);
    sockets[0].emit(3);
    await vi.advanceTimersByTimeAsync(49);
    expect(server.getCount.get("/sessions/s1") ?? 0).toBe(before); // still debouncing
    await vi.advanceTimersByTimeAsync(10);
    expect(server.getCount.get("/sessions/s1") ?? 0).toBe(before + 1);
    expect(store.state!.revision).toBe(3);
    expect(store.state!.selection).toEqual(new Set([1, 2]));
    store.dispose();
  });

  it("ignores events at or below the committed revision", async () => {
    const server = new FakeServer();
    const { store, sockets } = makeStore(server);
    await store.start("ws://test");
    const before = server.getCount.get("/sessions/s1") ?? 0;
    sockets[0].emit(0);
    await vi.advanceTimersByTimeAsync(200);
    expect(server.getCount.get("/sessions/s1") ?? 0).toBe(before);
    store.dispose();
  });

  it("debounces rapid selection requests down to the last one", async () => {
    const server = new FakeServer();
    const { store } = makeStore(server);
    await store.start("ws://test");

    store.requestSelection({ source: "ids", payload: { ids: [0] } }, "replace");
    await vi.advanceTimersByTimeAsync(20);
    store.requestSelection({ source: "ids", payload: { ids: [1, 2] } }, "replace");
    await vi.advanceTimersByTimeAsync(100);

    expect(server.selectionPosts).toHaveLength(1);
    expect((server.selectionPosts[0].payload as { ids: number[] }).ids).toEqual([1, 2]);
    expect(store.state!.revision).toBe(1);
    expect(store.state!.selection).toEqual(new Set([1, 2]));
    store.dispose();
  });

  it("tags posts with the rendered revision and recovers from 409", async () => {
    const server = new FakeServer();
    const { store } = makeStore(server);
    await store.start("ws://test");

    // another client moves the session; our store still renders revision 0
    server.selection = [3];
    server.revision = 2;

    store.selectSpot(1);
    await vi.advanceTimersByTimeAsync(100);

    expect(server.selectionPosts).toHaveLength(2);
    expect(server.selectionPosts[0].revision).toBe(0); // stale, rejected
    expect(server.selectionPosts[1].revision).toBe(2); // rebased after resync
    expect(server.revision).toBe(3);
    expect(store.state!.revision).toBe(3);
    expect(store.state!.selection).toEqual(new Set([1]));
    store.dispose();
  });

  it("refetches when bars lag the snapshot so commits stay consistent", async () => {
    const server = new FakeServer();
    const commits: number[] = [];
    const { store, sockets } = makeStore(server);
    await store.start("ws://test");
    store.subscribe((s: ViewState) => commits.push(s.revision));

    server.selection = [2];
    server.revision = 1;
    server.staleBarsReads = 1; // first bars read reports revision 0
    sockets[0].emit(1);
    await vi.advanceTimersByTimeAsync(100);

    expect(store.state!.revision).toBe(1);
    expect(store.state!.bars.revision).toBe(1);
    // the inconsistent round was retried, not committed
    expect(commits).toEqual([0, 1]);
    store.dispose();
  });

  it("never commits a lower revision than the one on screen", async () => {
    const server = new FakeServer();
    const commits: number[] = [];
    const { store } = makeStore(server);
    await store.start("ws://test");
    store.subscribe((s: ViewState) => commits.push(s.revision));

    server.revision = 5;
    server.selection = [0];
    await store.sync();
    // a sync against an older server view must not roll the state back
    server.revision = 4;
    await store.sync();

    expect(store.state!.revision).toBe(5);
    for (let i = 1; i < commits.length; i++) {
      expect(commits[i]).toBeGreaterThanOrEqual(commits[i - 1]);
    }
    store.dispose();
  });

  it("fetches clustering once per (k, seed) and reuses it", async () => {
    const server = new FakeServer();
    const { store, sockets } = makeStore(server);
    await store.start("ws://test");

    await store.recluster(3, 7);
    expect(server.k).toBe(3);
    expect(server.seed).toBe(7);
    expect(store.state!.clustering).not.toBeNull();
    expect(store.state!.clustering!.labels).toEqual([0, 0, 1, 1]);
    expect(server.clusterComputes).toBe(1);

    // an unrelated selection change must not refetch the clustering
    server.selection = [1];
    server.revision = 2;
    sockets[0].emit(2);
    await vi.advanceTimersByTimeAsync(100);
    expect(store.state!.revision).toBe(2);
    expect(server.clusterComputes).toBe(1);
    store.dispose();
  });

  it("retries recluster once after a stale revision answer", async () => {
    const server = new FakeServer();
    const { store } = makeStore(server);
    await store.start("ws://test");

    server.revision = 4; // moved elsewhere
    await store.recluster(2, 0);

    expect(server.k).toBe(2);
    expect(server.revision).toBe(5);
    expect(store.state!.revision).toBe(5);
    store.dispose();
  });

  it("routes request failures to onError and keeps the last good state", async () => {
    const server = new FakeServer();
    const errors: Error[] = [];
    const { store } = makeStore(server, (e) => errors.push(e));
    await store.start("ws://test");

    server.fetch = async () =>
      new Response(JSON.stringify({ error: "NotFound", field: null, message: "gone" }), {
        status: 404,
      });
    await store.sync();

    expect(errors).toHaveLength(1);
    expect(store.state!.revision).toBe(0);
    store.dispose();
  });
});
