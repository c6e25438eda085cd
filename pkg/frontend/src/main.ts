/** Entry point: pick a dataset, open a session, wire the linked views. */

import { ApiClient, ApiRequestError } from "./api.js";
import { BarsView } from "./bars.js";
import { ControlsView } from "./controls.js";
import { ScatterView } from "./scatter.js";
import { SessionStore, type SocketLike } from "./store.js";
import { TableView } from "./table.js";
import { TissueView } from "./tissue.js";

/** Narrow a browser WebSocket to the handler shape the store expects. */
function browserSocket(url: string): SocketLike {
  const ws = new WebSocket(url);
  const adapter: SocketLike = {
    onopen: null,
    onmessage: null,
    onclose: null,
    close: () => ws.close(),
  };
  ws.onopen = () => adapter.onopen?.();
  ws.onmessage = (ev) => adapter.onmessage?.({ data: String(ev.data) });
  ws.onclose = () => adapter.onclose?.();
  return adapter;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function showToast(message: string, onRetry?: () => void): void {
  const toast = el<HTMLElement>("toast");
  toast.textContent = "";
  toast.appendChild(document.createTextNode(message));
  if (onRetry) {
    const btn = document.createElement("button");
    btn.textContent = "retry";
    btn.addEventListener("click", () => {
      toast.classList.remove("visible");
      onRetry();
    });
    toast.appendChild(btn);
  }
  toast.classList.add("visible");
  setTimeout(() => toast.classList.remove("visible"), 8000);
}

function sizeCanvas(canvas: HTMLCanvasElement): void {
  const box = canvas.getBoundingClientRect();
  canvas.width = Math.max(1, Math.floor(box.width));
  canvas.height = Math.max(1, Math.floor(box.height));
}

async function pickDataset(api: ApiClient): Promise<string> {
  const existing = (await api.listDatasets()).datasets;
  if (existing.length > 0) return existing[0].dataset_id;
  return new Promise((resolve) => {
    const form = el<HTMLElement>("dataset-form");
    form.classList.add("visible");
    const input = el<HTMLInputElement>("manifest-path");
    const button = el<HTMLButtonElement>("load-dataset");
    button.addEventListener("click", () => {
      void (async () => {
        try {
          const meta = await api.loadDataset(input.value.trim());
          form.classList.remove("visible");
          resolve(meta.dataset_id);
        } catch (err) {
          const detail =
            err instanceof ApiRequestError ? err.body.message ?? err.body.error : String(err);
          showToast(`could not load dataset: ${detail}`);
        }
      })();
    });
  });
}

async function boot(): Promise<void> {
  const api = new ApiClient("");
  const datasetId = await pickDataset(api);
  const session = await api.createSession(datasetId);

  const store = new SessionStore(
    api,
    datasetId,
    session.session_id,
    browserSocket,
    { onError: (err) => showToast(err.message, () => void store.sync()) },
  );

  const tissueCanvas = el<HTMLCanvasElement>("tissue-canvas");
  const scatterCanvas = el<HTMLCanvasElement>("scatter-canvas");
  const barsCanvas = el<HTMLCanvasElement>("bars-canvas");
  for (const c of [tissueCanvas, scatterCanvas, barsCanvas]) sizeCanvas(c);

  const tissue = new TissueView(
    tissueCanvas,
    el<HTMLElement>("status"),
    store,
    api.imageUrl(datasetId),
  );
  new ScatterView(scatterCanvas, store);
  new BarsView(barsCanvas, el<HTMLElement>("legend"), store);
  new ControlsView(el<HTMLElement>("controls"), store);

  el<HTMLSelectElement>("overlay-mode").addEventListener("change", (ev) => {
    tissue.setMode((ev.target as HTMLSelectElement).value as "dots" | "mask");
  });
  el<HTMLSelectElement>("brush-kind").addEventListener("change", (ev) => {
    tissue.setBrush((ev.target as HTMLSelectElement).value as "rect" | "lasso");
  });

  window.addEventListener("resize", () => {
    for (const c of [tissueCanvas, scatterCanvas, barsCanvas]) sizeCanvas(c);
    store.renotify();
  });

  await store.start(api.eventsUrl(session.session_id, window.location));
  const meta = store.state?.dataset;
  new TableView(el<HTMLElement>("table"), store, meta ? meta.cell_types : []);
}

boot().catch((err) => {
  showToast(
    err instanceof ApiRequestError
      ? `server error: ${err.body.message ?? err.body.error}`
      : `startup failed: ${String(err)}`,
  );
});
