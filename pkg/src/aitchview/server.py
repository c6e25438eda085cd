"""HTTP + WebSocket API sharing analysis state between the linked views.

All state is in-memory and per-process.  Sessions serialize their
mutations behind a lock and bump a revision counter exactly once per
change; WebSocket subscribers get every revision in order because the
fan-out happens while that lock is held.
"""

from __future__ import annotations

import asyncio
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Query, WebSocket, WebSocketDisconnect
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .clustering import Clustering, kmeans
from .composition import clr_inv
from .dataset import Dataset, load_dataset
from .embedding import Embedding, PcaModel, pca_fit, pca_project
from .errors import AitchviewError, DegenerateInput, OutOfBounds
from .geometry import Polygon, Rect
from .session import (
    SELECTION_MODES,
    bar_subset,
    combine,
    mask_to_png,
    render_mask,
    select_by_cluster,
    select_by_region,
    table_rows,
)

__all__ = ["create_app"]


class NotFound(Exception):
    def __init__(self, kind: str, item_id: str):
        super().__init__(f"no {kind} with id {item_id!r}")
        self.kind = kind
        self.item_id = item_id


class StaleRevision(Exception):
    def __init__(self, sent: int, current: int):
        super().__init__(f"revision {sent} is stale, server is at {current}")
        self.sent = sent
        self.current = current


@dataclass
class DatasetEntry:
    """A loaded dataset with its cached (deterministic) analysis results."""

    id: str
    dataset: Dataset
    model: PcaModel
    embedding: Embedding
    clusters: dict = field(default_factory=dict)  # (k, seed) -> Clustering
    lock: threading.Lock = field(default_factory=threading.Lock)

    def cluster(self, k: int, seed: int) -> Clustering:
        with self.lock:
            cached = self.clusters.get((k, seed))
        if cached is not None:
            return cached
        result = kmeans(self.dataset.clr_matrix(), k, seed=seed)
        with self.lock:
            return self.clusters.setdefault((k, seed), result)


@dataclass
class SessionEntry:
    """Mutable per-session view state; mutations serialized by ``lock``."""

    id: str
    dataset_id: str
    revision: int = 0
    selection: frozenset = frozenset()
    k: int | None = None
    seed: int | None = None
    clustering: Clustering | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)
    watchers: list = field(default_factory=list)  # (event loop, asyncio.Queue)

    def bump(self, changed: list) -> int:
        """Advance the revision and fan the event out.  Caller holds lock."""
        self.revision += 1
        event = {"revision": self.revision, "changed": changed}
        for loop, queue in self.watchers:
            try:
                loop.call_soon_threadsafe(queue.put_nowait, event)
            except RuntimeError:
                pass  # subscriber's loop already shut down
        return self.revision


class AppState:
    def __init__(self, data_dir: Path | None):
        self.data_dir = data_dir
        self.datasets: dict[str, DatasetEntry] = {}
        self.sessions: dict[str, SessionEntry] = {}
        self.lock = threading.Lock()
        self._counters: dict[str, int] = {}

    def next_id(self, prefix: str) -> str:
        # sequential ids keep two identically driven servers byte-identical
        with self.lock:
            self._counters[prefix] = self._counters.get(prefix, 0) + 1
            return f"{prefix}{self._counters[prefix]}"

    def dataset(self, dataset_id: str) -> DatasetEntry:
        entry = self.datasets.get(dataset_id)
        if entry is None:
            raise NotFound("dataset", dataset_id)
        return entry

    def session(self, session_id: str) -> SessionEntry:
        entry = self.sessions.get(session_id)
        if entry is None:
            raise NotFound("session", session_id)
        return entry


class DatasetIn(BaseModel):
    manifest_path: str


class SessionIn(BaseModel):
    dataset_id: str


class ClusterIn(BaseModel):
    k: int
    seed: int = 0


class SessionClusterIn(BaseModel):
    k: int
    seed: int = 0
    revision: int | None = None


class SelectionIn(BaseModel):
    mode: str = "replace"
    source: str
    payload: dict = Field(default_factory=dict)
    revision: int | None = None


def _dataset_meta(entry: DatasetEntry) -> dict:
    ds = entry.dataset
    return {
        "dataset_id": entry.id,
        "n": ds.n,
        "d": ds.d,
        "cell_types": list(ds.cell_types),
        "image_size": [ds.image_width, ds.image_height],
        "spot_radius_px": ds.spot_radius_px,
    }


def _region_shape(source: str, payload: dict):
    if source == "rect":
        return Rect(
            float(payload["x0"]), float(payload["y0"]),
            float(payload["x1"]), float(payload["y1"]),
        )
    return Polygon([(float(x), float(y)) for x, y in payload["vertices"]])


def _resolve_selection(state: AppState, entry: SessionEntry, body: SelectionIn) -> frozenset:
    ds_entry = state.dataset(entry.dataset_id)
    source, payload = body.source, body.payload
    if source in ("rect", "polygon"):
        shape = _region_shape(source, payload)
        space = payload.get("space", "image")
        return select_by_region(
            ds_entry.dataset, shape, space=space, embedding=ds_entry.embedding
        )
    if source == "cluster":
        if entry.clustering is None:
            raise DegenerateInput(
                "session has no active clustering to select from", field="source"
            )
        return select_by_cluster(entry.clustering, int(payload["label"]))
    if source == "ids":
        indices = [int(i) for i in payload["ids"]]
        n = ds_entry.dataset.n
        for i in indices:
            if not 0 <= i < n:
                raise OutOfBounds(str(i), f"spot index {i} outside [0, {n})")
        return frozenset(indices)
    raise DegenerateInput(f"unknown selection source {source!r}", field="source")


def create_app(data_dir=None, ui_dir=None) -> FastAPI:
    """Build the application; ``data_dir`` anchors relative manifest paths."""
    state = AppState(Path(data_dir) if data_dir is not None else None)
    app = FastAPI(title="aitchview", docs_url=None, redoc_url=None)
    app.state.aitchview = state

    @app.exception_handler(AitchviewError)
    def domain_error(request, exc: AitchviewError):
        return JSONResponse(
            status_code=400,
            content={"error": exc.code, "field": exc.field, "message": str(exc)},
        )

    @app.exception_handler(NotFound)
    def not_found(request, exc: NotFound):
        return JSONResponse(
            status_code=404,
            content={"error": "NotFound", "field": exc.kind, "message": str(exc)},
        )

    @app.exception_handler(StaleRevision)
    def stale_revision(request, exc: StaleRevision):
        return JSONResponse(
            status_code=409,
            content={
                "error": "StaleRevision",
                "field": "revision",
                "message": str(exc),
                "revision": exc.current,
            },
        )

    @app.exception_handler(RequestValidationError)
    def invalid_request(request, exc: RequestValidationError):
        first = exc.errors()[0]
        loc = ".".join(str(part) for part in first["loc"] if part != "body")
        return JSONResponse(
            status_code=400,
            content={"error": "ValidationError", "field": loc, "message": first["msg"]},
        )

    @app.get("/health")
    def health():
        return PlainTextResponse("ok")

    # -- datasets -------------------------------------------------------------

    @app.post("/datasets")
    def create_dataset(body: DatasetIn):
        path = Path(body.manifest_path)
        if not path.is_absolute() and state.data_dir is not None:
            path = state.data_dir / path
        dataset = load_dataset(path)
        z = dataset.clr_matrix()
        model = pca_fit(z)
        entry = DatasetEntry(
            id=state.next_id("d"),
            dataset=dataset,
            model=model,
            embedding=pca_project(model, z),
        )
        state.datasets[entry.id] = entry
        meta = _dataset_meta(entry)
        del meta["spot_radius_px"]
        return meta

    @app.get("/datasets")
    def list_datasets():
        return {"datasets": [_dataset_meta(e) for e in state.datasets.values()]}

    @app.get("/datasets/{dataset_id}")
    def dataset_meta(dataset_id: str):
        return _dataset_meta(state.dataset(dataset_id))

    @app.get("/datasets/{dataset_id}/spots")
    def dataset_spots(
        dataset_id: str,
        offset: int = Query(0, ge=0),
        limit: int = Query(1000, ge=1),
    ):
        ds = state.dataset(dataset_id).dataset
        page = ds.spots[offset:offset + limit]
        return {
            "total": ds.n,
            "offset": offset,
            "limit": limit,
            "spot_ids": [s.id for s in page],
            "positions": [[s.x, s.y] for s in page],
            "proportions": [s.proportions.tolist() for s in page],
        }

    @app.get("/datasets/{dataset_id}/embedding")
    def dataset_embedding(dataset_id: str):
        emb = state.dataset(dataset_id).embedding
        model = state.dataset(dataset_id).model
        return {
            "coords": emb.coords.tolist(),
            "explained_variance": model.explained_variance.tolist(),
            "pc1_order": emb.pc1_order.tolist(),
        }

    @app.post("/datasets/{dataset_id}/cluster")
    def dataset_cluster(dataset_id: str, body: ClusterIn):
        entry = state.dataset(dataset_id)
        result = entry.cluster(body.k, body.seed)
        return {
            "k": result.k,
            "seed": result.seed,
            "labels": result.labels.tolist(),
            "centroids": clr_inv(result.centroids).tolist(),
            "inertia": float(result.inertia),
            "iterations": result.iterations,
        }

    @app.get("/datasets/{dataset_id}/image")
    def dataset_image(dataset_id: str):
        ds = state.dataset(dataset_id).dataset
        data = Path(ds.image_path).read_bytes()
        kind = "image/png" if data[:4] == b"\x89PNG" else "image/jpeg"
        return Response(content=data, media_type=kind)

    # -- sessions -------------------------------------------------------------

    @app.post("/sessions")
    def create_session(body: SessionIn):
        state.dataset(body.dataset_id)  # 404 before allocating an id
        entry = SessionEntry(id=state.next_id("s"), dataset_id=body.dataset_id)
        state.sessions[entry.id] = entry
        return {"session_id": entry.id, "dataset_id": entry.dataset_id, "revision": 0}

    @app.get("/sessions/{session_id}")
    def session_state(session_id: str):
        entry = state.session(session_id)
        with entry.lock:
            return {
                "session_id": entry.id,
                "dataset_id": entry.dataset_id,
                "revision": entry.revision,
                "k": entry.k,
                "seed": entry.seed,
                "selection": sorted(entry.selection),
                "count": len(entry.selection),
            }

    @app.post("/sessions/{session_id}/selection")
    def session_selection(session_id: str, body: SelectionIn):
        if body.mode not in SELECTION_MODES:
            raise DegenerateInput(f"unknown combine mode {body.mode!r}", field="mode")
        entry = state.session(session_id)
        with entry.lock:
            if body.revision is not None and body.revision != entry.revision:
                raise StaleRevision(body.revision, entry.revision)
            try:
                incoming = _resolve_selection(state, entry, body)
            except AitchviewError:
                raise
            except (KeyError, TypeError, ValueError) as exc:
                raise DegenerateInput(
                    f"bad {body.source!r} payload: {exc}", field="payload"
                )
            entry.selection = combine(entry.selection, incoming, body.mode)
            revision = entry.bump(["selection"])
            return {"revision": revision, "count": len(entry.selection)}

    @app.post("/sessions/{session_id}/cluster")
    def session_cluster(session_id: str, body: SessionClusterIn):
        entry = state.session(session_id)
        ds_entry = state.dataset(entry.dataset_id)
        with entry.lock:
            if body.revision is not None and body.revision != entry.revision:
                raise StaleRevision(body.revision, entry.revision)
            entry.clustering = ds_entry.cluster(body.k, body.seed)
            entry.k, entry.seed = body.k, body.seed
            revision = entry.bump(["clustering"])
            return {"revision": revision, "k": body.k, "seed": body.seed}

    @app.get("/sessions/{session_id}/bars")
    def session_bars(session_id: str, cap: int = Query(500)):
        entry = state.session(session_id)
        ds_entry = state.dataset(entry.dataset_id)
        with entry.lock:
            selection = entry.selection
            revision = entry.revision
        source = selection if selection else None
        indices = bar_subset(ds_entry.embedding, source=source, cap=cap)
        spots = ds_entry.dataset.spots
        return {
            "revision": revision,
            "bar_indices": indices,
            "spot_ids": [spots[i].id for i in indices],
            "compositions": [spots[i].proportions.tolist() for i in indices],
        }

    @app.get("/sessions/{session_id}/mask.png")
    def session_mask(session_id: str):
        entry = state.session(session_id)
        ds_entry = state.dataset(entry.dataset_id)
        with entry.lock:
            selection = entry.selection
        mask = render_mask(ds_entry.dataset, selection)
        return Response(content=mask_to_png(mask), media_type="image/png")

    @app.get("/sessions/{session_id}/table")
    def session_table(
        session_id: str,
        sort_by: str = "spot_id",
        desc: bool = False,
        filter_type: str | None = None,
        filter_min: float = 0.0,
    ):
        entry = state.session(session_id)
        ds = state.dataset(entry.dataset_id).dataset
        min_filter = (filter_type, filter_min) if filter_type is not None else None
        rows = table_rows(ds, sort_by=sort_by, descending=desc, min_filter=min_filter)
        return {
            "cell_types": list(ds.cell_types),
            "rows": [
                {"spot_id": spot_id, "proportions": props.tolist()}
                for spot_id, props in rows
            ],
        }

    @app.websocket("/sessions/{session_id}/events")
    async def session_events(websocket: WebSocket, session_id: str):
        entry = state.sessions.get(session_id)
        if entry is None:
            await websocket.close(code=4404)
            return
        await websocket.accept()
        loop = asyncio.get_running_loop()
        queue: asyncio.Queue = asyncio.Queue()
        watcher = (loop, queue)
        with entry.lock:
            entry.watchers.append(watcher)
            hello = {"revision": entry.revision, "changed": []}
        try:
            await websocket.send_json(hello)
            while True:
                await websocket.send_json(await queue.get())
        except WebSocketDisconnect:
            pass
        finally:
            with entry.lock:
                if watcher in entry.watchers:
                    entry.watchers.remove(watcher)

    if ui_dir is not None and Path(ui_dir).is_dir():
        # mounted last so every API route wins over the static bundle
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
