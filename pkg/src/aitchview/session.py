"""Shared interaction state: selections, the 500-bar subset, occlusion masks.

Selections are plain frozensets of spot indices so the set algebra that
backs multi-view brushing stays trivially correct and hashable.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from PIL import Image

from .dataset import Dataset
from .embedding import Embedding
from .errors import BadCap, BadLabel, DegenerateInput, UnknownCellType

__all__ = [
    "MaskImage",
    "MASK_COLOR",
    "select_by_region",
    "select_by_cluster",
    "combine",
    "bar_subset",
    "render_mask",
    "mask_to_png",
    "table_rows",
]

SELECTION_MODES = ("replace", "union", "intersect", "subtract")

#: dark purple overlay, matching the tissue-occlusion mask styling
MASK_COLOR = (48, 16, 66)


@dataclass(frozen=True)
class MaskImage:
    """Per-pixel overlay alpha; 0 over selected spots, overlay_alpha elsewhere."""

    width: int
    height: int
    alpha: np.ndarray  # (height, width) floats in {0, overlay_alpha}


def select_by_region(dataset: Dataset, shape, space: str = "image",
                     embedding: Embedding | None = None) -> frozenset:
    """Spots whose point lies inside or on the boundary of ``shape``.

    ``space="image"`` tests spot pixel positions, ``space="scatter"``
    tests the 2D embedding coordinates (``embedding`` required).
    """
    if space == "image":
        points = dataset.positions()
    elif space == "scatter":
        if embedding is None:
            raise DegenerateInput("scatter-space selection needs an embedding")
        points = embedding.coords
    else:
        raise DegenerateInput(f"unknown selection space {space!r}")
    return frozenset(
        i for i, (x, y) in enumerate(points) if shape.contains(float(x), float(y))
    )


def select_by_cluster(clustering, label: int) -> frozenset:
    """All spot indices carrying the given cluster label."""
    if not 0 <= label < clustering.k:
        raise BadLabel(f"label must lie in [0, {clustering.k}), got {label}")
    return frozenset(int(i) for i in np.nonzero(clustering.labels == label)[0])


def combine(a: frozenset, b: frozenset, mode: str = "replace") -> frozenset:
    """Merge two selections: replace, union, intersect, or subtract."""
    if mode == "replace":
        return frozenset(b)
    if mode == "union":
        return frozenset(a | b)
    if mode == "intersect":
        return frozenset(a & b)
    if mode == "subtract":
        return frozenset(a - b)
    raise DegenerateInput(f"unknown combine mode {mode!r}")


def bar_subset(embedding: Embedding, source=None, cap: int = 500) -> list:
    """Pick the <= ``cap`` spots shown as bars, in ascending PC1 order.

    ``source`` limits the bars to a selection (None means all spots).
    When the PC1-ordered source exceeds ``cap``, indices are decimated
    nearest-neighbor style at positions round(i * (m-1) / (cap-1)), which
    always keeps both endpoints and strictly increases.
    """
    if cap < 2:
        raise BadCap(f"cap must be >= 2, got {cap}")
    if source is None:
        ordered = [int(i) for i in embedding.pc1_order]
    else:
        members = set(int(i) for i in source)
        ordered = [int(i) for i in embedding.pc1_order if int(i) in members]
    m = len(ordered)
    if m <= cap:
        return ordered
    positions = np.floor(np.arange(cap) * (m - 1) / (cap - 1) + 0.5).astype(int)
    return [ordered[p] for p in positions]


def render_mask(dataset: Dataset, selection, overlay_alpha: float = 0.6) -> MaskImage:
    """Rasterize the occlusion overlay revealing the selected spots.

    The whole image is covered at ``overlay_alpha`` except hard-edged
    transparent disks of radius ``dataset.spot_radius_px`` around each
    selected spot.  A pixel is transparent iff its center (ix + 0.5,
    iy + 0.5) lies within the radius of some selected spot (<= compare,
    so exact-boundary pixels are revealed).
    """
    if not 0 < overlay_alpha <= 1:
        raise ValueError(f"overlay_alpha must lie in (0, 1], got {overlay_alpha}")
    w, h = dataset.image_width, dataset.image_height
    alpha = np.full((h, w), overlay_alpha, dtype=float)
    r = dataset.spot_radius_px
    r2 = r * r
    for i in selection:
        spot = dataset.spots[int(i)]
        # one pixel of margin so float rounding can never clip the rim
        ix0 = max(0, math.floor(spot.x - r) - 1)
        ix1 = min(w - 1, math.ceil(spot.x + r) + 1)
        iy0 = max(0, math.floor(spot.y - r) - 1)
        iy1 = min(h - 1, math.ceil(spot.y + r) + 1)
        if ix1 < ix0 or iy1 < iy0:
            continue
        dx = np.arange(ix0, ix1 + 1, dtype=float) + 0.5 - spot.x
        dy = np.arange(iy0, iy1 + 1, dtype=float) + 0.5 - spot.y
        inside = dy[:, None] ** 2 + dx[None, :] ** 2 <= r2
        block = alpha[iy0:iy1 + 1, ix0:ix1 + 1]
        block[inside] = 0.0
    return MaskImage(width=w, height=h, alpha=alpha)


def mask_to_png(mask: MaskImage, color=MASK_COLOR) -> bytes:
    """Encode a mask as an 8-bit straight-alpha RGBA PNG."""
    rgba = np.empty((mask.height, mask.width, 4), dtype=np.uint8)
    rgba[..., 0] = color[0]
    rgba[..., 1] = color[1]
    rgba[..., 2] = color[2]
    rgba[..., 3] = np.round(mask.alpha * 255.0).astype(np.uint8)
    buf = io.BytesIO()
    Image.fromarray(rgba, mode="RGBA").save(buf, format="PNG")
    return buf.getvalue()


def table_rows(dataset: Dataset, sort_by: str = "spot_id", descending: bool = False,
               min_filter=None) -> list:
    """Rows of (spot id, composition), filtered then stably sorted.

    ``sort_by`` is ``"spot_id"`` or a cell-type name; ``min_filter`` is an
    optional ``(cell_type, threshold)`` keeping rows with proportion >=
    threshold.  Ties keep ascending spot-index order.
    """
    rows = [(spot.id, spot.proportions) for spot in dataset.spots]

    if min_filter is not None:
        cell_type, threshold = min_filter
        if cell_type not in dataset.cell_types:
            raise UnknownCellType(f"no cell type {cell_type!r} in dataset")
        j = dataset.cell_types.index(cell_type)
        rows = [row for row in rows if row[1][j] >= threshold]

    if sort_by == "spot_id":
        key = lambda row: row[0]
    elif sort_by in dataset.cell_types:
        j = dataset.cell_types.index(sort_by)
        key = lambda row: float(row[1][j])
    else:
        raise UnknownCellType(f"no cell type {sort_by!r} in dataset")
    return sorted(rows, key=key, reverse=descending)
