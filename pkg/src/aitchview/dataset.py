"""Dataset loading, validation, writing, and synthetic fixture generation.

A dataset is a manifest (JSON) referencing a proportions CSV, a positions
CSV, and a histology image.  The positions file's row order defines the
spot index order used by every other module.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .composition import closure, clr, replace_zeros
from .errors import (
    BadHeader,
    DegenerateInput,
    EmptyGrid,
    IdMismatch,
    MissingFile,
    NegativeEntry,
    OutOfBounds,
    ParseError,
    SumOutOfTolerance,
    UncoveredSpot,
)

__all__ = [
    "SpotRecord",
    "Dataset",
    "SyntheticGroundTruth",
    "validate_proportions",
    "load_dataset",
    "write_dataset",
    "generate_synthetic",
]

_IMAGE_FORMATS = {"PNG", "JPEG"}


@dataclass(frozen=True)
class SpotRecord:
    """One capture location: id, image-pixel position (y down), proportions."""

    id: str
    x: float
    y: float
    proportions: np.ndarray  # (d,) composition


@dataclass
class Dataset:
    """Spots plus cell-type names and the histology image reference.

    ``image_path`` may be None for in-memory synthetic datasets; it is
    filled in by :func:`write_dataset`.
    """

    cell_types: tuple
    spots: list
    image_width: int
    image_height: int
    spot_radius_px: float = 5.0
    image_path: Path | None = None

    @property
    def n(self) -> int:
        return len(self.spots)

    @property
    def d(self) -> int:
        return len(self.cell_types)

    def positions(self) -> np.ndarray:
        """(n, 2) array of spot positions in image pixel coordinates."""
        return np.array([[s.x, s.y] for s in self.spots], dtype=float)

    def proportions_matrix(self) -> np.ndarray:
        """(n, d) matrix of per-spot compositions, spot-index row order."""
        return np.array([s.proportions for s in self.spots], dtype=float)

    def clr_matrix(self, eps: float = 1e-6) -> np.ndarray:
        """CLR coordinates of all spots, zeros replaced multiplicatively."""
        return clr(replace_zeros(self.proportions_matrix(), eps=eps))

    def index_of(self, spot_id: str) -> int:
        for i, s in enumerate(self.spots):
            if s.id == spot_id:
                return i
        raise KeyError(spot_id)


@dataclass(frozen=True)
class SyntheticGroundTruth:
    """Planted region label per spot and the per-region Dirichlet parameters."""

    region_labels: np.ndarray  # (n,) ints
    region_params: tuple       # one concentration vector per region


def validate_proportions(row, tol: float = 1e-3) -> np.ndarray:
    """Check a raw proportions row and renormalize it onto the simplex.

    Deconvolution outputs carry rounding error, so sums within ``tol`` of
    1 are silently renormalized; anything farther off fails loudly.

    Raises
    ------
    NegativeEntry
        If any entry is negative.
    SumOutOfTolerance
        If ``|sum - 1| > tol``.
    """
    arr = np.asarray(row, dtype=float)
    if arr.ndim != 1 or arr.shape[0] < 2:
        raise DegenerateInput("proportions row needs at least 2 parts")
    if np.any(arr < 0):
        raise NegativeEntry("proportions must be non-negative")
    total = float(arr.sum())
    if abs(total - 1.0) > tol:
        raise SumOutOfTolerance(total, tol)
    return closure(arr)


# -- CSV plumbing -------------------------------------------------------------

def _read_rows(path: Path):
    if not path.is_file():
        raise MissingFile(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def _parse_float(cell: str, line: int, column: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise ParseError(line, column, f"not a number: {cell!r}") from None


def _read_proportions(path: Path):
    rows = _read_rows(path)
    if not rows:
        raise BadHeader(f"{path.name}: empty file")
    header = rows[0]
    if len(header) < 3 or header[0].strip() != "spot_id":
        raise BadHeader(
            f"{path.name}: expected header 'spot_id,<type1>,...,<typed>' with d >= 2"
        )
    cell_types = tuple(name.strip() for name in header[1:])
    if len(set(cell_types)) != len(cell_types):
        raise BadHeader(f"{path.name}: duplicate cell-type names in header")
    table = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise ParseError(lineno, 0, f"expected {len(header)} cells, got {len(row)}")
        spot_id = row[0].strip()
        if spot_id in table:
            raise IdMismatch(spot_id, f"duplicate spot id {spot_id!r} in proportions")
        values = np.array(
            [_parse_float(cell, lineno, col) for col, cell in enumerate(row[1:], start=2)]
        )
        try:
            table[spot_id] = validate_proportions(values)
        except (NegativeEntry, SumOutOfTolerance) as exc:
            raise ParseError(lineno, 0, str(exc)) from exc
    return cell_types, table


def _read_positions(path: Path):
    rows = _read_rows(path)
    if not rows:
        raise BadHeader(f"{path.name}: empty file")
    header = [cell.strip() for cell in rows[0]]
    if header != ["spot_id", "x", "y"]:
        raise BadHeader(f"{path.name}: expected header 'spot_id,x,y'")
    out = []
    seen = set()
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 3:
            raise ParseError(lineno, 0, f"expected 3 cells, got {len(row)}")
        spot_id = row[0].strip()
        if spot_id in seen:
            raise IdMismatch(spot_id, f"duplicate spot id {spot_id!r} in positions")
        seen.add(spot_id)
        x = _parse_float(row[1], lineno, 2)
        y = _parse_float(row[2], lineno, 3)
        out.append((spot_id, x, y))
    return out


def _image_size(path: Path):
    if not path.is_file():
        raise MissingFile(f"no such file: {path}")
    with Image.open(path) as img:
        if img.format not in _IMAGE_FORMATS:
            raise BadHeader(f"{path.name}: image must be PNG or JPEG, got {img.format}")
        return img.width, img.height


def load_dataset(manifest_path) -> Dataset:
    """Load and validate a dataset from its JSON manifest.

    Relative paths inside the manifest are resolved against the
    manifest's own directory.  Spot order follows the positions file.
    """
    mpath = Path(manifest_path)
    if not mpath.is_file():
        raise MissingFile(f"no such manifest: {mpath}")
    try:
        manifest = json.loads(mpath.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.colno, f"manifest: {exc.msg}") from exc
    if not isinstance(manifest, dict):
        raise BadHeader("manifest must be a JSON object")
    for key in ("proportions", "positions", "image"):
        if key not in manifest:
            raise BadHeader(f"manifest missing required key {key!r}")
    radius = float(manifest.get("spot_radius_px", 5.0))
    if not radius > 0:
        raise BadHeader("spot_radius_px must be positive")

    base = mpath.parent
    cell_types, proportions = _read_proportions(base / manifest["proportions"])
    positions = _read_positions(base / manifest["positions"])
    image_path = base / manifest["image"]
    width, height = _image_size(image_path)

    spots = []
    for spot_id, x, y in positions:
        if spot_id not in proportions:
            raise IdMismatch(spot_id, f"spot {spot_id!r} has a position but no proportions")
        if not (0 <= x < width and 0 <= y < height):
            raise OutOfBounds(spot_id)
        spots.append(SpotRecord(id=spot_id, x=x, y=y, proportions=proportions.pop(spot_id)))
    if proportions:
        leftover = next(iter(proportions))
        raise IdMismatch(leftover, f"spot {leftover!r} has proportions but no position")
    if not spots:
        raise BadHeader("dataset has no spots")

    return Dataset(
        cell_types=cell_types,
        spots=spots,
        image_width=width,
        image_height=height,
        spot_radius_px=radius,
        image_path=image_path,
    )


def _format_float(v: float) -> str:
    # repr round-trips doubles exactly, so write/load is lossless
    return repr(float(v))


def write_dataset(dataset: Dataset, out_dir) -> Path:
    """Write a dataset as manifest + CSVs (+ placeholder image if needed).

    Returns the manifest path; ``load_dataset`` on it reproduces the
    dataset (ids exactly, numbers within float round-trip).  Output bytes
    are a pure function of the dataset, so writes are reproducible.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    with open(out / "proportions.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["spot_id", *dataset.cell_types])
        for spot in dataset.spots:
            writer.writerow([spot.id, *(_format_float(v) for v in spot.proportions)])

    with open(out / "positions.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["spot_id", "x", "y"])
        for spot in dataset.spots:
            writer.writerow([spot.id, _format_float(spot.x), _format_float(spot.y)])

    image_name = "image.png"
    if dataset.image_path is None:
        placeholder = Image.new("RGB", (dataset.image_width, dataset.image_height), (128, 128, 128))
        placeholder.save(out / image_name, format="PNG")
    else:
        image_name = Path(dataset.image_path).name
        target = out / image_name
        if Path(dataset.image_path).resolve() != target.resolve():
            target.write_bytes(Path(dataset.image_path).read_bytes())

    manifest = {
        "proportions": "proportions.csv",
        "positions": "positions.csv",
        "image": image_name,
        "spot_radius_px": dataset.spot_radius_px,
    }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return manifest_path


def generate_synthetic(width: int, height: int, grid_step: float, regions, seed: int):
    """Plant a regular grid of spots with region-wise Dirichlet compositions.

    ``regions`` is a list of ``(shape, concentration)`` pairs; shapes come
    from :mod:`aitchview.geometry` and the first containing region wins.
    Compositions are drawn from each region's Dirichlet, deterministically
    in ``seed``.  The returned dataset has no image file yet (a flat gray
    placeholder is emitted on write); analysis never reads pixel content.

    Raises
    ------
    EmptyGrid
        If no grid point fits inside the image.
    UncoveredSpot
        If some grid point belongs to no region.
    """
    if not regions:
        raise DegenerateInput("need at least one region")
    d = len(np.asarray(regions[0][1]))
    params = []
    for _, conc in regions:
        arr = np.asarray(conc, dtype=float)
        if arr.shape != (d,):
            raise DegenerateInput("all regions must share one concentration length")
        if np.any(arr <= 0):
            raise DegenerateInput("Dirichlet concentrations must be strictly positive")
        params.append(arr)

    xs = np.arange(grid_step / 2.0, width, grid_step, dtype=float)
    ys = np.arange(grid_step / 2.0, height, grid_step, dtype=float)
    if xs.size == 0 or ys.size == 0:
        raise EmptyGrid(f"grid step {grid_step} leaves no spot in {width}x{height}")

    rng = np.random.default_rng(seed)
    spots = []
    labels = []
    i = 0
    for y in ys:
        for x in xs:
            region = next(
                (r for r, (shape, _) in enumerate(regions) if shape.contains(x, y)),
                None,
            )
            if region is None:
                raise UncoveredSpot(f"grid spot at ({x}, {y}) is in no region")
            proportions = rng.dirichlet(params[region])
            spots.append(SpotRecord(id=f"s{i:05d}", x=float(x), y=float(y), proportions=proportions))
            labels.append(region)
            i += 1

    dataset = Dataset(
        cell_types=tuple(f"ct{j + 1:02d}" for j in range(d)),
        spots=spots,
        image_width=int(width),
        image_height=int(height),
        spot_radius_px=max(1.0, 0.4 * grid_step),
    )
    truth = SyntheticGroundTruth(
        region_labels=np.array(labels, dtype=int),
        region_params=tuple(params),
    )
    return dataset, truth
