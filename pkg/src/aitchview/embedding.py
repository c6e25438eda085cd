"""PCA of CLR coordinates: the 2D scatter embedding and the PC1 bar order."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, TooFewRows

__all__ = ["PcaModel", "Embedding", "pca_fit", "pca_project"]


@dataclass(frozen=True)
class PcaModel:
    """Top-2 principal axes of a CLR matrix.

    ``components`` rows are unit norm and mutually orthogonal, oriented so
    that each row's largest-magnitude entry is positive (deterministic
    across runs and platforms).  ``explained_variance`` uses the sample
    covariance (divisor n - 1) and is sorted descending.
    """

    mean: np.ndarray                # (d,)
    components: np.ndarray          # (2, d)
    explained_variance: np.ndarray  # (2,)


@dataclass(frozen=True)
class Embedding:
    """Projected 2D coordinates plus the permutation sorting spots by PC1."""

    coords: np.ndarray     # (n, 2)
    pc1_order: np.ndarray  # (n,) permutation of 0..n-1, ascending PC1


def lead_index(axis: np.ndarray) -> int:
    """First entry whose magnitude ties the largest (1e-12 relative slack).

    The slack keeps the orientation stable when loadings tie structurally
    (e.g. the +/- 1/sqrt(2) axes of 2-part data), where a bare argmax
    would flip on one-ulp differences.
    """
    mags = np.abs(axis)
    return int(np.argmax(mags >= mags.max() * (1.0 - 1e-12)))


def _fix_signs(components: np.ndarray) -> np.ndarray:
    # orient each axis so its leading loading is positive
    out = components.copy()
    for row in out:
        if row[lead_index(row)] < 0:
            row *= -1.0
    return out


def pca_fit(m) -> PcaModel:
    """Fit a 2-component PCA via thin SVD of the mean-centered matrix.

    CLR data always has rank <= d - 1 (rows sum to zero); the axes simply
    live inside the zero-sum hyperplane.  If the data has rank < 2 the
    remaining component is an arbitrary unit vector orthogonal to the
    first, with explained variance 0.

    Raises
    ------
    TooFewRows
        If the matrix has fewer than 2 rows.
    """
    x = np.asarray(m, dtype=float)
    if x.ndim != 2:
        raise TooFewRows(f"expected a 2-D matrix, got ndim={x.ndim}")
    n = x.shape[0]
    if n < 2:
        raise TooFewRows(f"PCA needs at least 2 rows, got {n}")
    mean = x.mean(axis=0)
    centered = x - mean
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    components = _fix_signs(vt[:2])
    explained = s[:2] ** 2 / (n - 1)
    return PcaModel(mean=mean, components=components, explained_variance=explained)


def pca_project(model: PcaModel, m) -> Embedding:
    """Project rows onto the model's axes and derive the PC1 ordering.

    Ties in the PC1 coordinate keep ascending spot-index order.
    """
    x = np.asarray(m, dtype=float)
    if x.ndim != 2 or x.shape[1] != model.mean.shape[0]:
        raise DimensionMismatch(
            f"matrix has {x.shape[-1]} columns, model expects {model.mean.shape[0]}"
        )
    coords = (x - model.mean) @ model.components.T
    pc1_order = np.argsort(coords[:, 0], kind="stable")
    return Embedding(coords=coords, pc1_order=pc1_order)
