"""Compositional-data arithmetic in Aitchison geometry.

Spot-level cell-type proportions carry only relative information: they
live on the unit simplex, where ratios between parts matter and absolute
values do not.  This module provides the center log-ratio (CLR) map
between the simplex and the zero-sum hyperplane of R^d, together with
the simplex vector-space operations (perturbation as addition, powering
as scalar multiplication) and the Aitchison distance.

All functions accept a single composition of shape ``(d,)`` or a stack
of compositions of shape ``(n, d)`` and preserve the input's
dimensionality.  Everything here is a pure function on immutable values;
nothing is cached or mutated.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    DegenerateInput,
    DimensionMismatch,
    EpsTooLarge,
    NegativeEntry,
    NonFinite,
    NonPositivePart,
)

__all__ = [
    "closure",
    "replace_zeros",
    "clr",
    "clr_inv",
    "perturb",
    "power",
    "aitchison_distance",
]


def _as_parts(x, what: str = "composition") -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim not in (1, 2):
        raise DegenerateInput(
            f"{what} must be 1-D or a 2-D stack of rows, got ndim={arr.ndim}"
        )
    if arr.shape[-1] < 2:
        raise DegenerateInput(f"{what} needs at least 2 parts, got {arr.shape[-1]}")
    return arr


def closure(v) -> np.ndarray:
    """Project non-negative parts onto the unit simplex.

    Parameters
    ----------
    v : array_like, shape (d,) or (n, d)
        Non-negative parts; each row must have at least one positive entry.

    Returns
    -------
    ndarray
        Parts rescaled so every row sums to 1.

    Raises
    ------
    NegativeEntry
        If any entry is negative.
    DegenerateInput
        If a row is all zero or has fewer than 2 parts.
    """
    arr = _as_parts(v)
    if np.any(arr < 0):
        raise NegativeEntry("parts must be non-negative")
    total = arr.sum(axis=-1, keepdims=True)
    if np.any(total == 0):
        raise DegenerateInput("cannot normalize an all-zero vector")
    return arr / total


def replace_zeros(c, eps: float = 1e-6) -> np.ndarray:
    """Multiplicative zero replacement.

    Every zero part becomes ``eps`` and the nonzero parts of that row are
    scaled by ``1 - z * eps`` (z = number of zeros in the row), which
    keeps the row on the simplex and preserves the ratios among nonzero
    parts exactly.  Rows without zeros pass through unchanged.

    Raises
    ------
    EpsTooLarge
        If ``eps`` does not lie in (0, 1/d).
    NegativeEntry
        If any entry is negative.
    """
    arr = _as_parts(c)
    if np.any(arr < 0):
        raise NegativeEntry("parts must be non-negative")
    d = arr.shape[-1]
    if not 0.0 < eps < 1.0 / d:
        raise EpsTooLarge(f"eps must lie in (0, 1/{d}), got {eps!r}")
    zeros = arr == 0
    z = zeros.sum(axis=-1, keepdims=True)
    return np.where(zeros, eps, arr * (1.0 - z * eps))


def clr(c) -> np.ndarray:
    """Center log-ratio transform: ``ln(p_j / g(p))`` with g the geometric mean.

    The image is the zero-sum hyperplane of R^d, where ordinary linear
    algebra corresponds to Aitchison geometry on the simplex.  The map is
    scale invariant, so closed and unclosed positive vectors transform
    identically.

    Raises
    ------
    NonPositivePart
        If any part is <= 0 (apply :func:`replace_zeros` first).
    """
    arr = _as_parts(c)
    if np.any(arr <= 0):
        raise NonPositivePart("CLR requires strictly positive parts")
    logs = np.log(arr)
    return logs - logs.mean(axis=-1, keepdims=True)


def clr_inv(z) -> np.ndarray:
    """Inverse CLR: ``closure(exp(z))``, computed softmax-style for stability.

    For zero-sum input this inverts :func:`clr` exactly (up to float
    rounding); general input is first implicitly projected onto the
    zero-sum hyperplane because the exponential-closure composition
    ignores the mean of ``z``.

    Raises
    ------
    NonFinite
        If any coordinate is NaN or infinite.
    """
    arr = _as_parts(z, what="clr vector")
    if not np.all(np.isfinite(arr)):
        raise NonFinite("clr coordinates must be finite")
    shifted = np.exp(arr - arr.max(axis=-1, keepdims=True))
    return shifted / shifted.sum(axis=-1, keepdims=True)


def _check_same_d(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[-1] != b.shape[-1]:
        raise DimensionMismatch(
            f"operands have {a.shape[-1]} and {b.shape[-1]} parts"
        )


def perturb(a, b) -> np.ndarray:
    """Aitchison addition: componentwise product followed by closure."""
    x = _as_parts(a)
    y = _as_parts(b)
    _check_same_d(x, y)
    if np.any(x <= 0) or np.any(y <= 0):
        raise NonPositivePart("perturbation requires strictly positive parts")
    return closure(x * y)


def power(c, t: float) -> np.ndarray:
    """Aitchison scalar multiplication: componentwise power followed by closure."""
    arr = _as_parts(c)
    if not np.isfinite(t):
        raise NonFinite(f"power exponent must be finite, got {t!r}")
    if np.any(arr <= 0):
        raise NonPositivePart("powering requires strictly positive parts")
    return closure(arr ** float(t))


def aitchison_distance(a, b) -> float | np.ndarray:
    """Aitchison distance: Euclidean norm of ``clr(a) - clr(b)``.

    Returns a scalar for single compositions, an ``(n,)`` array for
    row-wise stacks.
    """
    x = _as_parts(a)
    y = _as_parts(b)
    _check_same_d(x, y)
    diff = clr(x) - clr(y)
    norm = np.sqrt((diff * diff).sum(axis=-1))
    return float(norm) if norm.ndim == 0 else norm
