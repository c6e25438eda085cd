"""Deterministic k-means (k-means++ init, Lloyd iterations) in CLR space."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadK

__all__ = ["Clustering", "kmeans"]


@dataclass(frozen=True)
class Clustering:
    """Result of one seeded k-means run.

    ``labels[i]`` is the index of the centroid nearest to row i (ties
    broken toward the lowest centroid index).  ``inertia`` is the sum of
    squared Euclidean distances to assigned centroids.
    ``inertia_history`` records the objective after the initial
    assignment and after every Lloyd iteration; it is non-increasing.
    """

    k: int
    labels: np.ndarray     # (n,) ints in [0, k)
    centroids: np.ndarray  # (k, d)
    inertia: float
    seed: int
    iterations: int
    inertia_history: tuple = field(repr=False, default=())


def _plusplus_init(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = x.shape[0]
    centers = np.empty((k, x.shape[1]), dtype=float)
    idx = int(rng.integers(n))
    centers[0] = x[idx]
    d2 = ((x - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = int(rng.choice(n, p=d2 / total))
        else:
            # all remaining points coincide with a chosen center
            idx = int(rng.integers(n))
        centers[j] = x[idx]
        d2 = np.minimum(d2, ((x - centers[j]) ** 2).sum(axis=1))
    return centers


def _assign(x: np.ndarray, centers: np.ndarray):
    d2 = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    labels = d2.argmin(axis=1)  # argmin takes the lowest index on ties
    assigned = d2[np.arange(x.shape[0]), labels]
    return labels, assigned


def kmeans(m, k: int, seed: int = 0, max_iter: int = 100, tol: float = 1e-8) -> Clustering:
    """Cluster the rows of ``m`` into ``k`` groups.

    k-means++ initialization driven by ``numpy.random.default_rng(seed)``,
    then Lloyd iterations until the maximum centroid movement drops below
    ``tol`` or ``max_iter`` is reached.  A cluster left empty by an
    assignment step is re-seeded to the point farthest from its assigned
    centroid.  Identical ``(m, k, seed)`` give bit-identical results.

    Raises
    ------
    BadK
        If ``k < 1`` or ``k > n``.
    """
    x = np.asarray(m, dtype=float)
    n = x.shape[0]
    if not 1 <= k <= n:
        raise BadK(f"k must lie in [1, {n}], got {k}")

    rng = np.random.default_rng(seed)
    centers = _plusplus_init(x, k, rng)
    labels, assigned = _assign(x, centers)
    history = [float(assigned.sum())]

    iterations = 0
    for _ in range(max_iter):
        new_centers = centers.copy()
        counts = np.bincount(labels, minlength=k)
        for j in range(k):
            if counts[j] > 0:
                new_centers[j] = x[labels == j].mean(axis=0)
        if np.any(counts == 0):
            # re-seed each empty cluster at the farthest point under the
            # assignment that produced it, never stealing the same point twice
            farthest = assigned.copy()
            for j in np.nonzero(counts == 0)[0]:
                idx = int(farthest.argmax())
                new_centers[j] = x[idx]
                farthest[idx] = -np.inf
        movement = float(np.sqrt(((new_centers - centers) ** 2).sum(axis=1)).max())
        centers = new_centers
        labels, assigned = _assign(x, centers)
        history.append(float(assigned.sum()))
        iterations += 1
        if movement < tol:
            break

    return Clustering(
        k=k,
        labels=labels,
        centroids=centers,
        inertia=history[-1],
        seed=seed,
        iterations=iterations,
        inertia_history=tuple(history),
    )
