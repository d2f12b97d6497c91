"""Weighted k-means: k-means++ seeding, Lloyd iterations, restarts.

This is the subroutine behind all the factorization algorithms. Determinism
rules: nearest-centroid ties break toward the smallest centroid index,
restart ties toward the smallest restart index, and each restart derives its
own generator from the configured seed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from onmf.core import WeightedPointSet
from onmf.rng import SeededRng


@dataclass
class KMeansConfig:
    restarts: int = 10
    max_iters: int = 100
    rel_tol: float = 1e-9
    seed: int = 0

    def __post_init__(self) -> None:
        if self.restarts < 1 or self.max_iters < 1 or self.rel_tol < 0:
            raise ValueError("invalid k-means configuration")


@dataclass
class KMeansSolution:
    centroids: np.ndarray  # (k, m)
    assignment: np.ndarray  # (n,) of centroid indices
    cost: float


def _distances_sq(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # (n, k) squared distances; computed exactly, not via the expanded form,
    # to keep zero distances exactly zero.
    diff = points[:, None, :] - centroids[None, :, :]
    return np.einsum("nkm,nkm->nk", diff, diff)


def _weighted_cost(pts: WeightedPointSet, centroids: np.ndarray,
                   assignment: np.ndarray) -> float:
    diff = pts.points - centroids[assignment]
    return float(np.sum(pts.weights * np.einsum("nm,nm->n", diff, diff)))


def _sample_index(weights: np.ndarray, rng: SeededRng) -> int:
    cum = np.cumsum(weights)
    u = rng.random() * cum[-1]
    return int(np.searchsorted(cum, u, side="right").clip(0, len(weights) - 1))


def kmeanspp_seed(pts: WeightedPointSet, k: int, rng: SeededRng) -> np.ndarray:
    """k-means++ seeding on a weighted point set.

    The first centroid is sampled with probability proportional to the point
    weight, later ones proportional to weight times squared distance to the
    nearest chosen centroid. With zero total remaining probability the
    leftover centroids are the zero vector (they can never lower the cost of
    any point, so the convention is harmless).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n, m = pts.points.shape
    centroids = np.zeros((k, m))
    if pts.total_weight() == 0:
        return centroids
    first = _sample_index(pts.weights, rng)
    centroids[0] = pts.points[first]
    d2 = np.sum((pts.points - centroids[0]) ** 2, axis=1)
    for j in range(1, k):
        probs = pts.weights * d2
        total = float(probs.sum())
        if total <= 0:
            break  # every point already sits on a centroid
        idx = _sample_index(probs, rng)
        centroids[j] = pts.points[idx]
        d2 = np.minimum(d2, np.sum((pts.points - centroids[j]) ** 2, axis=1))
    return centroids


def lloyd(pts: WeightedPointSet, centroids: np.ndarray,
          config: KMeansConfig) -> KMeansSolution:
    """Weighted Lloyd iterations from the given initial centroids.

    Alternates nearest-centroid assignment and weighted-mean recentering
    until the relative cost improvement drops below config.rel_tol or
    config.max_iters is reached. The cost never increases.
    """
    centroids = np.array(centroids, dtype=np.float64)
    k = centroids.shape[0]
    assignment = np.argmin(_distances_sq(pts.points, centroids), axis=1)
    prev_cost = _weighted_cost(pts, centroids, assignment)
    for _ in range(config.max_iters):
        # Recenter clusters with positive total weight; empty or zero-weight
        # clusters keep their centroid.
        for j in range(k):
            mask = assignment == j
            wsum = float(pts.weights[mask].sum())
            if wsum > 0:
                centroids[j] = pts.weights[mask] @ pts.points[mask] / wsum
        assignment = np.argmin(_distances_sq(pts.points, centroids), axis=1)
        cost = _weighted_cost(pts, centroids, assignment)
        assert cost <= prev_cost + 1e-12 * max(1.0, prev_cost)
        if prev_cost - cost <= config.rel_tol * prev_cost:
            prev_cost = cost
            break
        prev_cost = cost
    return KMeansSolution(centroids=centroids, assignment=assignment,
                          cost=prev_cost)


def weighted_kmeans(pts: WeightedPointSet, k: int,
                    config: KMeansConfig) -> KMeansSolution:
    """Best-of-restarts k-means++ plus Lloyd; deterministic given the seed."""
    best: KMeansSolution | None = None
    for t in range(config.restarts):
        rng = SeededRng(config.seed + t)
        seeds = kmeanspp_seed(pts, k, rng)
        sol = lloyd(pts, seeds, config)
        if best is None or sol.cost < best.cost:
            best = sol
    assert best is not None
    return best


def _subset_cost(pts: WeightedPointSet, mask: int, cache: dict) -> float:
    # Optimal single-cluster cost for the points in the bitmask, via the
    # center-of-mass identity: sum l_i ||x_i||^2 - ||sum l_i x_i||^2 / L.
    hit = cache.get(mask)
    if hit is not None:
        return hit
    idx = [i for i in range(len(pts)) if mask >> i & 1]
    w = pts.weights[idx]
    x = pts.points[idx]
    total = float(w.sum())
    if total == 0:
        cost = 0.0
    else:
        s = w @ x
        cost = float(np.sum(w * np.einsum("nm,nm->n", x, x)) - s @ s / total)
        cost = max(cost, 0.0)
    cache[mask] = cost
    return cost


def brute_force_kmeans(pts: WeightedPointSet, k: int) -> KMeansSolution:
    """Exact optimum by enumerating every assignment (test oracle)."""
    n, m = pts.points.shape
    if k**n > 10**7:
        raise ValueError("instance too large for brute force")
    cache: dict = {}
    best_cost = np.inf
    best_assign: tuple[int, ...] | None = None
    for assign in itertools.product(range(k), repeat=n):
        masks = [0] * k
        for i, j in enumerate(assign):
            masks[j] |= 1 << i
        cost = sum(_subset_cost(pts, msk, cache) for msk in masks if msk)
        if cost < best_cost:
            best_cost = cost
            best_assign = assign
    assert best_assign is not None
    assignment = np.array(best_assign, dtype=np.int64)
    centroids = np.zeros((k, m))
    for j in range(k):
        mask = assignment == j
        wsum = float(pts.weights[mask].sum())
        if wsum > 0:
            centroids[j] = pts.weights[mask] @ pts.points[mask] / wsum
    return KMeansSolution(centroids=centroids, assignment=assignment,
                          cost=_weighted_cost(pts, centroids, assignment))
