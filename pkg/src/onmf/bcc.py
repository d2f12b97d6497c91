"""Correlation clustering on complete bipartite graphs.

A labeling is solved by factorizing the binary matrix with both factors
orthogonal (large inner dimension, no k-means needed), rounding every rank-1
block to binary vectors, and translating the non-empty binary blocks into
clusters. The rounding of a single block loses at most a factor 8 in squared
error; an exact Bell-number oracle is provided for ratio tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from onmf.core import frobenius_norm_sq
from onmf.double import factorize_double_large_k


@dataclass(frozen=True)
class BipartiteLabeling:
    """Complete bipartite graph with +/- edge labels.

    labels[i, j] is True when the edge between left vertex i and right
    vertex j is labeled "+".
    """

    labels: np.ndarray  # (m, n) booleans

    @property
    def m(self) -> int:
        return self.labels.shape[0]

    @property
    def n(self) -> int:
        return self.labels.shape[1]

    def to_matrix(self) -> np.ndarray:
        return self.labels.astype(np.float64)


@dataclass
class Clustering:
    """Cluster id per vertex on each side; id 0 means singleton/unclustered."""

    left: np.ndarray  # (m,) ints >= 0
    right: np.ndarray  # (n,) ints >= 0


def round_block(Mblk, a, w) -> tuple[np.ndarray, np.ndarray]:
    """Round one fractional rank-1 block to binary vectors.

    Picks the column whose rescaled copy is closest to a as the binary left
    vector, then keeps exactly the columns sharing at least half of its
    support. The squared error of the binary block is at most 8 times the
    fractional one. Conventions: columns with zero w are dropped; if every w
    is zero both outputs are zero; if the chosen column is empty the bound is
    vacuous and the right vector is the indicator of positive w.
    """
    Mblk = np.asarray(Mblk, dtype=np.float64)
    if not np.isin(Mblk, (0.0, 1.0)).all():
        raise ValueError("block matrix must be binary")
    a = np.asarray(a, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if (a < 0).any() or (w < 0).any():
        raise ValueError("a and w must be non-negative")
    m, n = Mblk.shape
    a_hat = np.zeros(m)
    w_hat = np.zeros(n)
    pos = np.flatnonzero(w > 0)
    if pos.size == 0:
        return a_hat, w_hat
    dists = [frobenius_norm_sq(Mblk[:, i] / w[i] - a) for i in pos]
    i_star = int(pos[int(np.argmin(dists))])  # argmin ties -> smallest index
    a_hat = Mblk[:, i_star].copy()
    support = a_hat > 0
    size = int(support.sum())
    if size == 0:
        w_hat[pos] = 1.0
        return a_hat, w_hat
    for i in pos:
        overlap = int(np.count_nonzero((Mblk[:, i] > 0) & support))
        if 2 * overlap >= size:
            w_hat[i] = 1.0
    return a_hat, w_hat


def disagreements(g: BipartiteLabeling, clustering: Clustering) -> int:
    """Exact disagreement count of a clustering.

    A "+" edge disagrees when its endpoints are in different clusters or
    either endpoint is unclustered; a "-" edge disagrees when both endpoints
    share a cluster.
    """
    left = np.asarray(clustering.left, dtype=np.int64)
    right = np.asarray(clustering.right, dtype=np.int64)
    same = (left[:, None] == right[None, :]) & (left[:, None] > 0)
    plus = g.labels
    return int(np.count_nonzero(plus & ~same) + np.count_nonzero(~plus & same))


def bcc_cluster(g: BipartiteLabeling) -> tuple[Clustering, int]:
    """Cluster a labeled complete bipartite graph by rounding a factorization.

    Factorizes the binary matrix with both factors orthogonal, rounds every
    block to binary, and turns each non-empty binary block into a cluster.
    Returns the clustering and its exact disagreement count.
    """
    M = g.to_matrix()
    sol = factorize_double_large_k(M)
    a, w = sol.a, sol.w
    left = np.zeros(g.m, dtype=np.int64)
    right = np.zeros(g.n, dtype=np.int64)
    next_id = 1
    for s in range(a.shape[1]):
        rows = np.flatnonzero(a[:, s] > 0)
        cols = np.flatnonzero((w.group == s) & (w.theta > 0))
        if rows.size == 0 or cols.size == 0:
            continue
        a_hat, w_hat = round_block(M[np.ix_(rows, cols)], a[rows, s],
                                   w.theta[cols])
        rset = rows[a_hat > 0]
        cset = cols[w_hat > 0]
        if rset.size == 0 or cset.size == 0:
            continue
        left[rset] = next_id
        right[cset] = next_id
        next_id += 1
    clustering = Clustering(left=left, right=right)
    return clustering, disagreements(g, clustering)


def _partitions(items: list[int]):
    """All set partitions, as lists of blocks (restricted-growth recursion)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [first]] + part[i + 1:]
        yield [[first]] + part


def brute_force_bcc(g: BipartiteLabeling) -> int:
    """Minimum disagreements over all vertex partitions (test oracle)."""
    m, n = g.m, g.n
    if m + n > 8:
        raise ValueError("instance too large for brute force")
    best = m * n + 1
    vertices = list(range(m + n))
    for part in _partitions(vertices):
        left = np.zeros(m, dtype=np.int64)
        right = np.zeros(n, dtype=np.int64)
        for cid, block in enumerate(part, start=1):
            for v in block:
                if v < m:
                    left[v] = cid
                else:
                    right[v - m] = cid
        best = min(best, disagreements(g, Clustering(left, right)))
    return best
