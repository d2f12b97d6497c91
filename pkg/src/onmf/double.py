"""Double-factor orthogonality: orthogonal columns of A and rows of W.

Pipeline: weighted k-means on the normalized columns (step 1), reduction of
centroid weights for pairs whose angle falls in the ambiguous band
[pi/6, pi/3] (step 2), grouping of the surviving centroids by connected
components of the small-angle graph followed by an exact coordinate-wise
solve for the orthogonal group representatives (step 3). A large-k variant
skips k-means entirely, treating every normalized column as its own
centroid, transposing first when that orientation is cheaper.
"""

from __future__ import annotations

import numpy as np

from onmf.core import (
    COS_NARROW,
    COS_WIDE,
    CompactW,
    WeightedPointSet,
    check_nonneg,
    frobenius_norm_sq,
    normalize_columns,
)
from onmf.kmeans import KMeansConfig, KMeansSolution, weighted_kmeans
from onmf.single import OnmfSolution, _theta_against, rank_one_fit


class GroupingError(RuntimeError):
    """The grouped centroids violate the angle separation guarantees.

    Can only happen through floating-point boundary effects on the inclusive
    band test; raised instead of silently mis-grouping.
    """


def centroid_weights(pts: WeightedPointSet,
                     sol: KMeansSolution) -> tuple[np.ndarray, np.ndarray]:
    """Total assigned weight per centroid, with recentering.

    Centroids carrying positive weight are replaced by the weighted mean of
    their assigned points (which never increases the k-means cost); the
    recentered centroids then have L2 norm at most 1 and are non-zero.
    """
    k = sol.centroids.shape[0]
    centroids = np.array(sol.centroids, dtype=np.float64)
    q = np.zeros(k)
    for j in range(k):
        mask = sol.assignment == j
        qj = float(pts.weights[mask].sum())
        q[j] = qj
        if qj > 0:
            centroids[j] = pts.weights[mask] @ pts.points[mask] / qj
    return centroids, q


def _cosine_matrix(centroids: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(centroids, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    unit = centroids / safe[:, None]
    return np.clip(unit @ unit.T, 0.0, 1.0)


def weight_reduction(centroids: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Zero out paired weights of centroids with angle in [pi/6, pi/3].

    Single lexicographic pass over pairs (j1, j2) with j1 < j2; each hit
    decreases both weights by their minimum, sending at least one to zero.
    One pass suffices because weights never increase. Band membership is an
    inclusive cosine test in [cos(pi/3), cos(pi/6)].
    """
    k = len(q)
    cos = _cosine_matrix(centroids)
    qp = np.array(q, dtype=np.float64)
    for j1 in range(k):
        if qp[j1] <= 0:
            continue
        for j2 in range(j1 + 1, k):
            if qp[j2] <= 0 or qp[j1] <= 0:
                continue
            if COS_WIDE <= cos[j1, j2] <= COS_NARROW:
                d = min(qp[j1], qp[j2])
                qp[j1] -= d
                qp[j2] -= d
    return qp


def group_centroids(centroids: np.ndarray, q_reduced: np.ndarray) -> np.ndarray:
    """Group the surviving centroids by connected small-angle components.

    Positive-weight centroids are joined when their angle is below pi/6
    (cosine above cos(pi/6)); the connected components of that graph are the
    groups, numbered in order of their smallest member. A verification pass
    asserts the separation the weight reduction guarantees: within a group
    all angles below pi/6, across groups all above pi/3. Zero-weight
    centroids join the group of the angularly nearest positive-weight
    centroid (ties toward the smallest index); with no positive-weight
    centroid at all everything maps to group 0.
    """
    k = len(q_reduced)
    sigma = np.zeros(k, dtype=np.int64)
    positive = np.flatnonzero(q_reduced > 0)
    if positive.size == 0:
        return sigma
    cos = _cosine_matrix(centroids)

    # Union-find over the positive-weight centroids.
    parent = {int(j): int(j) for j in positive}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a_idx in range(positive.size):
        for b_idx in range(a_idx + 1, positive.size):
            j1, j2 = int(positive[a_idx]), int(positive[b_idx])
            if cos[j1, j2] > COS_NARROW:
                ra, rb = find(j1), find(j2)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)

    group_of_root: dict[int, int] = {}
    for j in positive:
        root = find(int(j))
        if root not in group_of_root:
            group_of_root[root] = len(group_of_root)
        sigma[j] = group_of_root[root]

    # Verification pass: the post-reduction angle structure must hold.
    for a_idx in range(positive.size):
        for b_idx in range(a_idx + 1, positive.size):
            j1, j2 = int(positive[a_idx]), int(positive[b_idx])
            c = cos[j1, j2]
            if sigma[j1] == sigma[j2]:
                if not c > COS_NARROW:
                    # Reachable through a chain of small angles whose total
                    # stays below pi/3, yet the direct angle must then be
                    # below pi/6 since the band is empty.
                    raise GroupingError(
                        f"within-group angle too large for centroids {j1},{j2}")
            elif not c < COS_WIDE:
                raise GroupingError(
                    f"cross-group angle too small for centroids {j1},{j2}")

    # Extend to zero-weight centroids by the nearest positive one.
    zero_norm = np.linalg.norm(centroids, axis=1) == 0
    for j in range(k):
        if q_reduced[j] > 0:
            continue
        if zero_norm[j]:
            nearest = int(positive[0])
        else:
            nearest = int(positive[np.argmax(cos[j, positive])])
        sigma[j] = sigma[nearest]
    return sigma


def solve_orthogonal_centroids(centroids: np.ndarray, q_reduced: np.ndarray,
                               sigma: np.ndarray) -> np.ndarray:
    """Exact coordinate-wise solve for orthogonal group representatives.

    Minimizes the reduced-weight squared distance of each centroid to its
    group's representative subject to the representatives being non-negative
    with pairwise disjoint supports. Per coordinate the winning group is the
    one maximizing (group weight) * (group mean)^2, ties toward the smallest
    group index; it receives the group mean, all others zero.

    Returns an (m, k) matrix whose column s is the representative of group s
    (columns for absent groups stay zero).
    """
    k, m = centroids.shape
    a = np.zeros((m, k))
    n_groups = int(sigma.max()) + 1 if k else 0
    qstar = np.zeros(n_groups)
    mu = np.zeros((n_groups, m))
    for s in range(n_groups):
        members = (sigma == s) & (q_reduced > 0)
        qs = float(q_reduced[members].sum())
        qstar[s] = qs
        if qs > 0:
            mu[s] = q_reduced[members] @ centroids[members] / qs
    if n_groups == 0 or not (qstar > 0).any():
        return a
    scores = qstar[:, None] * mu**2  # (n_groups, m)
    winners = np.argmax(scores, axis=0)  # argmax takes the smallest index on ties
    cols = np.arange(m)
    a[cols, winners] = mu[winners, cols]
    return a


def _finish(M: np.ndarray, centroids: np.ndarray, q: np.ndarray,
            phi: np.ndarray, k: int) -> OnmfSolution:
    """Steps 2-3 on prepared centroids/weights, then scale fitting."""
    qp = weight_reduction(centroids, q)
    sigma = group_centroids(centroids, qp)
    a = solve_orthogonal_centroids(centroids, qp, sigma)
    group = sigma[phi]
    theta = _theta_against(M, a, group)
    w = CompactW(k=k, group=group, theta=theta)
    objective = frobenius_norm_sq(M - a @ w.materialize())
    return OnmfSolution(a=a, w=w, objective=objective)


def factorize_double(M, k: int, config: KMeansConfig | None = None) -> OnmfSolution:
    """Factorize with both factors orthogonal, for arbitrary inner dimension."""
    M = check_nonneg(M)
    if k < 1:
        raise ValueError("k must be >= 1")
    if config is None:
        config = KMeansConfig()
    pts = normalize_columns(M)
    sol = weighted_kmeans(pts, k, config)
    centroids, q = centroid_weights(pts, sol)
    return _finish(M, centroids, q, sol.assignment, k)


def factorize_double_large_k(M) -> OnmfSolution:
    """Double-orthogonal factorization with inner dimension min(m, n).

    Skips k-means: every normalized column is its own centroid with its own
    weight. Works on the transpose when m < n (the objective is symmetric
    under transposition) and transposes the result back.
    """
    M = check_nonneg(M)
    m, n = M.shape
    if m < n:
        sol_t = factorize_double_large_k(M.T)
        return _transpose_solution(M, sol_t)
    pts = normalize_columns(M)
    centroids = pts.points
    q = pts.weights
    phi = np.arange(n)
    return _finish(M, centroids, q, phi, n)


def _transpose_solution(M: np.ndarray, sol_t: OnmfSolution) -> OnmfSolution:
    """Convert a factorization of M^T into one of M.

    If M^T ~ A2 @ W2 then M ~ W2^T @ A2^T. The columns of A2 have disjoint
    supports, so A2^T has at most one non-zero per column and converts to the
    compact form directly.
    """
    m, n = M.shape
    a2 = sol_t.a  # (n, k)
    k = a2.shape[1]
    a = sol_t.w.materialize().T  # (m, k)
    group = np.zeros(n, dtype=np.int64)
    theta = np.zeros(n)
    for i in range(n):
        nz = np.flatnonzero(a2[i])
        if nz.size:
            group[i] = nz[0]
            theta[i] = a2[i, nz[0]]
    w = CompactW(k=k, group=group, theta=theta)
    objective = frobenius_norm_sq(M - a @ w.materialize())
    return OnmfSolution(a=a, w=w, objective=objective)


def brute_force_double(M, k: int) -> float:
    """Exact double-orthogonal optimum for tiny matrices (test oracle).

    A feasible solution is a family of at most k blocks with pairwise
    disjoint row sets and pairwise disjoint column sets, each fitted by its
    best rank-1 approximation; the objective is the total squared norm minus
    the leading squared singular values of the chosen blocks. Enumerates all
    block families by subset recursion with memoization.
    """
    M = check_nonneg(M)
    m, n = M.shape
    if m > 5 or n > 5:
        raise ValueError("instance too large for brute force")
    total_sq = frobenius_norm_sq(M)

    sigma_cache: dict[tuple[int, int], float] = {}

    def sigma_sq(rmask: int, cmask: int) -> float:
        key = (rmask, cmask)
        hit = sigma_cache.get(key)
        if hit is not None:
            return hit
        rows = [i for i in range(m) if rmask >> i & 1]
        cols = [j for j in range(n) if cmask >> j & 1]
        val, _, _ = rank_one_fit(M[np.ix_(rows, cols)])
        sigma_cache[key] = val
        return val

    best_cache: dict[tuple[int, int, int], float] = {}

    def best(rmask: int, cmask: int, blocks: int) -> float:
        if rmask == 0 or cmask == 0 or blocks == 0:
            return 0.0
        key = (rmask, cmask, blocks)
        hit = best_cache.get(key)
        if hit is not None:
            return hit
        low = rmask & -rmask
        # Option: the lowest remaining row joins no block.
        result = best(rmask ^ low, cmask, blocks)
        # Option: it anchors a block with rows r1 and columns c1.
        rest = rmask ^ low
        r_sub = rest
        while True:
            r1 = r_sub | low
            c_sub = cmask
            while c_sub:
                cand = sigma_sq(r1, c_sub) + best(
                    rmask ^ r1, cmask ^ c_sub, blocks - 1)
                if cand > result:
                    result = cand
                c_sub = (c_sub - 1) & cmask
            if r_sub == 0:
                break
            r_sub = (r_sub - 1) & rest
        best_cache[key] = result
        return result

    gain = best((1 << m) - 1, (1 << n) - 1, min(k, m, n))
    return max(total_sq - gain, 0.0)
