"""Agglomerative clustering over dense distance matrices."""

from __future__ import annotations

import numpy as np

from ..errors import DimensionMismatch
from ._backend import kernel_agglomerate
from .dendrogram import Dendrogram
from .params import VARIANT_CODES, LanceWilliamsParams, lw_params

GENERIC_LINKAGES = ("minimax", "hausdorff")


def _check_distance_input(d: np.ndarray) -> np.ndarray:
    d = np.asarray(d, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise DimensionMismatch(f"expected a square distance matrix, got shape {d.shape}")
    if d.shape[0] < 2:
        raise DimensionMismatch("need at least two points to agglomerate")
    if not np.all(np.isfinite(d)):
        raise DimensionMismatch("distance matrix contains non-finite entries")
    if not np.array_equal(d, d.T):
        raise DimensionMismatch("distance matrix is not symmetric")
    return d


def agglomerate_lw(d: np.ndarray, params: str | LanceWilliamsParams = "ward") -> Dendrogram:
    """Cluster with the parametric update rule.

    ``params`` is a linkage name (single, complete, average, mcquitty,
    median, centroid, ward) or explicit coefficients.  Named variants run
    on the selected kernel backend; custom coefficients take the generic
    Python path.  Merge heights are the inter-cluster distances at merge
    time, taken on the input distances as-is.
    """
    d = _check_distance_input(d)
    if isinstance(params, str):
        params = lw_params(params)
    if params.name in VARIANT_CODES:
        left, right, heights, sizes = kernel_agglomerate(d, VARIANT_CODES[params.name])
        return Dendrogram(left=left, right=right, heights=heights, sizes=sizes)
    return _agglomerate_custom(d, params)


def _agglomerate_custom(d: np.ndarray, params: LanceWilliamsParams) -> Dendrogram:
    """Generic path for user-supplied coefficients (per-step evaluation)."""
    n = d.shape[0]
    work = d.copy()
    np.fill_diagonal(work, np.inf)
    node_id = np.arange(n, dtype=np.intp)
    size = np.ones(n, dtype=np.intp)
    left = np.empty(n - 1, dtype=np.intp)
    right = np.empty(n - 1, dtype=np.intp)
    heights = np.empty(n - 1, dtype=np.float64)
    out_size = np.empty(n - 1, dtype=np.intp)
    alive = np.ones(n, dtype=bool)
    for step in range(n - 1):
        i, j, dij = _argmin_pair(work, node_id)
        idx = np.nonzero(alive)[0]
        idx = idx[(idx != i) & (idx != j)]
        ni, nj = int(size[i]), int(size[j])
        for k in idx:
            ai, aj, beta, gamma = params.coefficients(ni, nj, int(size[k]))
            dik, djk = work[i, k], work[j, k]
            new = ai * dik + aj * djk + beta * dij + gamma * abs(dik - djk)
            work[i, k] = new
            work[k, i] = new
        work[j, :] = np.inf
        work[:, j] = np.inf
        alive[j] = False
        a, b = int(node_id[i]), int(node_id[j])
        left[step], right[step] = min(a, b), max(a, b)
        heights[step] = dij
        size[i] += size[j]
        out_size[step] = size[i]
        node_id[i] = n + step
    return Dendrogram(left=left, right=right, heights=heights, sizes=out_size)


def _argmin_pair(work: np.ndarray, node_id: np.ndarray) -> tuple[int, int, float]:
    """Minimal active pair; ties go to the smallest (low id, high id)."""
    dmin = work.min()
    ii, jj = np.nonzero(work == dmin)
    upper = ii < jj
    ii, jj = ii[upper], jj[upper]
    if len(ii) > 1:
        lo = np.minimum(node_id[ii], node_id[jj])
        hi = np.maximum(node_id[ii], node_id[jj])
        pick = np.lexsort((hi, lo))[0]
    else:
        pick = 0
    return int(ii[pick]), int(jj[pick]), float(dmin)


def minimax_distance(d: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    """Radius of the best center of the union: min over candidate centers of
    the max distance from the center to any point of either cluster."""
    u = np.concatenate([a, b])
    sub = d[np.ix_(u, u)]
    return float(sub.max(axis=1).min())


def hausdorff_distance(d: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    """Symmetrized farthest-nearest-neighbour distance between two clusters."""
    sub = d[np.ix_(a, b)]
    return float(max(sub.min(axis=1).max(), sub.min(axis=0).max()))


_GENERIC = {"minimax": minimax_distance, "hausdorff": hausdorff_distance}


def agglomerate_generic(d: np.ndarray, linkage: str = "minimax") -> Dendrogram:
    """Greedy agglomeration with a linkage recomputed from point distances.

    Unlike the parametric path there is no update rule: after each merge the
    distance between the new cluster and every other one is re-evaluated
    from the original point-to-point distances.
    """
    if linkage not in _GENERIC:
        raise ValueError(f"unknown linkage {linkage!r}, expected one of {GENERIC_LINKAGES}")
    d = _check_distance_input(d)
    fn = _GENERIC[linkage]
    n = d.shape[0]
    work = d.copy()
    np.fill_diagonal(work, np.inf)
    members: dict[int, np.ndarray] = {i: np.array([i]) for i in range(n)}
    node_id = np.arange(n, dtype=np.intp)
    size = np.ones(n, dtype=np.intp)
    left = np.empty(n - 1, dtype=np.intp)
    right = np.empty(n - 1, dtype=np.intp)
    heights = np.empty(n - 1, dtype=np.float64)
    out_size = np.empty(n - 1, dtype=np.intp)
    alive = np.ones(n, dtype=bool)
    for step in range(n - 1):
        i, j, dij = _argmin_pair(work, node_id)
        merged = np.concatenate([members[i], members[j]])
        members[i] = merged
        del members[j]
        alive[j] = False
        work[j, :] = np.inf
        work[:, j] = np.inf
        idx = np.nonzero(alive)[0]
        for k in idx:
            if k == i:
                continue
            v = fn(d, merged, members[k])
            work[i, k] = v
            work[k, i] = v
        a, b = int(node_id[i]), int(node_id[j])
        left[step], right[step] = min(a, b), max(a, b)
        heights[step] = dij
        size[i] += size[j]
        out_size[step] = size[i]
        node_id[i] = n + step
    return Dendrogram(left=left, right=right, heights=heights, sizes=out_size)
