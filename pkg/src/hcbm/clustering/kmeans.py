"""Distance-matrix k-means with farthest-point initialization.

Points live in a metric space given only by pairwise distances, so cluster
centers are medoids: the member minimizing the sum of within-cluster
distances.  Given strict separation between ground-truth clusters the
farthest-point sweep lands one center per cluster and the first assignment
is already exact.
"""

from __future__ import annotations

import numpy as np

from ..errors import DimensionMismatch, InvalidK
from ..sampler import generator
from .dendrogram import Partition

MAX_ITER = 100


def kmeans_fp(d: np.ndarray, k: int, seed: int = 0, max_iter: int = MAX_ITER) -> Partition:
    """Cluster into k groups; deterministic given (d, k, seed).

    The first center is drawn by the seeded generator, each further center
    maximizes the distance to its nearest chosen center, then assignment
    and medoid updates alternate until stable (at most ``max_iter`` rounds;
    non-convergence is flagged in ``meta['converged']``).  All argmin/argmax
    ties resolve to the lowest index.
    """
    d = np.asarray(d, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise DimensionMismatch(f"expected a square distance matrix, got shape {d.shape}")
    n = d.shape[0]
    if not 1 <= k <= n:
        raise InvalidK(f"cluster count {k} outside [1, {n}]")

    rng = generator(seed)
    centers = [int(rng.integers(n))]
    while len(centers) < k:
        nearest = d[:, centers].min(axis=1)
        centers.append(int(np.argmax(nearest)))
    centers = np.asarray(centers)

    labels = np.argmin(d[:, centers], axis=1)
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        for c in range(k):
            members = np.nonzero(labels == c)[0]
            if members.size == 0:
                continue
            within = d[np.ix_(members, members)].sum(axis=1)
            centers[c] = members[np.argmin(within)]
        new_labels = np.argmin(d[:, centers], axis=1)
        if np.array_equal(new_labels, labels):
            converged = True
            break
        labels = new_labels

    return Partition(
        labels,
        meta={
            "converged": converged,
            "iterations": iterations,
            "medoids": tuple(int(c) for c in centers),
        },
    )
