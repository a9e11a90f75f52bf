"""Independent brute-force oracles used to validate the fast implementations.

Everything here recomputes quantities from first principles (per-step
re-evaluation over point distances, exhaustive enumeration, pair counting)
and deliberately shares no code with the package internals.
"""

import itertools

import numpy as np


def _pair_min(d, a, b):
    return min(d[i, j] for i in a for j in b)


def _pair_max(d, a, b):
    return max(d[i, j] for i in a for j in b)


def _pair_mean(d, a, b):
    return sum(d[i, j] for i in a for j in b) / (len(a) * len(b))


def _ward_explicit(d, a, b):
    # pairwise-sum form of the Ward linkage on raw dissimilarities
    na, nb = len(a), len(b)
    cross = sum(d[i, j] for i in a for j in b)
    within_a = sum(d[i, j] for i in a for j in a)
    within_b = sum(d[i, j] for i in b for j in b)
    return (na * nb / (na + nb)) * (
        2.0 / (na * nb) * cross - within_a / na**2 - within_b / nb**2
    )


def minimax_exhaustive(d, a, b):
    union = list(a) + list(b)
    return min(max(d[c, x] for x in union) for c in union)


def hausdorff_exhaustive(d, a, b):
    forward = max(min(d[i, j] for j in b) for i in a)
    backward = max(min(d[i, j] for i in a) for j in b)
    return max(forward, backward)


def reference_agglomerate(d, linkage, check_space=False):
    """Naive agglomeration: recompute all cluster distances at every step.

    single/complete/average/ward/minimax/hausdorff are evaluated from the
    original point distances via their definitions; mcquitty/median/centroid
    follow their recursive definitions on this function's own distance table.
    Ties on the merge distance resolve to the smallest (low id, high id).
    Returns a list of (left_id, right_id, height, size) records.

    With ``check_space`` every updated distance is asserted to lie in the
    hull of the point-to-point cross distances (space-conserving linkages)
    or strictly above both previous distances (ward, space-dilating).
    """
    n = d.shape[0]
    members = {i: [i] for i in range(n)}
    table = {(i, j): d[i, j] for i in range(n) for j in range(i + 1, n)}

    def tab(x, y):
        return table[(x, y) if x < y else (y, x)]

    merges = []
    for step in range(n - 1):
        best = None
        for x, y in itertools.combinations(sorted(members), 2):
            cand = (tab(x, y), min(x, y), max(x, y))
            if best is None or cand < best:
                best = cand
        height, x, y = best
        new = n + step
        merged = members[x] + members[y]
        nx, ny = len(members[x]), len(members[y])
        for other in members:
            if other in (x, y):
                continue
            if linkage == "single":
                value = _pair_min(d, merged, members[other])
            elif linkage == "complete":
                value = _pair_max(d, merged, members[other])
            elif linkage == "average":
                value = _pair_mean(d, merged, members[other])
            elif linkage == "ward":
                value = _ward_explicit(d, merged, members[other])
            elif linkage == "minimax":
                value = minimax_exhaustive(d, merged, members[other])
            elif linkage == "hausdorff":
                value = hausdorff_exhaustive(d, merged, members[other])
            elif linkage == "mcquitty":
                value = (tab(x, other) + tab(y, other)) / 2.0
            elif linkage == "median":
                value = tab(x, other) / 2.0 + tab(y, other) / 2.0 - tab(x, y) / 4.0
            elif linkage == "centroid":
                s = nx + ny
                value = (
                    nx / s * tab(x, other)
                    + ny / s * tab(y, other)
                    - (nx * ny) / s**2 * tab(x, y)
                )
            else:
                raise ValueError(linkage)
            if check_space:
                if linkage in ("single", "complete", "average", "mcquitty",
                               "minimax", "hausdorff"):
                    lo = _pair_min(d, merged, members[other])
                    hi = _pair_max(d, merged, members[other])
                    assert lo - 1e-12 <= value <= hi + 1e-12, (linkage, value, lo, hi)
                elif linkage == "ward":
                    # dilation: the update strictly exceeds the nearer of the
                    # two previous distances (the universal "> max" form has
                    # 3-point counterexamples on raw dissimilarities)
                    assert value > min(tab(x, other), tab(y, other)), linkage
            table[(min(new, other), max(new, other))] = value
        del members[x], members[y]
        members[new] = merged
        merges.append((min(x, y), max(x, y), height, len(merged)))
    return merges


def ari_pair_counting(labels_a, labels_b):
    """Adjusted Rand index from the literal definition over all point pairs."""
    n = len(labels_a)
    a_same_and_b_same = a_same = b_same = 0
    pairs = 0
    for i in range(n):
        for j in range(i + 1, n):
            pairs += 1
            sa = labels_a[i] == labels_a[j]
            sb = labels_b[i] == labels_b[j]
            a_same += sa
            b_same += sb
            a_same_and_b_same += sa and sb
    expected = a_same * b_same / pairs
    maximum = (a_same + b_same) / 2.0
    if maximum == expected:
        return 1.0
    return (a_same_and_b_same - expected) / (maximum - expected)


def random_correlation(n, rng, rank=None):
    """Random valid correlation matrix from a random factor model."""
    rank = rank or max(2, n // 2)
    w = rng.normal(size=(n, rank))
    sigma = w @ w.T + np.diag(rng.uniform(0.1, 1.0, size=n))
    scale = 1.0 / np.sqrt(np.diag(sigma))
    return sigma * np.outer(scale, scale)


def random_distance(n, rng):
    """Random symmetric matrix with zero diagonal, entries in (0, 1)."""
    a = rng.random((n, n))
    d = (a + a.T) / 2.0
    np.fill_diagonal(d, 0.0)
    return d


def random_monotone_transform(rng):
    """A random strictly increasing map applied elementwise."""
    kind = rng.integers(4)
    a = float(rng.uniform(0.5, 3.0))
    b = float(rng.uniform(-2.0, 2.0))
    if kind == 0:
        return lambda x: a * x + b
    if kind == 1:
        return lambda x: np.exp(a * x) + b
    if kind == 2:
        return lambda x: np.cbrt(x - b) * a
    return lambda x: a * x**3 + b
