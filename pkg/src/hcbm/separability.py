"""Separation predicates and concentration-bound formulas.

These are the runtime-checkable conditions under which the clustering
algorithms provably recover the planted partitions: strict separation for
space-conserving linkages, a size-weighted variant for the space-dilating
Ward rule, their per-level versions for nested partitions, and the matching
entrywise error budgets on the estimated correlation matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .clustering import Partition
from .errors import InvalidHierarchy
from .model import Hierarchy

ALGORITHM_CLASSES = ("space_conserving", "ward")


@dataclass(frozen=True)
class S1Result:
    """Outcome of the strict-separation check, with the attaining pairs."""

    ok: bool
    max_intra: float
    min_inter: float
    intra_pair: tuple[int, int] | None
    inter_pair: tuple[int, int] | None

    def __bool__(self) -> bool:
        return self.ok


def _labels_of(truth) -> np.ndarray:
    if isinstance(truth, Partition):
        return truth.labels
    return np.asarray(truth)


def check_s1(d: np.ndarray, truth) -> S1Result:
    """True iff every within-cluster distance is below every between-cluster one.

    Clusters without internal pairs contribute nothing to the intra maximum
    (an empty maximum counts as -inf, so two singletons pass vacuously).
    """
    d = np.asarray(d, dtype=float)
    labels = _labels_of(truth)
    n = d.shape[0]
    if labels.shape != (n,):
        raise InvalidHierarchy(f"partition covers {labels.shape[0]} points, matrix has {n}")
    iu, ju = np.triu_indices(n, 1)
    same = labels[iu] == labels[ju]
    dv = d[iu, ju]

    if same.any():
        intra_at = np.nonzero(same)[0][np.argmax(dv[same])]
        max_intra = float(dv[intra_at])
        intra_pair = (int(iu[intra_at]), int(ju[intra_at]))
    else:
        max_intra, intra_pair = -math.inf, None
    if (~same).any():
        inter_at = np.nonzero(~same)[0][np.argmin(dv[~same])]
        min_inter = float(dv[inter_at])
        inter_pair = (int(iu[inter_at]), int(ju[inter_at]))
    else:
        min_inter, inter_pair = math.inf, None

    return S1Result(max_intra < min_inter, max_intra, min_inter, intra_pair, inter_pair)


def check_ward(d: np.ndarray, truth) -> bool:
    """Size-weighted separation sufficient for the Ward rule.

    With n the largest ground-truth cluster size, requires
    n * (max intra - min intra) < min inter - min intra.  Without any
    within-cluster pair the condition holds vacuously.
    """
    d = np.asarray(d, dtype=float)
    labels = _labels_of(truth)
    iu, ju = np.triu_indices(d.shape[0], 1)
    same = labels[iu] == labels[ju]
    dv = d[iu, ju]
    if not same.any():
        return True
    if not (~same).any():
        return False
    max_intra = float(dv[same].max())
    min_intra = float(dv[same].min())
    min_inter = float(dv[~same].min())
    n = int(np.bincount(labels).max())
    return n * (max_intra - min_intra) < min_inter - min_intra


@dataclass(frozen=True)
class LevelGaps:
    """Distance extremes per level k = 0..h plus largest cluster sizes.

    ``distance_lo[k]`` / ``distance_hi[k]`` bound the distances of variable
    pairs whose deepest common cluster sits at level k (None where a level
    has no pairs); ``largest[k]`` is the size of the biggest cluster of the
    level-k partition.
    """

    distance_lo: tuple[float | None, ...]
    distance_hi: tuple[float | None, ...]
    largest: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.largest) - 1

    @classmethod
    def from_hierarchy(cls, hierarchy: Hierarchy) -> "LevelGaps":
        """Nominal gaps from declared correlations, d = (1 - rho) / 2."""
        lo, hi = [], []
        for bounds in hierarchy.level_bounds():
            if bounds is None:
                lo.append(None)
                hi.append(None)
            else:
                rho_lo, rho_hi = bounds
                lo.append((1.0 - rho_hi) / 2.0)
                hi.append((1.0 - rho_lo) / 2.0)
        largest = tuple(hierarchy.largest_cluster(k) for k in range(hierarchy.h + 1))
        return cls(tuple(lo), tuple(hi), largest)

    @classmethod
    def from_matrix(cls, d: np.ndarray, hierarchy: Hierarchy) -> "LevelGaps":
        """Empirical gaps: realized min/max distances against ground truth."""
        d = np.asarray(d, dtype=float)
        n = hierarchy.n
        if d.shape != (n, n):
            raise InvalidHierarchy(f"matrix shape {d.shape} does not match N={n}")
        level = np.zeros((n, n), dtype=np.intp)
        for k in range(1, hierarchy.h + 1):
            labels = hierarchy.partition_at_level(k)
            level += labels[:, None] == labels[None, :]
        iu, ju = np.triu_indices(n, 1)
        lev = level[iu, ju]
        dv = d[iu, ju]
        lo, hi = [], []
        for k in range(hierarchy.h + 1):
            sel = lev == k
            if sel.any():
                lo.append(float(dv[sel].min()))
                hi.append(float(dv[sel].max()))
            else:
                lo.append(None)
                hi.append(None)
        largest = tuple(hierarchy.largest_cluster(k) for k in range(hierarchy.h + 1))
        return cls(tuple(lo), tuple(hi), largest)


def check_nested(d: np.ndarray, hierarchy: Hierarchy, algorithm_class: str = "space_conserving") -> bool:
    """Per-level separation on empirical gaps for the whole hierarchy.

    space_conserving: the level gap intervals must interleave strictly,
    i.e. the largest distance of every deeper level stays below the
    smallest distance of every shallower one.  ward: the size-weighted
    condition must hold at every level.  For a one-level hierarchy these
    reduce exactly to :func:`check_s1` / :func:`check_ward`.  Levels
    without pairs impose no constraint.
    """
    if algorithm_class not in ALGORITHM_CLASSES:
        raise InvalidHierarchy(f"unknown algorithm class {algorithm_class!r}")
    gaps = LevelGaps.from_matrix(d, hierarchy)
    h = gaps.depth
    if algorithm_class == "space_conserving":
        deeper_max = None  # largest distance seen at deeper levels
        for k in range(h, -1, -1):
            lo, hi = gaps.distance_lo[k], gaps.distance_hi[k]
            if lo is None:
                continue
            if deeper_max is not None and not deeper_max < lo:
                return False
            deeper_max = hi if deeper_max is None else max(deeper_max, hi)
        return True

    d_lo_h = gaps.distance_lo[h]
    if d_lo_h is None:
        return True
    for k in range(1, h + 1):
        if gaps.distance_hi[k] is None:
            continue
        shallower = [gaps.distance_lo[j] for j in range(k) if gaps.distance_lo[j] is not None]
        if not shallower:
            continue
        n_k = gaps.largest[k]
        if not n_k * (gaps.distance_hi[k] - d_lo_h) < min(shallower) - d_lo_h:
            return False
    return True


def max_error_budget(hierarchy: Hierarchy, algorithm_class: str = "space_conserving") -> float:
    """Largest tolerated entrywise correlation error for guaranteed recovery.

    space_conserving: half of the smallest correlation contrast between
    consecutive levels.  ward: the size-weighted budget, which can come out
    <= 0 for large clusters; a non-positive value is returned as-is and
    means no error level is certified.
    """
    if algorithm_class not in ALGORITHM_CLASSES:
        raise InvalidHierarchy(f"unknown algorithm class {algorithm_class!r}")
    bounds = hierarchy.level_bounds()
    present = [(k, b) for k, b in enumerate(bounds) if b is not None]
    if len(present) < 2:
        raise InvalidHierarchy("hierarchy has fewer than two populated levels")
    if algorithm_class == "space_conserving":
        budget = math.inf
        for (_, (_, shallow_hi)), ((_, (deep_lo, _))) in zip(present, present[1:]):
            budget = min(budget, (deep_lo - shallow_hi) / 2.0)
        return budget

    h = hierarchy.h
    if bounds[h] is None:
        raise InvalidHierarchy("no within-block pairs at the deepest level")
    rho_hi_h = bounds[h][1]
    budget = math.inf
    for k in range(1, h + 1):
        if bounds[k] is None:
            continue
        shallower = [bounds[j][1] for j in range(k) if bounds[j] is not None]
        if not shallower:
            continue
        rho_lo_k = bounds[k][0]
        n_k = hierarchy.largest_cluster(k)
        budget = min(
            budget,
            (rho_hi_h - max(shallower) - n_k * (rho_hi_h - rho_lo_k)) / (1.0 + 2.0 * n_k),
        )
    return budget


@dataclass(frozen=True)
class ConcentrationBound:
    """Entrywise deviation bound for the rank-correlation estimate."""

    value: float
    valid: bool

    def __float__(self) -> float:
        return self.value


def concentration_bound(n_variables: int, t_length: int) -> ConcentrationBound:
    """High-probability bound 24 * sqrt(ln N / T) on the max entry error.

    Natural logarithm throughout.  ``valid`` flags the regime
    N >= 24 / ln T + 2 in which the bound is stated; it holds with
    probability at least 1 - 1/T^2 there.
    """
    if n_variables < 2 or t_length < 2:
        raise ValueError("need N >= 2 and T >= 2")
    value = 24.0 * math.sqrt(math.log(n_variables) / t_length)
    valid = n_variables >= 24.0 / math.log(t_length) + 2.0
    return ConcentrationBound(value, valid)


def recovery_confidence(n_variables: int, t_length: int, gap: float) -> float:
    """Lower confidence 1 - 2 N^2 exp(-T d^2 / 24) that estimation noise
    stays inside a separation gap d.

    Deliberately reported without flooring at zero: for realistic N and T
    the value is hugely negative, which is the point being made.
    """
    if gap <= 0:
        raise ValueError("gap must be positive")
    return 1.0 - 2.0 * n_variables**2 * math.exp(-t_length * gap * gap / 24.0)
