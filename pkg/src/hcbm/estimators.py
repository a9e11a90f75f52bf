"""Empirical correlation estimators over T x N observation matrices."""

from __future__ import annotations

import numpy as np
from scipy.stats import rankdata

from .errors import DimensionMismatch, ZeroVariance

COEFFICIENTS = ("pearson", "spearman")


def column_ranks(x: np.ndarray) -> np.ndarray:
    """Average-tie ranks of one column (values in [1, T], sum T(T+1)/2)."""
    return rankdata(np.asarray(x, dtype=float), method="average")


def pearson(x: np.ndarray, y: np.ndarray) -> float:
    """Product-moment correlation of two columns.

    Two-pass: means are subtracted before accumulating co-moments, which is
    stable for long columns.  Raises ZeroVariance on a constant column.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatch(f"columns of equal length required, got {x.shape} and {y.shape}")
    if x.size < 2:
        raise DimensionMismatch("need at least two observations")
    xc = x - x.mean()
    yc = y - y.mean()
    sx2 = xc @ xc
    sy2 = yc @ yc
    if sx2 == 0.0:
        raise ZeroVariance(0)
    if sy2 == 0.0:
        raise ZeroVariance(1)
    r = float((xc @ yc) / np.sqrt(sx2 * sy2))
    return min(1.0, max(-1.0, r))


def spearman(x: np.ndarray, y: np.ndarray) -> float:
    """Rank correlation: Pearson applied to average-tie ranks.

    Without ties this equals the classic rank-difference formula
    1 - 6 * sum(d_t^2) / (T (T^2 - 1)), and it is invariant under strictly
    increasing transforms of either column.
    """
    return pearson(column_ranks(x), column_ranks(y))


def correlation_matrix(sample: np.ndarray, coefficient: str = "pearson") -> np.ndarray:
    """Pairwise correlation matrix of all columns of a T x N sample.

    The Spearman path ranks each column once (O(N T log T)) and then runs a
    single Pearson pass over the rank columns.
    """
    sample = np.asarray(sample, dtype=float)
    if sample.ndim != 2:
        raise DimensionMismatch(f"expected a T x N matrix, got shape {sample.shape}")
    if sample.shape[0] < 2:
        raise DimensionMismatch("need at least two observations per column")
    if coefficient not in COEFFICIENTS:
        raise ValueError(f"unknown coefficient {coefficient!r}, expected one of {COEFFICIENTS}")
    data = rankdata(sample, method="average", axis=0) if coefficient == "spearman" else sample
    centered = data - data.mean(axis=0)
    norms = np.sqrt(np.einsum("ti,ti->i", centered, centered))
    bad = np.nonzero(norms == 0.0)[0]
    if bad.size:
        raise ZeroVariance(int(bad[0]))
    c = (centered.T @ centered) / np.outer(norms, norms)
    c = (c + c.T) / 2.0
    np.clip(c, -1.0, 1.0, out=c)
    np.fill_diagonal(c, 1.0)
    return c


def max_abs_deviation(a: np.ndarray, b: np.ndarray) -> float:
    """Largest entrywise absolute difference between two equal-shape matrices."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.abs(a - b).max())
