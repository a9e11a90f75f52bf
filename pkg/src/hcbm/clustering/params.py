"""Parameterization of the agglomerative update rule.

Each merge of clusters Ci and Cj rewrites the distance to every other
cluster Ck as

    D(Ci u Cj, Ck) = a_i * D_ik + a_j * D_jk + b * D_ij + g * |D_ik - D_jk|

where the coefficients may depend on the three cluster sizes.  The seven
classic variants are provided by name; custom coefficient functions are
accepted as well (they run on the generic Python path).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

Coefficient = float | Callable[[int, int, int], float]

# Codes shared with the compiled kernel; order matters.
VARIANT_CODES = {
    "single": 0,
    "complete": 1,
    "average": 2,
    "mcquitty": 3,
    "median": 4,
    "centroid": 5,
    "ward": 6,
}

LINKAGE_NAMES = tuple(VARIANT_CODES)

# Linkages whose merge heights are non-decreasing; median and centroid can
# produce inversions and are exempt from the monotonicity invariant.
MONOTONE_LINKAGES = ("single", "complete", "average", "mcquitty", "ward")
SPACE_CONSERVING_LINKAGES = ("single", "complete", "average", "mcquitty")


@dataclass(frozen=True)
class LanceWilliamsParams:
    """Update coefficients, each a constant or a function of (n_i, n_j, n_k)."""

    alpha_i: Coefficient
    alpha_j: Coefficient
    beta: Coefficient = 0.0
    gamma: Coefficient = 0.0
    name: str | None = None

    def coefficients(self, n_i: int, n_j: int, n_k: int) -> tuple[float, float, float, float]:
        def ev(c: Coefficient) -> float:
            return c(n_i, n_j, n_k) if callable(c) else c

        return ev(self.alpha_i), ev(self.alpha_j), ev(self.beta), ev(self.gamma)


def lw_params(name: str) -> LanceWilliamsParams:
    """Coefficients of one of the seven named variants."""
    if name not in VARIANT_CODES:
        raise ValueError(f"unknown linkage {name!r}, expected one of {LINKAGE_NAMES}")
    if name == "single":
        return LanceWilliamsParams(0.5, 0.5, 0.0, -0.5, name=name)
    if name == "complete":
        return LanceWilliamsParams(0.5, 0.5, 0.0, 0.5, name=name)
    if name == "average":
        return LanceWilliamsParams(
            lambda ni, nj, nk: ni / (ni + nj),
            lambda ni, nj, nk: nj / (ni + nj),
            name=name,
        )
    if name == "mcquitty":
        return LanceWilliamsParams(0.5, 0.5, name=name)
    if name == "median":
        return LanceWilliamsParams(0.5, 0.5, -0.25, name=name)
    if name == "centroid":
        return LanceWilliamsParams(
            lambda ni, nj, nk: ni / (ni + nj),
            lambda ni, nj, nk: nj / (ni + nj),
            lambda ni, nj, nk: -(ni * nj) / (ni + nj) ** 2,
            name=name,
        )
    return LanceWilliamsParams(
        lambda ni, nj, nk: (ni + nk) / (ni + nj + nk),
        lambda ni, nj, nk: (nj + nk) / (ni + nj + nk),
        lambda ni, nj, nk: -nk / (ni + nj + nk),
        name="ward",
    )
