"""Monte Carlo recovery experiments.

Two drivers: convergence curves (recovery ratio versus sample length for a
grid of models, algorithms and correlation coefficients) and isoquant grids
(recovery ratio over (rho, T) for a two-block model).  Trials derive their
seeds from (master seed, trial index, T, model), so reports are identical
for any thread count and any execution order.
"""

from __future__ import annotations

import hashlib
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._version import __version__
from .clustering import (
    ALL_ALGORITHMS,
    GENERIC_LINKAGES,
    LINKAGE_NAMES,
    Partition,
    agglomerate_generic,
    agglomerate_lw,
    backend_name,
    canonical_labels,
    cut_many,
    kmeans_fp,
)
from .errors import DimensionMismatch, ZeroVariance
from .estimators import COEFFICIENTS, correlation_matrix
from .model import Hierarchy, build_correlation, correlation_to_distance, two_block_hierarchy
from .sampler import MODELS, correlation_factor, derive_seed, generator

logger = logging.getLogger(__name__)

RECOVERY_MODES = ("all_levels", "top_level")


# -- partition scoring -------------------------------------------------------


def _labels_of(p) -> np.ndarray:
    return p.labels if isinstance(p, Partition) else canonical_labels(np.asarray(p))


def partition_equal(a, b) -> bool:
    """True iff the two partitions agree up to relabeling."""
    la, lb = _labels_of(a), _labels_of(b)
    if la.shape != lb.shape:
        raise DimensionMismatch(f"partitions cover {la.shape[0]} vs {lb.shape[0]} points")
    return bool(np.array_equal(la, lb))


def ari(a, b) -> float:
    """Adjusted Rand index (pair-counting agreement, chance-corrected)."""
    la, lb = _labels_of(a), _labels_of(b)
    if la.shape != lb.shape:
        raise DimensionMismatch(f"partitions cover {la.shape[0]} vs {lb.shape[0]} points")
    n = la.shape[0]
    table = np.zeros((int(la.max()) + 1, int(lb.max()) + 1))
    np.add.at(table, (la, lb), 1.0)

    def comb2(x):
        return x * (x - 1.0) / 2.0

    sum_cells = comb2(table).sum()
    sum_rows = comb2(table.sum(axis=1)).sum()
    sum_cols = comb2(table.sum(axis=0)).sum()
    total = comb2(float(n))
    expected = sum_rows * sum_cols / total
    maximum = (sum_rows + sum_cols) / 2.0
    if maximum == expected:
        return 1.0
    return float((sum_cells - expected) / (maximum - expected))


# -- configuration -----------------------------------------------------------


@dataclass(frozen=True)
class ModelSpec:
    """A return model: gaussian, or student_t with nu degrees of freedom."""

    name: str
    nu: float = 3.0

    def __post_init__(self):
        if self.name not in MODELS:
            raise ValueError(f"unknown model {self.name!r}, expected one of {MODELS}")

    @property
    def label(self) -> str:
        return self.name if self.name == "gaussian" else f"student_t(nu={self.nu:g})"


@dataclass(frozen=True)
class ExperimentConfig:
    """Full grid of a convergence experiment."""

    hierarchy: Hierarchy
    t_grid: tuple[int, ...]
    models: tuple[ModelSpec, ...] = (ModelSpec("gaussian"), ModelSpec("student_t"))
    algorithms: tuple[str, ...] = ("single", "average", "ward")
    coefficients: tuple[str, ...] = COEFFICIENTS
    trials: int = 100
    seed: int = 0
    recovery: str = "all_levels"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("need at least one trial per grid point")
        if not all(a < b for a, b in zip(self.t_grid, self.t_grid[1:])):
            raise ValueError("t_grid must be strictly increasing")
        if any(t < 2 for t in self.t_grid):
            raise ValueError("sample lengths must be >= 2")
        for alg in self.algorithms:
            if alg not in ALL_ALGORITHMS:
                raise ValueError(f"unknown algorithm {alg!r}, expected one of {ALL_ALGORITHMS}")
        for c in self.coefficients:
            if c not in COEFFICIENTS:
                raise ValueError(f"unknown coefficient {c!r}")
        if self.recovery not in RECOVERY_MODES:
            raise ValueError(f"unknown recovery mode {self.recovery!r}")

    def describe(self) -> dict:
        return {
            "kind": "convergence",
            "hierarchy": self.hierarchy.to_dict(),
            "t_grid": list(self.t_grid),
            "models": [{"name": m.name, "nu": m.nu} for m in self.models],
            "algorithms": list(self.algorithms),
            "coefficients": list(self.coefficients),
            "trials": self.trials,
            "seed": self.seed,
            "recovery": self.recovery,
        }


@dataclass(frozen=True)
class IsoquantConfig:
    """Recovery grid over (rho, T) for the two-block model."""

    rho_grid: tuple[float, ...]
    t_grid: tuple[int, ...]
    n_variables: int = 50
    trials: int = 50
    seed: int = 0
    model: ModelSpec = ModelSpec("gaussian")
    algorithm: str = "ward"
    coefficient: str = "spearman"
    rho_cross: float = 0.0

    def __post_init__(self):
        if not all(0.0 < r < 1.0 for r in self.rho_grid):
            raise ValueError("rho grid must lie in (0, 1)")
        if not all(a < b for a, b in zip(self.rho_grid, self.rho_grid[1:])):
            raise ValueError("rho_grid must be strictly increasing")
        if not all(a < b for a, b in zip(self.t_grid, self.t_grid[1:])):
            raise ValueError("t_grid must be strictly increasing")
        if self.algorithm not in ALL_ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.coefficient not in COEFFICIENTS:
            raise ValueError(f"unknown coefficient {self.coefficient!r}")

    def describe(self) -> dict:
        return {
            "kind": "isoquant",
            "n": self.n_variables,
            "rho_grid": list(self.rho_grid),
            "t_grid": list(self.t_grid),
            "trials": self.trials,
            "seed": self.seed,
            "model": {"name": self.model.name, "nu": self.model.nu},
            "algorithm": self.algorithm,
            "coefficient": self.coefficient,
            "rho_cross": self.rho_cross,
        }


# -- reports -----------------------------------------------------------------


@dataclass(frozen=True)
class GridPoint:
    """Aggregated recovery outcome of one experiment cell."""

    t_length: int
    model: str
    algorithm: str
    coefficient: str
    successes: int
    trials: int
    rho: float | None = None

    @property
    def ratio(self) -> float:
        return self.successes / self.trials

    @property
    def stderr(self) -> float:
        p = self.ratio
        return float(np.sqrt(p * (1.0 - p) / self.trials))


@dataclass
class ExperimentReport:
    """Grid results plus reproducibility metadata.

    The CSV serialization contains only deterministic columns; wall-clock
    timings live in the metadata sidecar so reports are byte-identical for
    a fixed seed regardless of thread count.
    """

    points: list[GridPoint]
    meta: dict = field(default_factory=dict)

    def find(self, **criteria) -> list[GridPoint]:
        out = []
        for p in self.points:
            if all(getattr(p, k) == v for k, v in criteria.items()):
                out.append(p)
        return out

    def one(self, **criteria) -> GridPoint:
        hits = self.find(**criteria)
        if len(hits) != 1:
            raise KeyError(f"{criteria} matched {len(hits)} grid points")
        return hits[0]

    def to_csv(self, path) -> None:
        has_rho = any(p.rho is not None for p in self.points)
        with open(path, "w") as fh:
            cols = "rho,T," if has_rho else "T,"
            fh.write(cols + "model,algorithm,coefficient,successes,trials,ratio,stderr\n")
            for p in self.points:
                prefix = f"{p.rho:.6g},{p.t_length}," if has_rho else f"{p.t_length},"
                fh.write(
                    prefix
                    + f"{p.model},{p.algorithm},{p.coefficient},"
                    + f"{p.successes},{p.trials},{p.ratio:.6f},{p.stderr:.6f}\n"
                )

    def write_meta(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.meta, fh, indent=2, sort_keys=True)
            fh.write("\n")


def config_hash(described: dict) -> str:
    return hashlib.sha256(json.dumps(described, sort_keys=True).encode()).hexdigest()


# -- single trials -----------------------------------------------------------


def _sample_trial(factor: np.ndarray, model: ModelSpec, t_length: int, seed_seq) -> np.ndarray:
    rng = generator(seed_seq)
    z = rng.standard_normal((t_length, factor.shape[0])) @ factor.T
    if model.name == "gaussian":
        return z
    z *= np.sqrt((model.nu - 2.0) / model.nu)
    u = rng.chisquare(model.nu, size=t_length)
    z /= np.sqrt(u / model.nu)[:, None]
    return z


def _cluster_and_compare(
    dist: np.ndarray,
    algorithm: str,
    truths: dict[int, np.ndarray],
    kmeans_seed,
) -> bool:
    if algorithm == "kmeans":
        for k, truth in truths.items():
            part = kmeans_fp(dist, k, seed=kmeans_seed)
            if not np.array_equal(part.labels, truth):
                return False
        return True
    if algorithm in GENERIC_LINKAGES:
        dend = agglomerate_generic(dist, algorithm)
    else:
        dend = agglomerate_lw(dist, algorithm)
    cuts = cut_many(dend, list(truths))
    return all(np.array_equal(cuts[k].labels, truth) for k, truth in truths.items())


def _run_one_trial(
    factor: np.ndarray,
    model: ModelSpec,
    t_length: int,
    trial_index: int,
    master_seed: int,
    algorithms: tuple[str, ...],
    coefficients: tuple[str, ...],
    truths: dict[int, np.ndarray],
    seed_extra: tuple[int, ...] = (),
) -> dict[tuple[str, str], bool]:
    seed_seq = derive_seed(master_seed, trial_index, t_length, model.name, extra=seed_extra)
    x = _sample_trial(factor, model, t_length, seed_seq)
    out: dict[tuple[str, str], bool] = {}
    for coefficient in coefficients:
        try:
            corr = correlation_matrix(x, coefficient)
        except ZeroVariance as exc:
            logger.warning(
                "trial %d (T=%d, %s, %s) failed: %s",
                trial_index, t_length, model.label, coefficient, exc,
            )
            for algorithm in algorithms:
                out[(algorithm, coefficient)] = False
            continue
        dist = correlation_to_distance(corr)
        kseed = derive_seed(master_seed, trial_index, t_length, model.name,
                            extra=seed_extra + (10_000,))
        for algorithm in algorithms:
            out[(algorithm, coefficient)] = _cluster_and_compare(dist, algorithm, truths, kseed)
    return out


def _truth_labels(hierarchy: Hierarchy, recovery: str) -> dict[int, np.ndarray]:
    levels = range(1, hierarchy.h + 1) if recovery == "all_levels" else (1,)
    out = {}
    for k in levels:
        labels = canonical_labels(hierarchy.partition_at_level(k))
        out[int(labels.max()) + 1] = labels
    return out


def recovery_trial(
    config: ExperimentConfig, model: ModelSpec, t_length: int, trial_index: int
) -> dict[tuple[str, str], bool]:
    """Outcome of one trial for every (algorithm, coefficient) pair.

    Sampling, estimation and clustering exactly as in the full run; replaying
    the same (seed, trial index) reproduces the same booleans.
    """
    sigma = build_correlation(config.hierarchy)
    factor = correlation_factor(sigma)
    truths = _truth_labels(config.hierarchy, config.recovery)
    return _run_one_trial(
        factor, model, t_length, trial_index, config.seed,
        config.algorithms, config.coefficients, truths,
    )


def noise_free_recovery(
    hierarchy: Hierarchy,
    algorithms: tuple[str, ...] = LINKAGE_NAMES + GENERIC_LINKAGES,
    recovery: str = "all_levels",
    kmeans_seed: int = 0,
) -> dict[str, bool]:
    """Recovery from the exact correlation matrix (no sampling noise)."""
    dist = correlation_to_distance(build_correlation(hierarchy))
    truths = _truth_labels(hierarchy, recovery)
    return {
        algorithm: _cluster_and_compare(dist, algorithm, truths, kmeans_seed)
        for algorithm in algorithms
    }


# -- runners -----------------------------------------------------------------


def _run_trials(tasks, threads: int):
    """Evaluate 0-argument callables, preserving task order."""
    if threads <= 1:
        return [task() for task in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(task) for task in tasks]
        return [f.result() for f in futures]


def run_convergence(config: ExperimentConfig, threads: int = 1) -> ExperimentReport:
    """Full (T x model x algorithm x coefficient) recovery grid.

    Trial-level parallelism; aggregation is an order-independent count, so
    the report is identical for any ``threads``.
    """
    sigma = build_correlation(config.hierarchy)
    factor = correlation_factor(sigma)
    truths = _truth_labels(config.hierarchy, config.recovery)
    points: list[GridPoint] = []
    wall: dict[str, float] = {}
    for t_length in config.t_grid:
        for model in config.models:
            started = time.perf_counter()
            tasks = [
                (lambda idx=i, t=t_length, m=model: _run_one_trial(
                    factor, m, t, idx, config.seed,
                    config.algorithms, config.coefficients, truths,
                ))
                for i in range(config.trials)
            ]
            results = _run_trials(tasks, threads)
            for algorithm in config.algorithms:
                for coefficient in config.coefficients:
                    successes = sum(r[(algorithm, coefficient)] for r in results)
                    points.append(GridPoint(
                        t_length=t_length, model=model.label, algorithm=algorithm,
                        coefficient=coefficient, successes=successes, trials=config.trials,
                    ))
            wall[f"T={t_length},{model.label}"] = time.perf_counter() - started
    described = config.describe()
    meta = {
        "config": described,
        "config_hash": config_hash(described),
        "seed": config.seed,
        "build": f"hcbm {__version__} [{backend_name()}]",
        "wall_times_s": {k: round(v, 3) for k, v in wall.items()},
    }
    return ExperimentReport(points, meta)


def run_isoquant(config: IsoquantConfig, threads: int = 1) -> ExperimentReport:
    """Recovery ratio over the (rho, T) grid of the two-block model."""
    points: list[GridPoint] = []
    wall: dict[str, float] = {}
    for rho in config.rho_grid:
        hierarchy = two_block_hierarchy(config.n_variables, rho, config.rho_cross)
        factor = correlation_factor(build_correlation(hierarchy))
        truths = _truth_labels(hierarchy, "top_level")
        extra = (int(round(rho * 1e9)),)
        for t_length in config.t_grid:
            started = time.perf_counter()
            tasks = [
                (lambda idx=i, t=t_length, f=factor: _run_one_trial(
                    f, config.model, t, idx, config.seed,
                    (config.algorithm,), (config.coefficient,), truths, seed_extra=extra,
                ))
                for i in range(config.trials)
            ]
            results = _run_trials(tasks, threads)
            successes = sum(r[(config.algorithm, config.coefficient)] for r in results)
            points.append(GridPoint(
                t_length=t_length, model=config.model.label, algorithm=config.algorithm,
                coefficient=config.coefficient, successes=successes, trials=config.trials,
                rho=rho,
            ))
            wall[f"rho={rho:g},T={t_length}"] = time.perf_counter() - started
    described = config.describe()
    meta = {
        "config": described,
        "config_hash": config_hash(described),
        "seed": config.seed,
        "build": f"hcbm {__version__} [{backend_name()}]",
        "wall_times_s": {k: round(v, 3) for k, v in wall.items()},
    }
    return ExperimentReport(points, meta)
