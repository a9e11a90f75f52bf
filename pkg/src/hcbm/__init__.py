"""Correlated time series under nested block correlation models.

Generate correlation matrices with a planted cluster hierarchy, sample
Gaussian or Student-t observations from them, estimate Pearson/Spearman
correlation matrices, cluster with the classic agglomerative family plus
minimax/Hausdorff linkage and medoid k-means, verify separation conditions,
and measure cluster-recovery rates as a function of sample length.
"""

from ._version import __version__
from .clustering import (
    ALL_ALGORITHMS,
    Dendrogram,
    LanceWilliamsParams,
    Partition,
    agglomerate_generic,
    agglomerate_lw,
    backend_name,
    canonical_labels,
    cut_many,
    kmeans_fp,
    lw_params,
)
from .errors import (
    DegenerateParameters,
    DimensionMismatch,
    HcbmError,
    InvalidHierarchy,
    InvalidK,
    InvalidPermutation,
    NotPositiveSemiDefinite,
    ZeroVariance,
)
from .estimators import correlation_matrix, max_abs_deviation, pearson, spearman
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    IsoquantConfig,
    ModelSpec,
    ari,
    noise_free_recovery,
    partition_equal,
    recovery_trial,
    run_convergence,
    run_isoquant,
)
from .model import (
    Block,
    Hierarchy,
    benchmark_hierarchy,
    build_correlation,
    correlation_to_distance,
    distance_to_correlation,
    permute,
    two_block_hierarchy,
    validate_correlation,
)
from .sampler import SamplerSpec, correlation_factor, derive_seed, sample
from .separability import (
    LevelGaps,
    check_nested,
    check_s1,
    check_ward,
    concentration_bound,
    max_error_budget,
    recovery_confidence,
)

__all__ = [name for name in dir() if not name.startswith("_")]
