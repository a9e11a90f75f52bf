"""Agglomerative and medoid clustering over distance matrices."""

from ._backend import backend_name
from .agglomerate import (
    GENERIC_LINKAGES,
    agglomerate_generic,
    agglomerate_lw,
    hausdorff_distance,
    minimax_distance,
)
from .dendrogram import Dendrogram, Partition, canonical_labels, cut_many, merge_members
from .kmeans import kmeans_fp
from .params import (
    LINKAGE_NAMES,
    MONOTONE_LINKAGES,
    SPACE_CONSERVING_LINKAGES,
    VARIANT_CODES,
    LanceWilliamsParams,
    lw_params,
)

ALL_ALGORITHMS = LINKAGE_NAMES + GENERIC_LINKAGES + ("kmeans",)

__all__ = [
    "ALL_ALGORITHMS",
    "Dendrogram",
    "GENERIC_LINKAGES",
    "LINKAGE_NAMES",
    "LanceWilliamsParams",
    "MONOTONE_LINKAGES",
    "Partition",
    "SPACE_CONSERVING_LINKAGES",
    "VARIANT_CODES",
    "agglomerate_generic",
    "agglomerate_lw",
    "backend_name",
    "canonical_labels",
    "cut_many",
    "hausdorff_distance",
    "kmeans_fp",
    "lw_params",
    "merge_members",
    "minimax_distance",
]
