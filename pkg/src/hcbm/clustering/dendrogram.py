"""Merge trees and flat partitions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatch, InvalidK


@dataclass(frozen=True)
class Dendrogram:
    """N-1 merge records in merge order.

    Node ids follow the usual convention: leaves are 0..N-1 and the cluster
    created by merge s gets id N+s.  ``heights`` are the inter-cluster
    distances at merge time (median/centroid may produce inversions).
    """

    left: np.ndarray
    right: np.ndarray
    heights: np.ndarray
    sizes: np.ndarray

    @property
    def n_leaves(self) -> int:
        return len(self.heights) + 1

    def cut(self, k: int) -> "Partition":
        """Partition into k clusters by undoing the last k-1 merges.

        Merges are undone in merge order, not height order, so the cut is
        well defined even when heights are non-monotone.
        """
        return cut_many(self, [k])[k]


@dataclass(frozen=True)
class Partition:
    """Cluster labels in canonical (first-occurrence) form."""

    labels: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", canonical_labels(self.labels))

    @property
    def n_points(self) -> int:
        return len(self.labels)

    @property
    def n_clusters(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    def members(self) -> list[np.ndarray]:
        return [np.nonzero(self.labels == c)[0] for c in range(self.n_clusters)]


def canonical_labels(labels: np.ndarray) -> np.ndarray:
    """Relabel clusters by first occurrence, making label vectors comparable."""
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise DimensionMismatch(f"labels must be a vector, got shape {labels.shape}")
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first))
    return order[inverse].astype(np.intp)


def cut_many(dend: Dendrogram, ks) -> dict[int, Partition]:
    """Cut one dendrogram at several cluster counts in a single replay."""
    n = dend.n_leaves
    wanted = set()
    for k in ks:
        if not 1 <= k <= n:
            raise InvalidK(f"cluster count {k} outside [1, {n}]")
        wanted.add(int(k))
    out: dict[int, Partition] = {}
    if n in wanted:
        out[n] = Partition(np.arange(n))
    # component id per node; leaves point at themselves initially
    comp = np.arange(n)
    node_of = np.arange(n)  # current component id indexed by node id
    node_of = np.concatenate([node_of, np.zeros(n - 1, dtype=np.intp)])
    for s in range(n - 1):
        a = node_of[dend.left[s]]
        b = node_of[dend.right[s]]
        comp[comp == b] = a
        node_of[n + s] = a
        remaining = n - 1 - s
        if remaining in wanted:
            out[remaining] = Partition(comp)
    return out


def merge_members(dend: Dendrogram) -> list[np.ndarray]:
    """Leaf members of every internal node, indexed by merge step."""
    n = dend.n_leaves
    members: list[np.ndarray] = [np.array([i]) for i in range(n)]
    for s in range(n - 1):
        members.append(np.concatenate([members[dend.left[s]], members[dend.right[s]]]))
    return members[n:]
