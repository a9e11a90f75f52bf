import json

import numpy as np
import pytest

from hcbm import (
    Block,
    Hierarchy,
    InvalidHierarchy,
    InvalidPermutation,
    NotPositiveSemiDefinite,
    benchmark_hierarchy,
    build_correlation,
    correlation_to_distance,
    distance_to_correlation,
    permute,
    two_block_hierarchy,
    validate_correlation,
)
from hcbm.model import EU_HY_SIZES, EU_IG_SIZES


def test_single_block_uniform():
    h = Hierarchy(Block(rho=0.0, children=(Block(rho=0.5, size=3), Block(rho=0.5, size=2))))
    m = build_correlation(h)
    assert m.shape == (5, 5)
    block = m[:3, :3]
    assert np.all(np.diag(block) == 1.0)
    off = block[~np.eye(3, dtype=bool)]
    assert np.all(off == 0.5)


def test_benchmark_hierarchy_structure(bench265):
    assert bench265.n == 265
    assert bench265.h == 2
    top = bench265.partition_at_level(1)
    assert top.max() + 1 == 3
    assert sum(EU_IG_SIZES) == 115
    assert sum(EU_HY_SIZES) == 100
    assert bench265.cluster_counts() == [3, 15]


def test_benchmark_matrix_values(bench_matrix):
    m = bench_matrix
    assert m.shape == (265, 265)
    # inside the first industry block of each market
    assert m[0, 1] == 0.7
    assert m[116, 117] == 0.7
    # inside the Japanese block
    assert m[220, 230] == 0.6
    # Japanese against the two European markets
    assert m[0, 220] == 0.15
    assert m[120, 220] == 0.0
    validate_correlation(m)


def test_benchmark_entries_within_level_bounds(bench265, bench_matrix):
    # every entry sits inside the declared range of its deepest shared level
    level = np.zeros((265, 265), dtype=int)
    for k in range(1, bench265.h + 1):
        labels = bench265.partition_at_level(k)
        level += labels[:, None] == labels[None, :]
    bounds = bench265.level_bounds()
    iu, ju = np.triu_indices(265, 1)
    for k, b in enumerate(bounds):
        sel = level[iu, ju] == k
        if not sel.any():
            continue
        vals = bench_matrix[iu, ju][sel]
        assert b is not None
        assert vals.min() >= b[0] and vals.max() <= b[1]


def test_two_block_matrix():
    m = build_correlation(two_block_hierarchy(6, 0.3))
    assert np.all(m[:3, 3:] == 0.0)
    assert m[0, 1] == 0.3
    assert m[4, 5] == 0.3


def test_nesting_must_strictly_increase():
    with pytest.raises(InvalidHierarchy):
        Hierarchy(Block(rho=0.7, children=(Block(rho=0.7, size=2), Block(rho=0.7, size=2))))
    with pytest.raises(InvalidHierarchy):
        # deeper level below shallower one
        Hierarchy(Block(rho=0.5, children=(Block(rho=0.3, size=2), Block(rho=0.8, size=2))))


def test_global_level_nesting_across_branches():
    # per-edge nesting holds, but level-1 values overlap level-2 values
    deep_a = Block(rho=0.5, children=(Block(rho=0.9, size=2), Block(rho=0.9, size=2)))
    deep_b = Block(rho=0.3, children=(Block(rho=0.4, size=2), Block(rho=0.4, size=2)))
    with pytest.raises(InvalidHierarchy):
        Hierarchy(Block(rho=0.1, children=(deep_a, deep_b)))


def test_leaf_and_children_exclusive():
    with pytest.raises(InvalidHierarchy):
        Hierarchy(Block(rho=0.5, size=3, children=(Block(rho=0.7, size=2),)))
    with pytest.raises(InvalidHierarchy):
        Hierarchy(Block(rho=0.5, children=(Block(rho=0.7, size=2),)))


def test_psd_validation_rejects_negative_correlation_triple():
    bad = np.full((3, 3), -0.9)
    np.fill_diagonal(bad, 1.0)
    with pytest.raises(NotPositiveSemiDefinite):
        validate_correlation(bad)


def test_permute_identity_and_inverse(bench_matrix, rng):
    n = bench_matrix.shape[0]
    identity = np.arange(n)
    assert np.array_equal(permute(bench_matrix, identity), bench_matrix)
    perm = rng.permutation(n)
    scrambled = permute(bench_matrix, perm)
    restored = permute(scrambled, np.argsort(perm))
    assert np.array_equal(restored, bench_matrix)


def test_permute_reversal_sorted_view(bench_matrix):
    n = bench_matrix.shape[0]
    rev = np.arange(n)[::-1]
    scrambled = permute(bench_matrix, rev)
    assert not np.array_equal(scrambled, bench_matrix)
    assert np.array_equal(scrambled[np.ix_(rev, rev)], bench_matrix)


def test_permute_rejects_non_bijection():
    with pytest.raises(InvalidPermutation):
        permute(np.eye(3), np.array([0, 0, 2]))


def test_sibling_reorder_is_a_permutation():
    a = Block(rho=0.1, children=(Block(rho=0.7, size=2), Block(rho=0.8, size=3)))
    b = Block(rho=0.1, children=(Block(rho=0.8, size=3), Block(rho=0.7, size=2)))
    ma = build_correlation(Hierarchy(a))
    mb = build_correlation(Hierarchy(b))
    perm = np.array([3, 4, 0, 1, 2])  # leaves of block a mapped into b's layout
    assert np.array_equal(permute(ma, perm), mb)


def test_distance_mapping_values():
    m = np.array([[1.0, 0.7], [0.7, 1.0]])
    d = correlation_to_distance(m)
    assert d[0, 1] == pytest.approx(0.15, abs=1e-15)
    assert d[0, 0] == 0.0
    assert correlation_to_distance(np.array([[1.0, 1.0], [1.0, 1.0]]))[0, 1] == 0.0
    assert correlation_to_distance(np.array([[1.0, -1.0], [-1.0, 1.0]]))[0, 1] == 1.0
    assert correlation_to_distance(np.array([[1.0, 0.15], [0.15, 1.0]]))[0, 1] == 0.425


def test_distance_round_trip(bench_matrix):
    d = correlation_to_distance(bench_matrix)
    back = distance_to_correlation(d)
    np.testing.assert_allclose(back, bench_matrix, rtol=0, atol=1e-15)


def test_hierarchy_json_round_trip(tmp_path, bench265):
    path = tmp_path / "bench.json"
    bench265.to_json(path)
    loaded = Hierarchy.from_json(path)
    assert loaded.to_dict() == bench265.to_dict()
    assert np.array_equal(build_correlation(loaded), build_correlation(bench265))
    # file is plain JSON with the documented fields
    raw = json.loads(path.read_text())
    assert "children" in raw and "cross" in raw


def test_cross_overrides_validated():
    with pytest.raises(InvalidHierarchy):
        Hierarchy(Block(children=(Block(rho=0.7, size=2), Block(rho=0.7, size=2)),
                        cross=((0, 2, 0.1),)))
    with pytest.raises(InvalidHierarchy):
        Hierarchy(Block(children=(Block(rho=0.7, size=2), Block(rho=0.7, size=2)),
                        cross=((0, 1, 0.1), (1, 0, 0.2))))
    # a pair with neither default nor override
    with pytest.raises(InvalidHierarchy):
        Hierarchy(Block(children=(
            Block(rho=0.7, size=2), Block(rho=0.7, size=2), Block(rho=0.7, size=2)),
            cross=((0, 1, 0.1),)))


def test_partition_levels_nested(bench265):
    p1 = bench265.partition_at_level(1)
    p2 = bench265.partition_at_level(2)
    # refinement: same level-2 cluster implies same level-1 cluster
    for c in range(p2.max() + 1):
        members = np.nonzero(p2 == c)[0]
        assert len(set(p1[members])) == 1
