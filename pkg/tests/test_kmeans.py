import numpy as np
import pytest

from hcbm import InvalidK, build_correlation, check_s1, correlation_to_distance, kmeans_fp
from hcbm import two_block_hierarchy


def test_noise_free_two_block_recovery():
    h = two_block_hierarchy(20, 0.7, 0.15)
    d = correlation_to_distance(build_correlation(h))
    truth = h.partition_at_level(1)
    assert check_s1(d, truth).ok
    for seed in range(5):
        part = kmeans_fp(d, 2, seed=seed)
        assert np.array_equal(part.labels, truth)
        assert part.meta["converged"]


def test_extreme_k():
    h = two_block_hierarchy(10, 0.6)
    d = correlation_to_distance(build_correlation(h))
    singletons = kmeans_fp(d, 10, seed=1)
    assert singletons.n_clusters == 10
    one = kmeans_fp(d, 1, seed=1)
    assert one.n_clusters == 1
    assert np.all(one.labels == 0)


def test_k_validation():
    d = correlation_to_distance(build_correlation(two_block_hierarchy(6, 0.5)))
    with pytest.raises(InvalidK):
        kmeans_fp(d, 0)
    with pytest.raises(InvalidK):
        kmeans_fp(d, 7)


def test_deterministic_given_seed(rng):
    a = rng.random((15, 15))
    d = (a + a.T) / 2
    np.fill_diagonal(d, 0.0)
    p1 = kmeans_fp(d, 4, seed=99)
    p2 = kmeans_fp(d, 4, seed=99)
    assert np.array_equal(p1.labels, p2.labels)
    assert p1.meta == p2.meta


def test_medoids_are_members(rng):
    a = rng.random((12, 12))
    d = (a + a.T) / 2
    np.fill_diagonal(d, 0.0)
    part = kmeans_fp(d, 3, seed=3)
    for medoid in part.meta["medoids"]:
        assert 0 <= medoid < 12
    assert part.meta["iterations"] <= 100
