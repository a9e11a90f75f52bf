import math

import numpy as np
import pytest

from hcbm import (
    DimensionMismatch,
    SamplerSpec,
    ZeroVariance,
    build_correlation,
    max_abs_deviation,
    pearson,
    sample,
    spearman,
    two_block_hierarchy,
)
from hcbm.estimators import column_ranks, correlation_matrix

from _reference import random_monotone_transform


def test_pearson_hand_values():
    assert pearson(np.array([1.0, 2, 3]), np.array([1.0, 2, 3])) == pytest.approx(1.0, abs=1e-12)
    assert pearson(np.array([1.0, 2, 3]), np.array([3.0, 2, 1])) == pytest.approx(-1.0, abs=1e-12)
    r = pearson(np.array([1.0, 2, 3, 4]), np.array([1.0, 3, 2, 4]))
    assert abs(r - 0.8) < 1e-12


def test_pearson_affine_invariance(rng):
    x = rng.normal(size=200)
    y = rng.normal(size=200)
    r = pearson(x, y)
    assert abs(pearson(3.5 * x + 2.0, y) - r) < 1e-12
    assert abs(pearson(x, 0.1 * y - 7.0) - r) < 1e-12


def test_spearman_hand_values():
    assert spearman(np.array([1.0, 2, 3]), np.array([1.0, 4, 9])) == pytest.approx(1.0, abs=1e-12)
    r = spearman(np.array([1.0, 2, 3, 4]), np.array([1.0, 3, 2, 4]))
    assert abs(r - 0.8) < 1e-12
    x = np.array([0.3, -1.2, 2.0, 0.9])
    assert spearman(x, np.exp(x)) == pytest.approx(1.0, abs=1e-12)


def test_spearman_matches_rank_difference_formula(rng):
    # tie-free case: 1 - 6 sum(d^2) / (T(T^2-1))
    for _ in range(20):
        t = int(rng.integers(4, 40))
        x = rng.normal(size=t)
        y = rng.normal(size=t)
        diff = column_ranks(x) - column_ranks(y)
        expected = 1.0 - 6.0 * (diff @ diff) / (t * (t**2 - 1.0))
        assert abs(spearman(x, y) - expected) < 1e-12


def test_spearman_monotone_invariance(rng):
    x = rng.normal(size=60)
    y = rng.normal(size=60)
    base = spearman(x, y)
    for _ in range(50):
        f = random_monotone_transform(rng)
        g = random_monotone_transform(rng)
        assert spearman(f(x), g(y)) == base


def test_estimators_symmetric_and_bounded(rng):
    for _ in range(50):
        x = rng.normal(size=30)
        y = rng.normal(size=30)
        assert pearson(x, y) == pearson(y, x)
        assert spearman(x, y) == spearman(y, x)
        assert abs(pearson(x, y)) <= 1 + 1e-12
        assert abs(spearman(x, y)) <= 1 + 1e-12


def test_zero_variance_detected():
    with pytest.raises(ZeroVariance):
        pearson(np.ones(5), np.arange(5.0))
    x = np.column_stack([np.arange(6.0), np.full(6, 2.0), np.arange(6.0) ** 2])
    with pytest.raises(ZeroVariance) as err:
        correlation_matrix(x)
    assert err.value.column == 1


def test_ranks_properties(rng):
    x = rng.normal(size=40)
    r = column_ranks(x)
    assert r.min() >= 1 and r.max() <= 40
    assert r.sum() == 40 * 41 / 2
    withties = np.array([1.0, 2.0, 2.0, 3.0])
    assert np.array_equal(column_ranks(withties), [1.0, 2.5, 2.5, 4.0])


def test_correlation_matrix_duplicated_columns(rng):
    x = rng.normal(size=(50, 2))
    x = np.column_stack([x, x[:, 0]])
    c = correlation_matrix(x, "pearson")
    assert c[0, 2] == pytest.approx(1.0, abs=1e-12)
    assert c[0, 2] <= 1.0
    assert np.array_equal(c, c.T)
    assert np.all(np.diag(c) == 1.0)


def test_rank_transform_identity(rng):
    x = rng.normal(size=(80, 4))
    ranks = np.column_stack([column_ranks(x[:, i]) for i in range(4)])
    np.testing.assert_array_equal(
        correlation_matrix(ranks, "pearson"), correlation_matrix(x, "spearman")
    )


def test_correlation_matrix_accuracy_two_block():
    h = two_block_hierarchy(20, 0.6, 0.1)
    sigma = build_correlation(h)
    x = sample(SamplerSpec("gaussian", sigma, seed=7), 20000)
    c = correlation_matrix(x, "pearson")
    assert max_abs_deviation(c, sigma) < 0.05


def test_max_abs_deviation_examples(rng):
    a = rng.random((6, 6))
    assert max_abs_deviation(a, a) == 0.0
    b = a.copy()
    b[2, 4] += 0.1
    assert abs(max_abs_deviation(a, b) - 0.1) < 1e-15
    c = rng.random((6, 6))
    brute = max(abs(a[i, j] - c[i, j]) for i in range(6) for j in range(6))
    assert max_abs_deviation(a, c) == brute
    with pytest.raises(DimensionMismatch):
        max_abs_deviation(a, np.eye(3))


def test_spearman_concentration_loose():
    # deviation of the rank correlation matrix from its population value
    # (for Gaussian data: (6/pi) asin(rho/2)) stays below 24 sqrt(ln N / T)
    n, t, trials = 20, 150, 30
    sigma = build_correlation(two_block_hierarchy(n, 0.5, 0.1))
    pop_spearman = 6.0 / math.pi * np.arcsin(sigma / 2.0)
    np.fill_diagonal(pop_spearman, 1.0)
    bound = 24.0 * math.sqrt(math.log(n) / t)
    violations = 0
    for seed in range(trials):
        x = sample(SamplerSpec("gaussian", sigma, seed=seed), t)
        dev = max_abs_deviation(correlation_matrix(x, "spearman"), pop_spearman)
        violations += dev > bound
    assert violations == 0
