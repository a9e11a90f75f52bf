import numpy as np
import pytest

from hcbm import benchmark_hierarchy, build_correlation, correlation_to_distance


@pytest.fixture(scope="session")
def bench265():
    return benchmark_hierarchy()


@pytest.fixture(scope="session")
def bench_matrix(bench265):
    return build_correlation(bench265)


@pytest.fixture(scope="session")
def bench_distance(bench_matrix):
    return correlation_to_distance(bench_matrix)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
