import numpy as np
import pytest

from hcbm import backend_name, build_correlation, correlation_to_distance
from hcbm.clustering import VARIANT_CODES, _lw_python
from hcbm.model import benchmark_hierarchy

from _reference import random_distance

try:
    from hcbm.clustering import _lw_kernel
except ImportError:
    _lw_kernel = None

needs_kernel = pytest.mark.skipif(_lw_kernel is None, reason="compiled kernel not built")


def test_backend_reports_identity():
    assert backend_name() in ("compiled", "python")


@needs_kernel
@pytest.mark.parametrize("code", sorted(VARIANT_CODES.values()))
def test_backends_agree_on_random_matrices(code, rng):
    for _ in range(25):
        n = int(rng.integers(3, 20))
        d = random_distance(n, rng)
        rc = _lw_kernel.lw_agglomerate(d, code)
        rp = _lw_python.lw_agglomerate(d, code)
        for a, b in zip(rc, rp):
            np.testing.assert_array_equal(a, b)


@needs_kernel
@pytest.mark.parametrize("code", sorted(VARIANT_CODES.values()))
def test_backends_agree_on_tied_block_matrix(code):
    # block-constant distances produce massive ties; the deterministic
    # tie rule must agree across backends
    d = correlation_to_distance(build_correlation(benchmark_hierarchy()))
    rc = _lw_kernel.lw_agglomerate(d, code)
    rp = _lw_python.lw_agglomerate(d, code)
    for a, b in zip(rc, rp):
        np.testing.assert_array_equal(a, b)


@needs_kernel
def test_kernel_rejects_unknown_code():
    d = random_distance(4, np.random.default_rng(0))
    with pytest.raises(ValueError):
        _lw_kernel.lw_agglomerate(d, 7)
    with pytest.raises(ValueError):
        _lw_python.lw_agglomerate(d, 7)
