"""NumPy implementation of the agglomeration kernel.

Semantics are identical to the compiled kernel in ``_lw_kernel.pyx``: the
same update expressions (term-for-term, so results agree bit-for-bit), the
same deterministic tie rule, and the same merge bookkeeping.  Kept in sync
by the backend-consistency tests.
"""

from __future__ import annotations

import numpy as np

# variant codes follow params.VARIANT_CODES
_SINGLE, _COMPLETE, _AVERAGE, _MCQUITTY, _MEDIAN, _CENTROID, _WARD = range(7)


def lw_agglomerate(dist: np.ndarray, code: int):
    """Greedy agglomeration over a dense distance matrix.

    Returns (left, right, heights, sizes) arrays of length N-1.  At every
    step the active pair with minimal distance is merged; among ties the
    pair with the lexicographically smallest (low id, high id) wins, where
    ids are leaf ids 0..N-1 and merge ids N+step.
    """
    n = dist.shape[0]
    d = np.array(dist, dtype=np.float64, copy=True)
    np.fill_diagonal(d, np.inf)
    node_id = np.arange(n, dtype=np.intp)
    size = np.ones(n, dtype=np.intp)
    alive = np.ones(n, dtype=bool)
    left = np.empty(n - 1, dtype=np.intp)
    right = np.empty(n - 1, dtype=np.intp)
    heights = np.empty(n - 1, dtype=np.float64)
    out_size = np.empty(n - 1, dtype=np.intp)

    for step in range(n - 1):
        dmin = d.min()
        ii, jj = np.nonzero(d == dmin)
        upper = ii < jj
        ii, jj = ii[upper], jj[upper]
        if len(ii) > 1:
            lo = np.minimum(node_id[ii], node_id[jj])
            hi = np.maximum(node_id[ii], node_id[jj])
            pick = np.lexsort((hi, lo))[0]
        else:
            pick = 0
        i, j = int(ii[pick]), int(jj[pick])

        ks = alive.copy()
        ks[i] = ks[j] = False
        idx = np.nonzero(ks)[0]
        dik = d[i, idx]
        djk = d[j, idx]
        ni = float(size[i])
        nj = float(size[j])
        dij = dmin
        if code == _SINGLE:
            new = np.minimum(dik, djk)
        elif code == _COMPLETE:
            new = np.maximum(dik, djk)
        elif code == _AVERAGE:
            ai = ni / (ni + nj)
            aj = nj / (ni + nj)
            new = ai * dik + aj * djk
        elif code == _MCQUITTY:
            new = 0.5 * dik + 0.5 * djk
        elif code == _MEDIAN:
            new = 0.5 * dik + 0.5 * djk - 0.25 * dij
        elif code == _CENTROID:
            s = ni + nj
            ai = ni / s
            aj = nj / s
            b = (ni * nj) / (s * s)
            new = ai * dik + aj * djk - b * dij
        elif code == _WARD:
            nk = size[idx].astype(np.float64)
            tot = ni + nj + nk
            new = (ni + nk) / tot * dik + (nj + nk) / tot * djk - nk / tot * dij
        else:
            raise ValueError(f"unknown variant code {code}")

        d[i, idx] = new
        d[idx, i] = new
        d[j, :] = np.inf
        d[:, j] = np.inf
        alive[j] = False
        a, b = int(node_id[i]), int(node_id[j])
        left[step] = min(a, b)
        right[step] = max(a, b)
        heights[step] = dij
        size[i] += size[j]
        out_size[step] = size[i]
        node_id[i] = n + step

    return left, right, heights, out_size
