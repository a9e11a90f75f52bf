# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled agglomeration kernel.

Must stay semantically identical to ``_lw_python.lw_agglomerate``: same
update expressions term-for-term (the build disables FP contraction so both
backends produce bit-identical heights) and the same tie rule.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()

DEF SINGLE = 0
DEF COMPLETE = 1
DEF AVERAGE = 2
DEF MCQUITTY = 3
DEF MEDIAN = 4
DEF CENTROID = 5
DEF WARD = 6


def lw_agglomerate(dist, int code):
    """Greedy agglomeration over a dense distance matrix.

    Returns (left, right, heights, sizes) arrays of length N-1.  Ties on
    the minimal distance are broken toward the lexicographically smallest
    (low id, high id) pair of node ids.
    """
    if code < 0 or code > 6:
        raise ValueError(f"unknown variant code {code}")
    d_arr = np.array(dist, dtype=np.float64, copy=True, order="C")
    cdef Py_ssize_t n = d_arr.shape[0]
    np.fill_diagonal(d_arr, np.inf)

    slots_arr = np.arange(n, dtype=np.intp)
    node_arr = np.arange(n, dtype=np.intp)
    size_arr = np.ones(n, dtype=np.intp)
    left_arr = np.empty(n - 1, dtype=np.intp)
    right_arr = np.empty(n - 1, dtype=np.intp)
    heights_arr = np.empty(n - 1, dtype=np.float64)
    osize_arr = np.empty(n - 1, dtype=np.intp)

    cdef double[:, ::1] d = d_arr
    cdef Py_ssize_t[::1] slots = slots_arr
    cdef Py_ssize_t[::1] node_id = node_arr
    cdef Py_ssize_t[::1] size = size_arr
    cdef Py_ssize_t[::1] left = left_arr
    cdef Py_ssize_t[::1] right = right_arr
    cdef double[::1] heights = heights_arr
    cdef Py_ssize_t[::1] osize = osize_arr

    cdef Py_ssize_t m = n
    cdef Py_ssize_t step, a, b, i, j, k, bi, bj, pa, pb, tmp
    cdef Py_ssize_t lo, hi, blo, bhi
    cdef double dmin, v, dik, djk, dij, ni, nj, nk, tot, ai, aj, bb, s, new

    with nogil:
        for step in range(n - 1):
            dmin = INFINITY
            bi = -1
            bj = -1
            pa = -1
            pb = -1
            blo = 2 * n
            bhi = 2 * n
            for a in range(m):
                i = slots[a]
                for b in range(a + 1, m):
                    j = slots[b]
                    v = d[i, j]
                    if v > dmin:
                        continue
                    if node_id[i] < node_id[j]:
                        lo = node_id[i]
                        hi = node_id[j]
                    else:
                        lo = node_id[j]
                        hi = node_id[i]
                    if v < dmin or lo < blo or (lo == blo and hi < bhi):
                        dmin = v
                        bi = i
                        bj = j
                        pa = a
                        pb = b
                        blo = lo
                        bhi = hi

            ni = <double> size[bi]
            nj = <double> size[bj]
            dij = dmin
            if code == AVERAGE:
                ai = ni / (ni + nj)
                aj = nj / (ni + nj)
            elif code == CENTROID:
                s = ni + nj
                ai = ni / s
                aj = nj / s
                bb = (ni * nj) / (s * s)

            for a in range(m):
                k = slots[a]
                if k == bi or k == bj:
                    continue
                dik = d[bi, k]
                djk = d[bj, k]
                if code == SINGLE:
                    new = djk if djk < dik else dik
                elif code == COMPLETE:
                    new = djk if djk > dik else dik
                elif code == AVERAGE:
                    new = ai * dik + aj * djk
                elif code == MCQUITTY:
                    new = 0.5 * dik + 0.5 * djk
                elif code == MEDIAN:
                    new = 0.5 * dik + 0.5 * djk - 0.25 * dij
                elif code == CENTROID:
                    new = ai * dik + aj * djk - bb * dij
                else:
                    nk = <double> size[k]
                    tot = ni + nj + nk
                    new = (ni + nk) / tot * dik + (nj + nk) / tot * djk - nk / tot * dij
                d[bi, k] = new
                d[k, bi] = new

            # retire slot bj (swap with the last active slot)
            slots[pb] = slots[m - 1]
            m -= 1

            left[step] = blo
            right[step] = bhi
            heights[step] = dij
            size[bi] = size[bi] + size[bj]
            osize[step] = size[bi]
            node_id[bi] = n + step

    return left_arr, right_arr, heights_arr, osize_arr
