# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Keep the API in sync with ``_fallback.py``."""
import numpy as np

from libc.math cimport INFINITY


cdef inline double _gap(const double[:] a, const double[:] b) noexcept nogil:
    # two-pointer sweep over sorted rows; duplicates are harmless
    cdef Py_ssize_t i = 0, j = 0, p = a.shape[0], q = b.shape[0]
    cdef double best = INFINITY, d
    while i < p and j < q:
        d = a[i] - b[j]
        if d < 0:
            if -d < best:
                best = -d
            i += 1
        else:
            if d < best:
                best = d
            if d == 0:
                return 0.0
            j += 1
    return best


def min_gap_matrix(const double[:, :] P, const double[:, :] R):
    """Matrix of minimum absolute gaps between sorted rows of P and R."""
    cdef Py_ssize_t n = P.shape[0], k = R.shape[0], i, j
    out = np.empty((n, k), dtype=np.float64)
    cdef double[:, :] o = out
    with nogil:
        for i in range(n):
            for j in range(k):
                o[i, j] = _gap(P[i], R[j])
    return out


def max_gap_pair(const double[:, :] P):
    """Return (best, i, j) maximising the gap over i < j, first in row order."""
    cdef Py_ssize_t n = P.shape[0], i, j, bi = 0, bj = 1
    cdef double best = -1.0, d
    if n < 2:
        return 0.0, 0, 0
    with nogil:
        for i in range(n - 1):
            for j in range(i + 1, n):
                d = _gap(P[i], P[j])
                if d > best:
                    best = d
                    bi = i
                    bj = j
    return best, bi, bj


def max_min_codebook(const double[:, :] W, int size, long long budget):
    """Branch-and-bound search for the codebook maximising the minimum entry of W.

    Returns (best, witness indices, evaluations, completed).
    """
    cdef Py_ssize_t C = W.shape[0]
    cdef Py_ssize_t level, idx, q, n, c, d
    cdef long long evals = 0
    cdef double best = -1.0, m, md, w, ub = -1.0
    cdef bint completed = True

    cand_np = np.zeros((size, C), dtype=np.intp)
    mind_np = np.zeros((size, C), dtype=np.float64)
    ncand_np = np.zeros(size, dtype=np.intp)
    pos_np = np.zeros(size, dtype=np.intp)
    curmin_np = np.zeros(size, dtype=np.float64)
    chosen_np = np.zeros(size, dtype=np.intp)
    witness_np = np.arange(size, dtype=np.intp)
    cdef Py_ssize_t[:, :] cand = cand_np
    cdef double[:, :] mind = mind_np
    cdef Py_ssize_t[:] ncand = ncand_np
    cdef Py_ssize_t[:] pos = pos_np
    cdef double[:] curmin = curmin_np
    cdef Py_ssize_t[:] chosen = chosen_np
    cdef Py_ssize_t[:] witness = witness_np

    if size < 2 or C < size:
        return -1.0, [], 0, True

    with nogil:
        for c in range(C):
            for d in range(c + 1, C):
                if W[c, d] > ub:
                    ub = W[c, d]
        for c in range(C):
            cand[0, c] = c
            mind[0, c] = INFINITY
        ncand[0] = C
        pos[0] = 0
        curmin[0] = INFINITY
        level = 0
        while level >= 0:
            if best >= ub:
                break
            idx = pos[level]
            if idx >= ncand[level] or ncand[level] - idx < size - level:
                level -= 1
                if level >= 0:
                    pos[level] += 1
                continue
            c = cand[level, idx]
            m = curmin[level]
            if mind[level, idx] < m:
                m = mind[level, idx]
            if m <= best:
                pos[level] += 1
                continue
            chosen[level] = c
            if level == size - 1:
                best = m
                for q in range(size):
                    witness[q] = chosen[q]
                pos[level] += 1
                continue
            if evals + (ncand[level] - idx) > budget:
                completed = False
                break
            n = 0
            for q in range(idx + 1, ncand[level]):
                d = cand[level, q]
                w = W[c, d]
                evals += 1
                md = mind[level, q]
                if w < md:
                    md = w
                if md > best:
                    cand[level + 1, n] = d
                    mind[level + 1, n] = md
                    n += 1
            ncand[level + 1] = n
            curmin[level + 1] = m
            pos[level + 1] = 0
            level += 1

    return best, [int(v) for v in witness_np], evals, bool(completed)
