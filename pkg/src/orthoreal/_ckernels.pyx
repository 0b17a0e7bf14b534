# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see _kernels_py for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()


def scan_quadratic(int64_t p, int d, forms, targets, int64_t limit):
    cdef int64_t[:, :, ::1] M = np.ascontiguousarray(forms, dtype=np.int64)
    cdef int64_t[::1] T = np.ascontiguousarray(targets, dtype=np.int64)
    cdef int K = M.shape[0]
    cdef int64_t[::1] c = np.zeros(d, dtype=np.int64)
    cdef int64_t[::1] tmp = np.zeros(d, dtype=np.int64)
    out = []
    cdef int64_t nfound = 0
    cdef int64_t total = 1
    cdef int i, j, k, pos
    cdef int64_t s, acc, it
    cdef bint ok
    for i in range(d):
        total *= p
    for it in range(total):
        ok = True
        for k in range(K):
            acc = 0
            for i in range(d):
                if c[i] == 0:
                    continue
                s = 0
                for j in range(d):
                    s += M[k, i, j] * c[j]
                acc += (s % p) * c[i]
            if acc % p != T[k]:
                ok = False
                break
        if ok:
            out.append(np.asarray(c).copy())
            nfound += 1
            if nfound >= limit:
                break
        # lexicographic increment, last coordinate fastest
        pos = d - 1
        while pos >= 0:
            c[pos] += 1
            if c[pos] < p:
                break
            c[pos] = 0
            pos -= 1
    if not out:
        return np.zeros((0, d), dtype=np.int64)
    return np.array(out, dtype=np.int64)


def filter_bilinear(int64_t p, left, right, targets):
    cdef int64_t[:, ::1] L = np.ascontiguousarray(left, dtype=np.int64)
    cdef int64_t[:, ::1] R = np.ascontiguousarray(right, dtype=np.int64)
    cdef int64_t[::1] T = np.ascontiguousarray(targets, dtype=np.int64)
    cdef Py_ssize_t m = R.shape[0], K = L.shape[0], d = R.shape[1]
    res = np.ones(m, dtype=bool)
    cdef cnp.npy_bool[::1] ok = res
    cdef Py_ssize_t r, k, i
    cdef int64_t s
    for r in range(m):
        for k in range(K):
            s = 0
            for i in range(d):
                s += L[k, i] * R[r, i]
            if s % p != T[k]:
                ok[r] = False
                break
    return res


def batch_rank(int64_t p, mats):
    cdef int64_t[:, :, ::1] A = np.array(mats, dtype=np.int64, copy=True) % p
    cdef Py_ssize_t N = A.shape[0], rows = A.shape[1], cols = A.shape[2]
    res = np.zeros(N, dtype=np.int64)
    cdef int64_t[::1] out = res
    cdef int64_t[::1] inv = np.zeros(p, dtype=np.int64)
    cdef Py_ssize_t b, r, c, i, j, piv
    cdef int64_t x, f
    for i in range(1, p):
        inv[i] = pow(i, -1, p)
    for b in range(N):
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if A[b, i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(cols):
                    x = A[b, piv, j]
                    A[b, piv, j] = A[b, r, j]
                    A[b, r, j] = x
            f = inv[A[b, r, c]]
            for j in range(cols):
                A[b, r, j] = (A[b, r, j] * f) % p
            for i in range(r + 1, rows):
                f = A[b, i, c]
                if f:
                    for j in range(c, cols):
                        A[b, i, j] = (A[b, i, j] + (p - f) * A[b, r, j]) % p
            r += 1
        out[b] = r
    return res
