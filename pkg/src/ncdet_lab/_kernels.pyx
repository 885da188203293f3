# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels: int64 block arithmetic with optional mod.

API mirrors ncdet_lab.kernels_py; see that module for the contracts.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64

BACKEND = "compiled"


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline void _matmul(const i64* a, const i64* b, i64* out, int size, long long mod) noexcept nogil:
    cdef int i, j, k
    cdef i64 acc
    for i in range(size):
        for j in range(size):
            acc = 0
            for k in range(size):
                acc += a[i * size + k] * b[k * size + j]
            if mod:
                acc %= mod
            out[i * size + j] = acc


cdef inline bint _is_zero(const i64* a, int count) noexcept nogil:
    cdef int i
    for i in range(count):
        if a[i] != 0:
            return False
    return True


cdef void _enum(const i64* entries, const unsigned char* nonzero, const i64* rows,
                int n, int size, int k, unsigned long long used, int parity,
                i64* stack, i64* acc, long long mod, bint signed_sum) noexcept nogil:
    cdef int c, i, par
    cdef int area = size * size
    cdef const i64* block
    cdef i64* dst = stack + (k + 1) * area
    cdef i64* src = stack + k * area
    cdef long long r = rows[k]
    for c in range(n):
        if used & (1ULL << c):
            continue
        if not nonzero[r * n + c]:
            continue
        block = entries + (r * n + c) * area
        if k == 0:
            for i in range(area):
                dst[i] = block[i]
        else:
            _matmul(src, block, dst, size, mod)
            if _is_zero(dst, area):
                continue
        par = parity ^ (__builtin_popcountll(used >> (c + 1)) & 1)
        if k == n - 1:
            if signed_sum and par:
                for i in range(area):
                    acc[i] -= dst[i]
            else:
                for i in range(area):
                    acc[i] += dst[i]
            if mod:
                for i in range(area):
                    acc[i] %= mod
        else:
            _enum(entries, nonzero, rows, n, size, k + 1, used | (1ULL << c), par,
                  stack, acc, mod, signed_sum)


def perm_enum_sum(entries_obj, row_order_obj, long long mod=0, bint signed=True):
    cdef cnp.ndarray[i64, ndim=4, mode="c"] entries = np.ascontiguousarray(
        entries_obj, dtype=np.int64)
    cdef int n = entries.shape[0]
    cdef int size = entries.shape[2]
    cdef cnp.ndarray[i64, ndim=1, mode="c"] rows = np.ascontiguousarray(
        row_order_obj, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=2, mode="c"] nonzero = np.ascontiguousarray(
        entries.reshape(n, n, size * size).any(axis=2).astype(np.uint8))
    cdef cnp.ndarray[i64, ndim=3, mode="c"] stack = np.zeros(
        (n + 1, size, size), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=2, mode="c"] acc = np.zeros((size, size), dtype=np.int64)
    with nogil:
        _enum(&entries[0, 0, 0, 0], &nonzero[0, 0], &rows[0], n, size, 0, 0, 0,
              &stack[0, 0, 0], &acc[0, 0], mod, signed)
    if mod:
        np.mod(acc, mod, out=acc)
    return np.asarray(acc)


def word_products_sum(entries_obj, words_obj, coeffs_obj, long long mod=0):
    cdef cnp.ndarray[i64, ndim=4, mode="c"] entries = np.ascontiguousarray(
        entries_obj, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=3, mode="c"] words = np.ascontiguousarray(
        words_obj, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1, mode="c"] coeffs = np.ascontiguousarray(
        coeffs_obj, dtype=np.int64)
    cdef int n = entries.shape[0]
    cdef int size = entries.shape[2]
    cdef int area = size * size
    cdef int nwords = words.shape[0]
    cdef int length = words.shape[1]
    cdef cnp.ndarray[i64, ndim=2, mode="c"] acc = np.zeros((size, size), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=2, mode="c"] work = np.zeros((2, area), dtype=np.int64)
    cdef i64* cur
    cdef i64* nxt
    cdef i64* tmp
    cdef const i64* base = &entries[0, 0, 0, 0]
    cdef const i64* block
    cdef i64* accp = &acc[0, 0]
    cdef i64 coeff
    cdef int t, k, i
    cdef bint dead
    with nogil:
        for t in range(nwords):
            cur = &work[0, 0]
            nxt = &work[1, 0]
            dead = False
            for k in range(length):
                block = base + (words[t, k, 0] * n + words[t, k, 1]) * area
                if k == 0:
                    for i in range(area):
                        cur[i] = block[i]
                else:
                    _matmul(cur, block, nxt, size, mod)
                    tmp = cur
                    cur = nxt
                    nxt = tmp
                if _is_zero(cur, area):
                    dead = True
                    break
            if dead or length == 0:
                continue
            coeff = coeffs[t]
            for i in range(area):
                accp[i] += coeff * cur[i]
            if mod:
                for i in range(area):
                    accp[i] %= mod
    if mod:
        np.mod(acc, mod, out=acc)
    return np.asarray(acc)


def word_products_readout(entries_obj, words_obj, long long mod=0):
    cdef cnp.ndarray[i64, ndim=4, mode="c"] entries = np.ascontiguousarray(
        entries_obj, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=3, mode="c"] words = np.ascontiguousarray(
        words_obj, dtype=np.int64)
    cdef int n = entries.shape[0]
    cdef int size = entries.shape[2]
    cdef int area = size * size
    cdef int nwords = words.shape[0]
    cdef int length = words.shape[1]
    cdef cnp.ndarray[i64, ndim=1, mode="c"] out = np.zeros(nwords, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=2, mode="c"] work = np.zeros((2, size), dtype=np.int64)
    cdef const i64* base = &entries[0, 0, 0, 0]
    cdef const i64* block
    cdef i64* vec
    cdef i64* nxt
    cdef i64* tmp
    cdef i64 acc
    cdef int t, k, i, j
    with nogil:
        for t in range(nwords):
            vec = &work[0, 0]
            nxt = &work[1, 0]
            for i in range(size):
                vec[i] = 0
            vec[0] = 1
            for k in range(length):
                block = base + (words[t, k, 0] * n + words[t, k, 1]) * area
                for j in range(size):
                    acc = 0
                    for i in range(size):
                        acc += vec[i] * block[i * size + j]
                    if mod:
                        acc %= mod
                    nxt[j] = acc
                tmp = vec
                vec = nxt
                nxt = tmp
                if _is_zero(vec, size):
                    break
            out[t] = vec[size - 1]
    if mod:
        np.mod(out, mod, out=out)
    return np.asarray(out)
