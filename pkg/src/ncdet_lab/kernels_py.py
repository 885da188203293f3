"""Pure-Python enumeration kernels (numpy int64 arithmetic).

Same API as the compiled module ncdet_lab._kernels; used when the extension
is unavailable or NCDET_PURE=1.  All functions take a 4-d int64 array
entries[i, j] = the S x S block at grid position (i, j) (0-based), already
reduced mod `mod` when mod > 0.  Callers are responsible for ensuring that
intermediate values fit in int64 (mod < 2**21, or an explicit bound check
when mod == 0).
"""

from __future__ import annotations

import numpy as np

BACKEND = "pure"


def perm_enum_sum(entries, row_order, mod: int = 0, signed: bool = True):
    """Sum over bijections k -> column of +-prod_k entries[row_order[k], col_k].

    The product multiplies blocks in position order k = 0..n-1; the sign is
    the parity of the chosen column sequence.  Zero blocks and zero partial
    products are pruned.
    """
    entries = np.ascontiguousarray(entries, dtype=np.int64)
    n = entries.shape[0]
    size = entries.shape[2]
    rows = [int(r) for r in row_order]
    nonzero = entries.reshape(n, n, size * size).any(axis=2)
    acc = np.zeros((size, size), dtype=np.int64)

    def rec(k: int, used: int, parity: int, partial):
        nonlocal acc
        r = rows[k]
        for c in range(n):
            bit = 1 << c
            if used & bit or not nonzero[r, c]:
                continue
            block = entries[r, c]
            nxt = block if partial is None else partial @ block
            if mod:
                nxt = nxt % mod
            if not nxt.any():
                continue
            par = parity ^ ((used >> (c + 1)).bit_count() & 1)
            if k == n - 1:
                if signed and par:
                    acc = acc - nxt
                else:
                    acc = acc + nxt
                if mod:
                    acc %= mod
            else:
                rec(k + 1, used | bit, par, nxt)

    rec(0, 0, 0, None)
    if mod:
        acc %= mod
    return acc


def word_products_sum(entries, words, coeffs, mod: int = 0):
    """Sum of coeffs[t] * prod_k entries[words[t,k,0], words[t,k,1]]."""
    entries = np.ascontiguousarray(entries, dtype=np.int64)
    words = np.asarray(words, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=np.int64)
    size = entries.shape[2]
    acc = np.zeros((size, size), dtype=np.int64)
    for t in range(words.shape[0]):
        prod = None
        for k in range(words.shape[1]):
            block = entries[words[t, k, 0], words[t, k, 1]]
            prod = block if prod is None else prod @ block
            if mod:
                prod = prod % mod
            if not prod.any():
                prod = None
                break
        if prod is None:
            continue
        acc = acc + int(coeffs[t]) * prod
        if mod:
            acc %= mod
    if mod:
        acc %= mod
    return acc


def word_products_readout(entries, words, mod: int = 0):
    """Per-word (source, sink) entry of the block product: out[t] = P_t[0, S-1]."""
    entries = np.ascontiguousarray(entries, dtype=np.int64)
    words = np.asarray(words, dtype=np.int64)
    size = entries.shape[2]
    out = np.zeros(words.shape[0], dtype=np.int64)
    start = np.zeros(size, dtype=np.int64)
    start[0] = 1
    for t in range(words.shape[0]):
        vec = start
        for k in range(words.shape[1]):
            vec = vec @ entries[words[t, k, 0], words[t, k, 1]]
            if mod:
                vec = vec % mod
            if not vec.any():
                break
        out[t] = vec[size - 1]
    if mod:
        out %= mod
    return out
