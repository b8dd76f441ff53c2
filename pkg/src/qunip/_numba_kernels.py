"""Numba-jitted hot loops.

Imported lazily by :mod:`qunip.kernels` only when the numba backend is
active. All kernels are serial (no prange): accumulation order is part of the
determinism contract, and disjoint-pair gate updates gain little from threads
at desk scale. No fastmath, so results track the numpy backend closely.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def apply_single(src, dst, pbit, u00, u01, u10, u11):
    step = 1 << pbit
    block = step << 1
    for base in range(0, src.size, block):
        for i in range(base, base + step):
            a = src[i]
            b = src[i + step]
            dst[i] = u00 * a + u01 * b
            dst[i + step] = u10 * a + u11 * b


@njit(cache=True)
def apply_controlled(src, dst, cmask, pbit, u00, u01, u10, u11):
    # dst arrives as a copy of src; only control-satisfying pairs are rewritten.
    step = 1 << pbit
    for i in range(src.size):
        if (i & cmask) == cmask and (i & step) == 0:
            a = src[i]
            b = src[i + step]
            dst[i] = u00 * a + u01 * b
            dst[i + step] = u10 * a + u11 * b


@njit(cache=True)
def parity_phase_flip(src, dst, shift, mask):
    # Negate amplitudes whose top-register label x = i >> shift has odd
    # popcount(x & mask). Bit-fold parity works for labels below 2^32.
    for i in range(src.size):
        v = (i >> shift) & mask
        v ^= v >> 16
        v ^= v >> 8
        v ^= v >> 4
        v ^= v >> 2
        v ^= v >> 1
        if v & 1:
            dst[i] = -src[i]
        else:
            dst[i] = src[i]


@njit(cache=True)
def path_sum_brute(nslits, source, legs_flat, offsets, detector):
    """Sum of per-path leg products over every slit-choice sequence.

    Iterative odometer over the slit indices; prefix products are reused so
    the amortized cost per path is O(1). Paths are visited in lexicographic
    order and accumulated in that order.
    """
    b = nslits.size
    idx = np.zeros(b, np.int64)
    prefix = np.empty(b, np.complex128)
    prefix[0] = source[0]
    for k in range(1, b):
        prefix[k] = prefix[k - 1] * legs_flat[offsets[k - 1] + idx[k - 1] * nslits[k] + idx[k]]
    total = 0.0 + 0.0j
    while True:
        total += prefix[b - 1] * detector[idx[b - 1]]
        k = b - 1
        while k >= 0 and idx[k] == nslits[k] - 1:
            idx[k] = 0
            k -= 1
        if k < 0:
            return total
        idx[k] += 1
        if k == 0:
            prefix[0] = source[idx[0]]
        else:
            prefix[k] = prefix[k - 1] * legs_flat[offsets[k - 1] + idx[k - 1] * nslits[k] + idx[k]]
        for j in range(k + 1, b):
            prefix[j] = prefix[j - 1] * legs_flat[offsets[j - 1] + idx[j - 1] * nslits[j] + idx[j]]


@njit(cache=True)
def imbedded_forward(nslits, source, legs_flat, offsets, upto):
    """Forward recursion of slit-arrival amplitudes through barrier `upto` (1-based)."""
    v = source.copy()
    for k in range(upto - 1):
        n_from = nslits[k]
        n_to = nslits[k + 1]
        w = np.zeros(n_to, np.complex128)
        base = offsets[k]
        for i in range(n_from):
            vi = v[i]
            row = base + i * n_to
            for j in range(n_to):
                w[j] += vi * legs_flat[row + j]
        v = w
    return v
