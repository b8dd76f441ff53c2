"""Dispatch layer for the hot numeric loops.

Each public function picks the numba or pure-numpy implementation at call
time based on :func:`qunip.backend.active_backend`. All functions are pure:
inputs are never mutated, fresh arrays are returned.
"""

import math

import numpy as np

from . import backend

_BRUTE_CHUNK = 1 << 16  # flat path indices decoded per numpy block


def _nb():
    from . import _numba_kernels

    return _numba_kernels


def flatten_transfers(transfers):
    """Concatenate row-major stage matrices; offsets[k] is the start of stage k."""
    offsets = np.zeros(len(transfers) + 1, np.int64)
    for k, t in enumerate(transfers):
        offsets[k + 1] = offsets[k] + t.size
    if transfers:
        flat = np.concatenate([np.ascontiguousarray(t).ravel() for t in transfers])
    else:
        flat = np.zeros(0, np.complex128)
    return flat.astype(np.complex128, copy=False), offsets


# -- single-qubit gate ------------------------------------------------------


def apply_single(amps: np.ndarray, pbit: int, u: np.ndarray) -> np.ndarray:
    """Mix amplitude pairs differing in bit position `pbit` by the 2x2 matrix u."""
    if backend.active_backend() == "numba":
        dst = np.empty_like(amps)
        _nb().apply_single(amps, dst, pbit, u[0, 0], u[0, 1], u[1, 0], u[1, 1])
        return dst
    step = 1 << pbit
    view = amps.reshape(-1, 2, step)
    a = view[:, 0, :]
    b = view[:, 1, :]
    dst = np.empty_like(view)
    dst[:, 0, :] = u[0, 0] * a + u[0, 1] * b
    dst[:, 1, :] = u[1, 0] * a + u[1, 1] * b
    return dst.reshape(amps.shape)


# -- controlled gate --------------------------------------------------------


def apply_controlled(amps: np.ndarray, cmask: int, pbit: int, u: np.ndarray) -> np.ndarray:
    """Apply u on the target bit only where every control bit in cmask is 1."""
    dst = amps.copy()
    if backend.active_backend() == "numba":
        _nb().apply_controlled(amps, dst, cmask, pbit, u[0, 0], u[0, 1], u[1, 0], u[1, 1])
        return dst
    idx = np.arange(amps.size, dtype=np.int64)
    sel = ((idx & cmask) == cmask) & ((idx >> pbit) & 1 == 0)
    i0 = idx[sel]
    i1 = i0 + (1 << pbit)
    a = amps[i0]
    b = amps[i1]
    dst[i0] = u[0, 0] * a + u[0, 1] * b
    dst[i1] = u[1, 0] * a + u[1, 1] * b
    return dst


# -- parity phase oracle ----------------------------------------------------


def parity_phase_flip(amps: np.ndarray, top_bits: int, mask: int) -> np.ndarray:
    """Negate amplitudes whose top `top_bits`-bit label x has odd popcount(x & mask)."""
    shift = int(round(math.log2(amps.size))) - top_bits
    if backend.active_backend() == "numba":
        dst = np.empty_like(amps)
        _nb().parity_phase_flip(amps, dst, shift, mask)
        return dst
    x = np.arange(1 << top_bits, dtype=np.uint64)
    signs = np.where(np.bitwise_count(x & np.uint64(mask)) & 1, -1.0, 1.0)
    return (amps.reshape(1 << top_bits, -1) * signs[:, None]).reshape(amps.shape)


# -- interference path sums -------------------------------------------------


def path_sum_brute(slits, source, transfers, detector, flat=None, offsets=None) -> complex:
    """Amplitude as an explicit sum over all slit-choice sequences."""
    if backend.active_backend() == "numba":
        if flat is None:
            flat, offsets = flatten_transfers(transfers)
        nslits = np.asarray(slits, np.int64)
        return complex(_nb().path_sum_brute(nslits, source, flat, offsets, detector))
    return _path_sum_brute_numpy(slits, source, transfers, detector)


def _path_sum_brute_numpy(slits, source, transfers, detector) -> complex:
    # Flat path indices are the odometer: decode a block of them per pass,
    # gather legs stage by stage, and accumulate blocks in order.
    b = len(slits)
    strides = np.ones(b, np.int64)
    for k in range(b - 2, -1, -1):
        strides[k] = strides[k + 1] * slits[k + 1]
    total_paths = int(strides[0]) * int(slits[0])
    acc = 0.0 + 0.0j
    for start in range(0, total_paths, _BRUTE_CHUNK):
        f = np.arange(start, min(start + _BRUTE_CHUNK, total_paths), dtype=np.int64)
        prev = (f // strides[0]) % slits[0]
        prod = source[prev]
        for k in range(1, b):
            cur = (f // strides[k]) % slits[k]
            prod = prod * transfers[k - 1][prev, cur]
            prev = cur
        acc += complex((prod * detector[prev]).sum())
    return acc


def imbedded_forward(slits, source, transfers, upto: int, flat=None, offsets=None) -> np.ndarray:
    """Slit-arrival amplitude vector at barrier `upto` via the forward recursion."""
    if backend.active_backend() == "numba":
        if flat is None:
            flat, offsets = flatten_transfers(transfers)
        nslits = np.asarray(slits, np.int64)
        return _nb().imbedded_forward(nslits, source, flat, offsets, upto)
    v = source
    for k in range(upto - 1):
        v = v @ transfers[k]
    return v.copy()
