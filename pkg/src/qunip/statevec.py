"""Dense pure-state simulation of d qubits.

Basis-label convention: a d-qubit label x is read as the bitstring
(x_1 x_2 ... x_d) with qubit 1 the most-significant bit, so register pictures
read left to right. Qubit indices are 1-based throughout.

States are immutable value objects; every operation returns a fresh state.
Amplitude arrays are complex128 and marked read-only.
"""

import json
import math
import os

import numpy as np

from . import kernels
from .errors import CapacityError, DomainError, PostSelectionError, ValidationError

MAX_QUBITS_ENV = "QUNIP_MAX_QUBITS"
DEBUG_CHECKS_ENV = "QUNIP_DEBUG_CHECKS"

DEFAULT_MAX_QUBITS = 24
NORM_TOL = 1e-9

SQRT1_2 = 1.0 / math.sqrt(2.0)

HADAMARD = np.array([[SQRT1_2, SQRT1_2], [SQRT1_2, -SQRT1_2]], dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
IDENTITY_2 = np.eye(2, dtype=np.complex128)
for _g in (HADAMARD, PAULI_X, PAULI_Z, IDENTITY_2):
    _g.setflags(write=False)


def max_qubits() -> int:
    """Capacity cap; default 24, overridable via the QUNIP_MAX_QUBITS env var."""
    raw = os.environ.get(MAX_QUBITS_ENV)
    if raw is None:
        return DEFAULT_MAX_QUBITS
    try:
        cap = int(raw)
    except ValueError as exc:
        raise CapacityError(f"{MAX_QUBITS_ENV} must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise CapacityError(f"{MAX_QUBITS_ENV} must be >= 1, got {cap}")
    return cap


def check_capacity(d: int) -> None:
    cap = max_qubits()
    if not 1 <= d <= cap:
        raise CapacityError(f"qubit count {d} outside capacity [1, {cap}]")


def _debug_checks() -> bool:
    return os.environ.get(DEBUG_CHECKS_ENV, "") not in ("", "0")


class PureState:
    """Unit-norm amplitude vector over 2^d basis labels."""

    __slots__ = ("num_qubits", "amps")

    def __init__(self, amps, *, check: bool = True):
        if check:
            # public path: defensive copy, full validation
            arr = np.array(amps, dtype=np.complex128, copy=True, order="C")
        else:
            # internal path: adopt freshly-allocated gate/kernel output
            arr = np.ascontiguousarray(amps, dtype=np.complex128)
        if arr.ndim != 1 or arr.size < 2 or arr.size & (arr.size - 1):
            raise ValidationError(f"amplitude vector length {arr.shape} is not a power of two >= 2")
        if check or _debug_checks():
            if not np.all(np.isfinite(arr.view(np.float64))):
                raise ValidationError("amplitudes contain NaN or Inf")
            norm2 = float(np.vdot(arr, arr).real)
            if abs(norm2 - 1.0) > NORM_TOL:
                raise ValidationError(f"state norm^2 = {norm2!r} deviates from 1 beyond {NORM_TOL}")
        arr.setflags(write=False)
        object.__setattr__(self, "num_qubits", arr.size.bit_length() - 1)
        object.__setattr__(self, "amps", arr)

    def __setattr__(self, name, value):
        raise AttributeError("PureState is immutable")

    def __repr__(self):
        return f"PureState(d={self.num_qubits})"

    def bit(self, label: int, q: int) -> int:
        """Value of qubit q in basis label `label`."""
        return (label >> (self.num_qubits - q)) & 1


def _bitpos(d: int, q: int) -> int:
    # qubit 1 is the most-significant bit of the label
    return d - q


def _check_qubit(d: int, q: int) -> None:
    if not 1 <= q <= d:
        raise DomainError(f"qubit index {q} outside 1..{d}")


def _as_gate(u) -> np.ndarray:
    mat = np.ascontiguousarray(u, dtype=np.complex128)
    if mat.shape != (2, 2):
        raise ValidationError(f"gate must be 2x2, got shape {mat.shape}")
    if not (np.all(np.isfinite(mat.real)) and np.all(np.isfinite(mat.imag))):
        raise ValidationError("gate contains NaN or Inf")
    dev = np.abs(mat.conj().T @ mat - np.eye(2)).max()
    if dev > 1e-12:
        raise ValidationError(f"gate is not unitary (max |U†U - I| = {dev:.3e})")
    return mat


def basis_state(d: int, x: int) -> PureState:
    """|x> on d qubits."""
    check_capacity(d)
    if not 0 <= x < (1 << d):
        raise DomainError(f"basis label {x} outside [0, 2^{d})")
    amps = np.zeros(1 << d, dtype=np.complex128)
    amps[x] = 1.0
    return PureState(amps, check=False)


def tensor(a: PureState, b: PureState) -> PureState:
    """Tensor product; result label x_a * 2^{d_b} + x_b carries a_{x_a} * b_{x_b}."""
    check_capacity(a.num_qubits + b.num_qubits)
    return PureState(np.kron(a.amps, b.amps), check=False)


def apply_single(s: PureState, q: int, u) -> PureState:
    """Apply a unitary 2x2 gate on qubit q."""
    _check_qubit(s.num_qubits, q)
    mat = _as_gate(u)
    out = kernels.apply_single(s.amps, _bitpos(s.num_qubits, q), mat)
    return PureState(out, check=False)


def apply_controlled(s: PureState, controls, target: int, u) -> PureState:
    """Apply u on `target` in amplitudes whose control qubits are all 1."""
    d = s.num_qubits
    controls = tuple(controls)
    for c in controls:
        _check_qubit(d, c)
    _check_qubit(d, target)
    if len(set(controls)) != len(controls):
        raise DomainError(f"duplicate control qubits in {controls}")
    if target in controls:
        raise DomainError(f"target {target} overlaps controls {controls}")
    mat = _as_gate(u)
    if not controls:
        return apply_single(s, target, mat)
    cmask = 0
    for c in controls:
        cmask |= 1 << _bitpos(d, c)
    out = kernels.apply_controlled(s.amps, cmask, _bitpos(d, target), mat)
    return PureState(out, check=False)


def phase_flip(s: PureState, predicate) -> PureState:
    """Negate a_x where predicate(x) is true."""
    flipped = np.fromiter(
        (bool(predicate(x)) for x in range(s.amps.size)), dtype=bool, count=s.amps.size
    )
    out = np.where(flipped, -s.amps, s.amps)
    return PureState(out, check=False)


def inner(a: PureState, b: PureState) -> complex:
    """<a|b> = sum conj(a_x) b_x."""
    if a.num_qubits != b.num_qubits:
        raise DomainError(f"qubit counts differ: {a.num_qubits} vs {b.num_qubits}")
    return complex(np.vdot(a.amps, b.amps))


def fidelity(a: PureState, b: PureState) -> float:
    """|<a|b>|^2; the global-phase-free comparison primitive."""
    return abs(inner(a, b)) ** 2


def _check_subset(d: int, qubits) -> tuple:
    qubits = tuple(qubits)
    if not qubits:
        raise DomainError("qubit subset must be non-empty")
    for q in qubits:
        _check_qubit(d, q)
    if len(set(qubits)) != len(qubits):
        raise DomainError(f"duplicate qubits in subset {qubits}")
    return qubits


PROB_FLOOR = 1e-15  # outcomes below this are dropped from distributions


def measure_distribution(s: PureState, qubits) -> dict:
    """Exact marginal outcome probabilities for an ordered qubit subset.

    Keys are bitstrings in the order the qubits were requested; outcomes with
    probability below PROB_FLOOR are omitted.
    """
    d = s.num_qubits
    qubits = _check_subset(d, qubits)
    probs = (s.amps.real**2 + s.amps.imag**2).reshape([2] * d)
    keep_axes = [q - 1 for q in qubits]
    other_axes = [ax for ax in range(d) if ax not in keep_axes]
    marg = probs.transpose(keep_axes + other_axes).reshape(1 << len(qubits), -1).sum(axis=1)
    k = len(qubits)
    return {
        format(i, f"0{k}b"): float(p) for i, p in enumerate(marg) if p > PROB_FLOOR
    }


def conditional_state(s: PureState, qubits, outcome: str) -> PureState:
    """Renormalized state of the remaining qubits after post-selecting `outcome`."""
    d = s.num_qubits
    qubits = _check_subset(d, qubits)
    if len(qubits) >= d:
        raise DomainError("cannot condition on every qubit")
    if len(outcome) != len(qubits) or any(ch not in "01" for ch in outcome):
        raise DomainError(f"outcome {outcome!r} is not a {len(qubits)}-bit string")
    t = s.amps.reshape([2] * d)
    index = [slice(None)] * d
    for q, ch in zip(qubits, outcome):
        index[q - 1] = int(ch)
    sub = np.ascontiguousarray(t[tuple(index)]).ravel()
    prob = float(np.vdot(sub, sub).real)
    if prob <= 1e-12:
        raise PostSelectionError(
            f"outcome {outcome!r} on qubits {qubits} has probability {prob:.3e}"
        )
    return PureState(sub / math.sqrt(prob), check=False)


def state_to_dict(s: PureState) -> dict:
    return {"d": s.num_qubits, "amps": [[float(a.real), float(a.imag)] for a in s.amps]}


def state_from_dict(doc: dict) -> PureState:
    d = int(doc["d"])
    amps = np.array([complex(re, im) for re, im in doc["amps"]], dtype=np.complex128)
    if amps.size != 1 << d:
        raise ValidationError(f"state dump: {amps.size} amplitudes for d={d}")
    return PureState(amps)


def save_state(s: PureState, path) -> None:
    with open(path, "w") as fh:
        json.dump(state_to_dict(s), fh)


def load_state(path) -> PureState:
    with open(path) as fh:
        return state_from_dict(json.load(fh))
