"""Algorithm suite: pattern-database preparation, the composite database +
single-query lookup pipeline, Bernstein-Vazirani, Deutsch-Jozsa, and Grover.

Every run returns an AuditedRun: the sequence of intermediate states (one per
logical stage, not per elementary gate) with a FactorizationReport for each,
plus the two cost meters the analysis cares about - database preparation
steps charged (one per loaded pattern) and oracle invocations.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import kernels
from .boolean import Classification, PatternSet, TruthTable, classify, full_pattern_set
from .entanglement import factor_product
from .errors import DomainError, PostSelectionError
from .statevec import (
    HADAMARD,
    PureState,
    apply_single,
    check_capacity,
    measure_distribution,
    conditional_state,
    state_to_dict,
)


@dataclass(frozen=True)
class RunTrace:
    """Labeled intermediate states plus the cost meters charged by the run."""

    steps: tuple  # of (label, PureState)
    prep_step_count: int
    oracle_calls: int


@dataclass(frozen=True)
class AuditedRun:
    trace: RunTrace
    audits: tuple  # FactorizationReport per step

    def as_dict(self) -> dict:
        return {
            "steps": [
                {"label": label, "state": state_to_dict(state), "audit": audit.as_dict()}
                for (label, state), audit in zip(self.trace.steps, self.audits)
            ],
            "prep_steps": self.trace.prep_step_count,
            "oracle_calls": self.trace.oracle_calls,
        }


def _audited(steps, prep_steps: int, oracle_calls: int) -> AuditedRun:
    audits = tuple(factor_product(state) for _, state in steps)
    return AuditedRun(RunTrace(tuple(steps), prep_steps, oracle_calls), audits)


def uniform_superposition(d: int) -> PureState:
    """All 2^d amplitudes equal to 2^{-d/2}."""
    check_capacity(d)
    amps = np.full(1 << d, 2.0 ** (-d / 2.0), dtype=np.complex128)
    return PureState(amps, check=False)


def hadamard_layer(s: PureState, qubits) -> PureState:
    for q in qubits:
        s = apply_single(s, q, HADAMARD)
    return s


def prepare_database(p: PatternSet) -> tuple[PureState, int]:
    """Load a pattern set into the (d+2)-qubit database state.

    The result is (1/sqrt(2P)) sum over patterns of |x>(|0>-|1>)|b>, with
    qubit d+1 the ancilla and qubit d+2 the function-value qubit. One
    preparation step is charged per pattern, so a full table costs 2^d steps.
    """
    check_capacity(p.d + 2)
    amps = np.zeros(1 << (p.d + 2), dtype=np.complex128)
    coeff = 1.0 / math.sqrt(2 * len(p.pairs))
    for x, b in p.pairs:
        amps[(x << 2) | b] = coeff
        amps[(x << 2) | 2 | b] = -coeff
    return PureState(amps, check=False), len(p.pairs)


def bv_oracle(s: PureState, a: int, d: int) -> PureState:
    """Negate amplitudes whose first-d-qubit label x has x.a odd.

    Equivalent to the CNOT cascade (controlled by the qubits where a_i = 1)
    targeting a (|0>-|1>)/sqrt(2) ancilla.
    """
    if s.num_qubits < d:
        raise DomainError(f"state has {s.num_qubits} qubits, oracle needs at least {d}")
    if not 0 <= a < 1 << d:
        raise DomainError(f"hidden string {a} outside [0, 2^{d})")
    if a == 0:
        return s
    return PureState(kernels.parity_phase_flip(s.amps, d, a), check=False)


def bernstein_vazirani(d: int, a: int) -> tuple[int, AuditedRun]:
    """Recover the hidden string with a single oracle call."""
    if not 0 <= a < 1 << d:
        raise DomainError(f"hidden string {a} outside [0, 2^{d})")
    s0 = uniform_superposition(d)
    s1 = bv_oracle(s0, a, d)
    s2 = hadamard_layer(s1, range(1, d + 1))
    steps = [
        ("uniform superposition", s0),
        ("sign oracle (CNOT cascade on a_i=1 qubits)", s1),
        ("hadamard layer", s2),
    ]
    recovered = int(np.argmax(np.abs(s2.amps)))
    return recovered, _audited(steps, prep_steps=0, oracle_calls=1)


class DatabaseQueryResult(NamedTuple):
    final: PureState
    first_register: dict
    conditional_b: Optional[dict]
    trace: AuditedRun
    conditioning_failed: bool


def database_query(p: PatternSet, a: int) -> DatabaseQueryResult:
    """Database load, one sign-oracle query, and the Hadamard finale.

    Returns the exact final state, the marginal distribution over the first
    d qubits, and the function-value qubit distribution conditioned on the
    first register reading `a` (None, with the flag set, when that outcome
    has no probability mass).
    """
    d = p.d
    if not 0 <= a < 1 << d:
        raise DomainError(f"stimulus {a} outside [0, 2^{d})")
    db, prep_steps = prepare_database(p)
    after_oracle = bv_oracle(db, a, d)
    final = hadamard_layer(after_oracle, range(1, d + 1))
    steps = [
        ("pattern database", db),
        ("sign oracle (CNOT cascade on a_i=1 qubits)", after_oracle),
        ("hadamard layer", final),
    ]
    trace = _audited(steps, prep_steps=prep_steps, oracle_calls=1)
    first_register = measure_distribution(final, range(1, d + 1))
    try:
        conditioned = conditional_state(final, range(1, d + 1), format(a, f"0{d}b"))
        # remaining register is (ancilla, B); B is qubit 2 of the reduced state
        conditional_b = measure_distribution(conditioned, [2])
        failed = False
    except PostSelectionError:
        conditional_b = None
        failed = True
    return DatabaseQueryResult(final, first_register, conditional_b, trace, failed)


def figure1_pipeline(t: TruthTable, a: int) -> DatabaseQueryResult:
    """The full-table pipeline: 2^d preparation steps, then one query."""
    return database_query(full_pattern_set(t), a)


def deutsch_jozsa(t: TruthTable) -> tuple[Classification, AuditedRun]:
    """Distinguish constant from balanced tables with one phase-oracle query.

    Uses the phase-oracle form, so the ancilla factors out and the audit
    examines the d-qubit argument register itself.
    """
    kind = classify(t)
    if kind is Classification.NEITHER:
        raise DomainError("table is neither constant nor balanced; promise violated")
    d = t.d
    s0 = uniform_superposition(d)
    s1 = PureState(np.where(t.values == 1, -s0.amps, s0.amps), check=False)
    s2 = hadamard_layer(s1, range(1, d + 1))
    steps = [
        ("uniform superposition", s0),
        ("phase oracle (-1)^B(x)", s1),
        ("hadamard layer", s2),
    ]
    p_zero = abs(s2.amps[0]) ** 2
    verdict = Classification.CONSTANT if abs(p_zero - 1.0) <= 1e-9 else Classification.BALANCED
    return verdict, _audited(steps, prep_steps=0, oracle_calls=1)


def grover(d: int, marked: int, iterations: int) -> tuple[float, AuditedRun]:
    """Standard Grover search: sign flip on the marked label, then inversion
    about the mean, `iterations` times; every intermediate state is audited.
    """
    if not 0 <= marked < 1 << d:
        raise DomainError(f"marked label {marked} outside [0, 2^{d})")
    if iterations < 0:
        raise DomainError(f"iterations must be >= 0, got {iterations}")
    s = uniform_superposition(d)
    steps = [("uniform superposition", s)]
    for k in range(1, iterations + 1):
        flipped = s.amps.copy()
        flipped[marked] = -flipped[marked]
        s = PureState(flipped, check=False)
        steps.append((f"oracle {k}", s))
        s = PureState(2.0 * s.amps.mean() - s.amps, check=False)
        steps.append((f"diffusion {k}", s))
    success = float(abs(s.amps[marked]) ** 2)
    return success, _audited(steps, prep_steps=0, oracle_calls=iterations)


def grover_success_probability(d: int, iterations: int) -> float:
    """Closed form sin^2((2k+1) arcsin(2^{-d/2})) for a single marked item."""
    theta = math.asin(2.0 ** (-d / 2.0))
    return math.sin((2 * iterations + 1) * theta) ** 2


def optimal_grover_iterations(d: int) -> int:
    """floor((pi/4) sqrt(2^d))."""
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    return int(math.floor(math.pi / 4.0 * math.sqrt(2.0**d)))
