import itertools
import math

import numpy as np
import pytest

from qunip import (
    Classification,
    DomainError,
    PatternSet,
    PureState,
    TruthTable,
    bernstein_vazirani,
    bv_oracle,
    database_query,
    deutsch_jozsa,
    fidelity,
    figure1_pipeline,
    grover,
    grover_success_probability,
    linear_table,
    measure_distribution,
    optimal_grover_iterations,
    prepare_database,
    schmidt_rank,
    tensor,
    two_qubit_tangle,
    uniform_superposition,
)
from qunip.boolean import full_pattern_set
from qunip.statevec import basis_state, conditional_state

S2 = 1.0 / math.sqrt(2.0)


def parity(x, a):
    return (x & a).bit_count() & 1


def figure1_oracle_amplitudes(table: TruthTable, a: int) -> np.ndarray:
    """Closed-form final amplitudes of the full-table pipeline.

    amplitude(y, anc, b) = (+-1/sqrt 2) (1/2^d) sum_{x: B(x)=b} (-1)^{x.(a XOR y)},
    the sign set by the ancilla bit.
    """
    d = table.d
    amps = np.zeros(1 << (d + 2), dtype=complex)
    for y in range(1 << d):
        for b in (0, 1):
            total = sum(
                (-1) ** parity(x, a ^ y) for x in range(1 << d) if table(x) == b
            )
            value = total / (1 << d)
            amps[(y << 2) | b] = value * S2
            amps[(y << 2) | 2 | b] = -value * S2
    return amps


def all_tables(d, kinds):
    for bits in itertools.product((0, 1), repeat=1 << d):
        t = TruthTable(d, bits)
        from qunip import classify

        if classify(t) in kinds:
            yield t


# -- uniform superposition ------------------------------------------------------


def test_uniform_d1():
    np.testing.assert_allclose(uniform_superposition(1).amps, [0.7071, 0.7071], atol=1e-4)


def test_uniform_d3():
    np.testing.assert_allclose(uniform_superposition(3).amps, np.full(8, 0.35355339), atol=1e-8)


def test_uniform_measures_flat():
    d = 4
    dist = measure_distribution(uniform_superposition(d), range(1, d + 1))
    assert all(p == pytest.approx(2.0**-d, abs=1e-12) for p in dist.values())
    assert len(dist) == 1 << d


# -- prepare_database -------------------------------------------------------------


def test_prepare_database_single_pattern():
    # direct substitution: (x=0, b=1) puts +1/sqrt2 at |0 0 1> and -1/sqrt2 at |0 1 1>
    state, steps = prepare_database(PatternSet(1, [(0, 1)]))
    expected = np.zeros(8, dtype=complex)
    expected[0b001] = S2
    expected[0b011] = -S2
    np.testing.assert_allclose(state.amps, expected, atol=1e-12)
    assert steps == 1


def test_prepare_database_full_constant_zero():
    # (1/2)(|000> - |010> + |100> - |110>)
    state, steps = prepare_database(full_pattern_set(TruthTable(1, [0, 0])))
    expected = np.zeros(8, dtype=complex)
    expected[0b000] = 0.5
    expected[0b010] = -0.5
    expected[0b100] = 0.5
    expected[0b110] = -0.5
    np.testing.assert_allclose(state.amps, expected, atol=1e-12)
    assert steps == 2


def test_prepare_database_norm():
    rng = np.random.default_rng(0)
    for _ in range(10):
        d = int(rng.integers(1, 6))
        count = int(rng.integers(1, (1 << d) + 1))
        xs = rng.choice(1 << d, size=count, replace=False)
        p = PatternSet(d, [(int(x), int(rng.integers(0, 2))) for x in xs])
        state, steps = prepare_database(p)
        assert np.vdot(state.amps, state.amps).real == pytest.approx(1.0, abs=1e-12)
        assert steps == count


def test_prepare_database_charges_exponential_steps_for_full_table():
    for d in (1, 2, 5):
        t = TruthTable(d, np.zeros(1 << d, dtype=int))
        _, steps = prepare_database(full_pattern_set(t))
        assert steps == 1 << d


# -- bv_oracle ----------------------------------------------------------------------


def test_bv_oracle_identity_when_a_zero():
    s = uniform_superposition(3)
    assert np.array_equal(bv_oracle(s, 0, 3).amps, s.amps)


def test_bv_oracle_sign_pattern():
    s = uniform_superposition(2)
    out = bv_oracle(s, 0b11, 2)
    np.testing.assert_allclose(out.amps, np.array([1, -1, -1, 1]) * 0.5, atol=1e-12)


def test_bv_oracle_involution():
    rng = np.random.default_rng(1)
    amps = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    s = PureState(amps / np.linalg.norm(amps))
    out = bv_oracle(bv_oracle(s, 0b1010, 4), 0b1010, 4)
    np.testing.assert_allclose(out.amps, s.amps, atol=1e-15)


def test_bv_oracle_acts_on_top_register_only():
    # ancilla qubits below the first d must be untouched by the sign rule
    s = tensor(uniform_superposition(2), basis_state(1, 1))
    out = bv_oracle(s, 0b10, 2)
    signs = np.array([1 if parity(x >> 1, 0b10) == 0 else -1 for x in range(8)])
    np.testing.assert_allclose(out.amps, s.amps * signs, atol=1e-15)


def test_bv_oracle_errors():
    with pytest.raises(DomainError):
        bv_oracle(uniform_superposition(2), 4, 2)
    with pytest.raises(DomainError):
        bv_oracle(uniform_superposition(2), 0, 3)


# -- bernstein_vazirani ----------------------------------------------------------------


def test_bv_d3_example():
    recovered, run = bernstein_vazirani(3, 0b101)
    assert recovered == 0b101
    assert run.trace.oracle_calls == 1
    assert run.trace.prep_step_count == 0


def test_bv_a_zero():
    recovered, _ = bernstein_vazirani(3, 0)
    assert recovered == 0


def test_bv_d1():
    recovered, _ = bernstein_vazirani(1, 1)
    assert recovered == 1


def test_bv_determinism_sweep():
    rng = np.random.default_rng(2)
    for d in range(1, 11):
        for a in rng.integers(0, 1 << d, size=5):
            a = int(a)
            recovered, run = bernstein_vazirani(d, a)
            assert recovered == a
            final = run.trace.steps[-1][1]
            dist = measure_distribution(final, range(1, d + 1))
            assert dist[format(a, f"0{d}b")] == pytest.approx(1.0, abs=1e-12)
            assert abs(abs(final.amps[a]) - 1.0) < 1e-12


def test_bv_trace_is_audited_per_step():
    _, run = bernstein_vazirani(4, 0b1011)
    assert len(run.audits) == len(run.trace.steps) == 3
    # phase-oracle BV never entangles the register
    assert all(a.is_product for a in run.audits)


# -- database_query / figure1_pipeline ---------------------------------------------------


def test_figure1_constant_zero_d1():
    res = figure1_pipeline(TruthTable(1, [0, 0]), 1)
    target = tensor(
        tensor(basis_state(1, 1), PureState([S2, -S2])), basis_state(1, 0)
    )
    assert fidelity(res.final, target) >= 1.0 - 1e-12
    assert res.trace.trace.prep_step_count == 2
    assert res.trace.trace.oracle_calls == 1


def test_figure1_constant_one_d2():
    for a in range(4):
        res = figure1_pipeline(TruthTable(2, [1, 1, 1, 1]), a)
        assert res.first_register == pytest.approx({format(a, "02b"): 1.0})
        assert res.conditional_b == pytest.approx({"1": 1.0})
        assert not res.conditioning_failed


def test_figure1_linear_mass_splits():
    # closed form: for B(x) = x.s the first register splits between a and a^s
    res = figure1_pipeline(linear_table(1, 1), 0)
    assert res.first_register == pytest.approx({"0": 0.5, "1": 0.5}, abs=1e-9)


def test_figure1_matches_closed_form_oracle():
    rng = np.random.default_rng(3)
    for d in (1, 2, 3):
        for _ in range(4):
            table = TruthTable(d, rng.integers(0, 2, 1 << d))
            a = int(rng.integers(0, 1 << d))
            res = figure1_pipeline(table, a)
            expected = figure1_oracle_amplitudes(table, a)
            np.testing.assert_allclose(res.final.amps, expected, atol=1e-12)


def test_figure1_linear_case_against_oracle_distribution():
    rng = np.random.default_rng(4)
    for d in (2, 3, 4):
        s = int(rng.integers(1, 1 << d))
        a = int(rng.integers(0, 1 << d))
        res = figure1_pipeline(linear_table(s, d), a)
        assert res.first_register == pytest.approx(
            {format(a, f"0{d}b"): 0.5, format(a ^ s, f"0{d}b"): 0.5}, abs=1e-9
        )


def test_figure1_general_conditional_b_independent_of_a():
    table = TruthTable(2, [0, 0, 0, 1])  # AND, neither constant nor balanced
    dists = [figure1_pipeline(table, a).conditional_b for a in range(4)]
    for dist in dists[1:]:
        assert dist == pytest.approx(dists[0], abs=1e-12)


def test_database_entanglement_between_arguments_and_value():
    rng = np.random.default_rng(5)
    for d in (1, 2, 4):
        values = rng.integers(0, 2, 1 << d)
        if values.min() == values.max():
            values[0] ^= 1  # force non-constant
        state, _ = prepare_database(full_pattern_set(TruthTable(d, values)))
        reduced = conditional_state(state, [d + 1], "0")  # ancilla factors out
        assert schmidt_rank(reduced, range(1, d + 1)) >= 2


def test_database_query_restricted_patterns():
    res = database_query(PatternSet(2, [(0b11, 1)]), 0b11)
    assert res.trace.trace.prep_step_count == 1
    assert not res.conditioning_failed


# -- deutsch_jozsa ------------------------------------------------------------------------


def test_dj_constant_d2_audits_product():
    verdict, run = deutsch_jozsa(TruthTable(2, [0, 0, 0, 0]))
    assert verdict is Classification.CONSTANT
    assert all(a.is_product and a.residual < 1e-10 for a in run.audits)


def test_dj_parity_d2():
    verdict, run = deutsch_jozsa(TruthTable(2, [0, 1, 1, 0]))
    assert verdict is Classification.BALANCED
    post_oracle = run.trace.steps[1][1]
    # sign pattern factorizes: (|0>-|1>)(|0>-|1>)/2
    expected = np.array([1, -1, -1, 1]) * 0.5
    np.testing.assert_allclose(post_oracle.amps, expected, atol=1e-12)
    assert run.audits[1].is_product


def test_dj_d1_identity_function():
    verdict, _ = deutsch_jozsa(TruthTable(1, [0, 1]))
    assert verdict is Classification.BALANCED


def test_dj_all_promise_tables_d1_d2():
    for d in (1, 2):
        for t in all_tables(d, (Classification.CONSTANT, Classification.BALANCED)):
            from qunip import classify

            verdict, run = deutsch_jozsa(t)
            assert verdict is classify(t)
            assert all(a.is_product and a.residual < 1e-10 for a in run.audits)


def test_dj_promise_violation():
    with pytest.raises(DomainError):
        deutsch_jozsa(TruthTable(2, [0, 0, 0, 1]))


# -- grover ---------------------------------------------------------------------------------


def test_grover_d2_single_iteration_exact():
    success, run = grover(2, 3, 1)
    assert success == pytest.approx(1.0, abs=1e-12)
    assert run.trace.oracle_calls == 1


def test_grover_zero_iterations():
    for d in (1, 3, 5):
        success, _ = grover(d, 0, 0)
        assert success == pytest.approx(2.0**-d, abs=1e-12)


def test_grover_d3_two_iterations():
    # analytic value computed independently: sin^2(5 asin(8^{-1/2}))
    expected = math.sin(5 * math.asin(8**-0.5)) ** 2
    assert abs(expected - 0.94531) < 1e-4
    success, _ = grover(3, 5, 2)
    assert success == pytest.approx(expected, abs=1e-12)


def test_grover_analytic_match():
    rng = np.random.default_rng(6)
    for d in range(1, 8):
        for k in (0, 1, 2, 5, 9):
            marked = int(rng.integers(0, 1 << d))
            success, _ = grover(d, marked, k)
            assert success == pytest.approx(grover_success_probability(d, k), abs=1e-9)


def test_grover_d2_post_oracle_tangle():
    _, run = grover(2, 3, 1)
    assert two_qubit_tangle(run.trace.steps[1][1]) == pytest.approx(0.5, abs=1e-12)


def test_grover_audit_alignment():
    _, run = grover(3, 1, 2)
    assert len(run.trace.steps) == 5
    assert len(run.audits) == 5


def test_optimal_grover_iterations():
    assert optimal_grover_iterations(2) == 1
    assert optimal_grover_iterations(4) == 3
    assert optimal_grover_iterations(10) == 25


# -- serialization -----------------------------------------------------------------------


def test_audited_run_as_dict():
    _, run = bernstein_vazirani(2, 0b10)
    doc = run.as_dict()
    assert doc["oracle_calls"] == 1
    assert doc["prep_steps"] == 0
    assert len(doc["steps"]) == 3
    step = doc["steps"][0]
    assert set(step) == {"label", "state", "audit"}
    assert step["state"]["d"] == 2
    assert step["audit"]["is_product"] is True
