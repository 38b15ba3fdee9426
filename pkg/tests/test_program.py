import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from braidcomp.errors import DimensionError, ProgramParseError, ProgramRangeError
from braidcomp.invariants import CNOT
from braidcomp.linalg import direct_sum, identity, unitarity_residual
from braidcomp.program import (
    Program,
    d2_distance,
    evaluate,
    evaluate_report,
    j_distance,
    leakage_of,
    parse_program,
    power_sweep,
    prefix_products,
)
from braidcomp.tables import matches_sig_figs

from conftest import complex_matrix, haar_unitary, seeds

programs = st.lists(st.integers(0, 4), max_size=12).map(Program.of)


def test_parse_examples():
    assert parse_program("444", 5).indices == (4, 4, 4)
    assert parse_program("4 4\n4", 5).indices == (4, 4, 4)
    with pytest.raises(ProgramRangeError) as exc:
        parse_program("45", 5)
    assert exc.value.position == 2


def test_parse_illegal_character():
    with pytest.raises(ProgramParseError) as exc:
        parse_program("44x4", 5)
    assert exc.value.position == 3
    assert not isinstance(exc.value, ProgramRangeError)


@given(programs)
def test_parse_round_trip(p):
    assert parse_program(str(p), 5) == p


def test_evaluate_examples(alphabet):
    assert np.array_equal(evaluate(Program(()), alphabet), identity(6))
    assert np.array_equal(evaluate(Program((4,)), alphabet), alphabet.gates[4])


def test_evaluate_order_is_left_multiplication(alphabet):
    p = Program((1, 2))
    assert np.array_equal(evaluate(p, alphabet), alphabet.gates[2] @ alphabet.gates[1])
    assert np.array_equal(evaluate(p, alphabet, "reversed"), alphabet.gates[1] @ alphabet.gates[2])


def test_reversed_order_is_transpose(alphabet):
    # every gate is symmetric, so reading the string backwards transposes the product
    p = parse_program("0123402413", 5)
    assert np.allclose(evaluate(p, alphabet, "reversed"), evaluate(p, alphabet).T, atol=1e-13)


def test_cphase_35_report(alphabet):
    rep = evaluate_report(Program((4,) * 35), alphabet, CNOT)
    assert matches_sig_figs(rep.d_cnot, 1.5617e-09)
    assert rep.d_pe <= 1e-15
    assert rep.leakage == 0 and not rep.leaky


def test_cphase_27_report(alphabet):
    assert matches_sig_figs(evaluate_report(Program((4,) * 27), alphabet).d_cnot, 7.3615e-02)


def test_empty_program_report(alphabet):
    rep = evaluate_report(Program(()), alphabet, CNOT)
    assert rep.j_frobenius == pytest.approx(4, abs=1e-14)
    assert rep.d_cnot == pytest.approx(5, abs=1e-13)
    assert rep.d_pe == pytest.approx(4, abs=1e-13)


def test_report_dict(alphabet):
    d = evaluate_report(Program((4, 4)), alphabet).to_dict()
    assert d["program"] == "44" and d["depth"] == 2 and d["order"] == "forward"
    assert set(d) >= {"leakage", "j", "d2", "g1", "g2", "g3", "d_cnot", "d_pe"}


def test_report_target_shape(alphabet):
    with pytest.raises(DimensionError):
        evaluate_report(Program((0,)), alphabet, identity(6))


def test_leakage_examples(alphabet):
    rng = np.random.default_rng(0)
    assert leakage_of(direct_sum(haar_unitary(4, rng), haar_unitary(2, rng)), 4) == 0
    y = identity(6)
    for _ in range(20):
        y = alphabet.gates[4] @ y
        assert leakage_of(y, 4) == 0
    swap = identity(6)[[0, 1, 2, 4, 3, 5]]
    assert leakage_of(swap, 4) == 1


def test_j_distance_examples():
    assert j_distance(CNOT, CNOT) == 0
    assert j_distance(CNOT, identity(4)) == 4
    with pytest.raises(DimensionError):
        j_distance(CNOT, identity(2))


def test_d2_examples():
    a = complex_matrix(4, np.random.default_rng(1))
    assert d2_distance(a, a) == 0
    assert d2_distance(a, 3.5 * a) < 1e-15
    assert d2_distance(CNOT, identity(4)) == pytest.approx(1, abs=1e-15)
    with pytest.raises(ValueError):
        d2_distance(a, np.zeros((4, 4)))


@given(programs, programs)
def test_concatenation(alphabet, p1, p2):
    lhs = evaluate(p1.concat(p2), alphabet)
    assert np.max(np.abs(lhs - evaluate(p2, alphabet) @ evaluate(p1, alphabet))) < 1e-12


@given(st.integers(0, 4), st.integers(0, 200))
def test_power_matches_repeated_squaring(alphabet, i, L):
    ref = np.linalg.matrix_power(alphabet.gates[i], L)
    assert np.max(np.abs(evaluate(Program((i,) * L), alphabet) - ref)) < 1e-11


@given(seeds)
def test_deep_products_stay_unitary(alphabet, seed):
    rng = np.random.default_rng(seed)
    p = Program(tuple(rng.integers(0, 5, 200)))
    assert unitarity_residual(evaluate(p, alphabet)) < 1e-9


@given(programs)
def test_distances_in_range(alphabet, p):
    rep = evaluate_report(p, alphabet)
    assert rep.j_frobenius >= 0 and rep.d_cnot >= 0 and rep.d_pe >= 0
    assert 0 <= rep.d2_hilbert_schmidt <= 2


def test_prefix_products(alphabet):
    p = Program((0, 3, 4))
    ys = prefix_products(p, alphabet)
    assert len(ys) == 4
    assert np.array_equal(ys[-1], evaluate(p, alphabet))


def test_power_sweep(alphabet):
    rows = power_sweep(4, alphabet, 50)
    assert [r.L for r in rows] == list(range(1, 51))
    assert rows[34].d_pe < 1e-15
    assert math.dist((rows[0].g1, rows[0].g2, rows[0].g3), (1, 0, 3)) < 0.2


@pytest.mark.parametrize("gate", [0, 2, 4])
def test_diagonal_powers_never_leak(alphabet, gate):
    y = identity(6)
    for _ in range(30):
        y = alphabet.gates[gate] @ y
        assert leakage_of(y, 4) == 0


def test_power_sweep_rejects_zero(alphabet):
    with pytest.raises(ValueError):
        power_sweep(4, alphabet, 0)
