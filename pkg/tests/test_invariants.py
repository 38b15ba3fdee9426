import numpy as np
import pytest
from hypothesis import given

from braidcomp.errors import DimensionError, NonUnitaryError
from braidcomp.invariants import (
    BELL_Q,
    CNOT,
    bell_basis,
    d_cnot,
    d_cnot_from,
    d_pe,
    d_pe_from,
    local_invariants,
    makhlin_matrix,
)
from braidcomp.linalg import determinant, unitarity_residual
from braidcomp.tables import matches_sig_figs

from conftest import haar_unitary, seeds

I4 = np.eye(4, dtype=complex)


def su2(rng):
    u = haar_unitary(2, rng)
    return u / np.sqrt(np.linalg.det(u))


def g_oracle(u):
    """Invariants from numpy's own determinant and a hand-built Bell basis."""
    s = 1 / np.sqrt(2)
    q = s * np.array([[1, 0, 0, 1j], [0, 1j, 1, 0], [0, 1j, -1, 0], [1, 0, 0, -1j]])
    ub = q.conj().T @ u @ q
    m = ub.T @ ub
    det = np.linalg.det(u)
    t = np.trace(m)
    w = t * t / (16 * det)
    return w.real, w.imag, ((t * t - np.trace(m @ m)) / (4 * det)).real


def test_bell_q_unitary():
    assert unitarity_residual(BELL_Q) < 1e-15


def test_bell_basis_examples():
    assert np.allclose(bell_basis(I4), I4, atol=1e-15)
    u = haar_unitary(4, np.random.default_rng(0))
    c = 0.3 - 1.1j
    assert np.allclose(bell_basis(c * u), c * bell_basis(u), atol=1e-14)
    assert unitarity_residual(bell_basis(u)) < 1e-12


def test_wrong_dimension():
    with pytest.raises(DimensionError):
        bell_basis(np.eye(3))
    with pytest.raises(DimensionError):
        local_invariants(np.eye(6))


def test_makhlin_matrix_examples():
    assert np.allclose(makhlin_matrix(I4), I4, atol=1e-15)
    rng = np.random.default_rng(1)
    for _ in range(20):
        k = np.kron(su2(rng), su2(rng))
        assert np.max(np.abs(makhlin_matrix(k) - I4)) < 1e-10
    m = makhlin_matrix(haar_unitary(4, rng))
    assert np.max(np.abs(m - m.T)) < 1e-13


def test_identity_invariants_exact():
    g = local_invariants(I4)
    assert abs(g.g1 - 1) < 1e-14 and abs(g.g2) < 1e-14 and abs(g.g3 - 3) < 1e-14


def test_cnot_invariants_match_oracle():
    g = local_invariants(CNOT)
    ref = g_oracle(np.asarray(CNOT))
    assert np.allclose(g.as_tuple(), ref, atol=1e-14)
    assert np.allclose(g.as_tuple(), (0, 0, 1), atol=1e-12)


def test_distances_at_fixed_points():
    assert d_cnot(CNOT) < 1e-24
    assert d_pe(CNOT) < 1e-24
    assert d_cnot(I4) == pytest.approx(5, abs=1e-13)
    assert d_pe(I4) == pytest.approx(4, abs=1e-13)


def test_cphase_35(alphabet):
    u = np.linalg.matrix_power(alphabet.gates[4], 35)[:4, :4]
    assert matches_sig_figs(d_cnot(u), 1.5617e-09)
    assert d_pe(u) < 1e-15


def test_non_unitary_rejected():
    with pytest.raises(NonUnitaryError):
        local_invariants(0.5 * I4)


@given(seeds)
def test_matches_numpy_oracle(seed):
    u = haar_unitary(4, np.random.default_rng(seed))
    assert np.allclose(local_invariants(u).as_tuple(), g_oracle(u), atol=1e-10)


@given(seeds)
def test_global_phase_invariance(seed):
    rng = np.random.default_rng(seed)
    u = haar_unitary(4, rng)
    phi = rng.uniform(0, 2 * np.pi)
    a, b = local_invariants(u).as_tuple(), local_invariants(np.exp(1j * phi) * u).as_tuple()
    assert np.max(np.abs(np.subtract(a, b))) < 1e-10


@given(seeds)
def test_local_invariance(seed):
    rng = np.random.default_rng(seed)
    u = haar_unitary(4, rng)
    pre = np.kron(haar_unitary(2, rng), haar_unitary(2, rng))
    post = np.kron(haar_unitary(2, rng), haar_unitary(2, rng))
    a, b = local_invariants(u).as_tuple(), local_invariants(pre @ u @ post).as_tuple()
    assert np.max(np.abs(np.subtract(a, b))) < 1e-9


def test_g3_imaginary_part_vanishes():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(10_000):
        worst = max(worst, abs(local_invariants(haar_unitary(4, rng)).g3_imag))
    assert worst < 1e-9


@given(seeds)
def test_distances_non_negative(seed):
    rng = np.random.default_rng(seed)
    g = local_invariants(haar_unitary(4, rng))
    assert d_cnot_from(g) >= 0 and d_pe_from(g) >= 0


@given(seeds)
def test_laplace_determinant_used_consistently(seed):
    u = haar_unitary(4, np.random.default_rng(seed))
    assert abs(determinant(u) - np.linalg.det(u)) < 1e-12
