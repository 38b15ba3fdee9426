"""Makhlin local invariants and the two distance functions built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NonUnitaryError
from .linalg import dagger, determinant, frozen

_S = 1 / math.sqrt(2)
BELL_Q = frozen(
    _S
    * np.array(
        [
            [1, 0, 0, 1j],
            [0, 1j, 1, 0],
            [0, 1j, -1, 0],
            [1, 0, 0, -1j],
        ],
        dtype=np.complex128,
    )
)

CNOT = frozen(
    np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
        dtype=np.complex128,
    )
)


@dataclass(frozen=True)
class LocalInvariants:
    g1: float
    g2: float
    g3: float
    # imaginary part of the g3 expression; ~0 for unitary input
    g3_imag: float = 0.0

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.g1, self.g2, self.g3)


def _check4(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (4, 4):
        raise DimensionError(f"two-qubit invariants need a 4x4 matrix, got {u.shape}")
    return u


def bell_basis(u: np.ndarray) -> np.ndarray:
    u = _check4(u)
    return dagger(BELL_Q) @ u @ BELL_Q


def makhlin_matrix(u: np.ndarray) -> np.ndarray:
    ub = bell_basis(u)
    return ub.T @ ub


def local_invariants(u: np.ndarray) -> LocalInvariants:
    u = _check4(u)
    det = determinant(u)
    if abs(det) < 0.5:
        raise NonUnitaryError(f"|det U| = {abs(det):.3g}; local invariants need a unitary input")
    m = makhlin_matrix(u)
    tr = np.trace(m)
    tr_sq = tr * tr
    w = tr_sq / (16 * det)
    v = (tr_sq - np.trace(m @ m)) / (4 * det)
    return LocalInvariants(float(w.real), float(w.imag), float(v.real), float(v.imag))


def d_cnot_from(g: LocalInvariants) -> float:
    return g.g1**2 + g.g2**2 + (g.g3 - 1) ** 2


def d_pe_from(g: LocalInvariants) -> float:
    return (g.g1 - g.g3 * math.hypot(g.g1, g.g2)) ** 2


def d_cnot(u: np.ndarray) -> float:
    """Distance to the CNOT local equivalence class."""
    return d_cnot_from(local_invariants(u))


def d_pe(u: np.ndarray) -> float:
    """Distance to the perfect-entangler set."""
    return d_pe_from(local_invariants(u))
