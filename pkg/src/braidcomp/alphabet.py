"""The NON-SEMI braid alphabet ``{b1^2, b2, J4, b4, CPHASE}``.

All 6x6 gates use computational-first block layout: indices 0..3 span the
two-qubit computational subspace, 4..5 the non-computational pair.

Powers of ``q = exp(2 pi i k / 8)`` are always evaluated straight from the
exponent (``exp(2 pi i k p / 8)``) so fractional powers never pick up a
branch from a complex logarithm.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import AlphabetError
from .linalg import (
    as_matrix,
    block_offdiag_max,
    determinant,
    direct_sum,
    frozen,
    identity,
    kron,
    matrix_from_literal,
    matrix_to_literal,
    unitarity_residual,
)

GATE_LABELS = ("b1^2", "b2", "J4", "b4", "CPHASE")
UNITARY_TOL = 1e-10
_SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class AlphabetParams:
    alpha: float = 2.4
    q_exponent_k: int = 1
    cphase_theta1: float = -1.772
    cphase_theta2: float = -1.682
    v_block: np.ndarray = field(default_factory=lambda: identity(2))

    def __post_init__(self):
        if not isinstance(self.q_exponent_k, (int, np.integer)) or not 0 <= self.q_exponent_k <= 7:
            raise AlphabetError(f"q_exponent_k must be an integer in 0..7, got {self.q_exponent_k!r}")
        v = as_matrix(self.v_block)
        if v.shape != (2, 2):
            raise AlphabetError(f"v_block must be 2x2, got {v.shape}")
        if unitarity_residual(v) > 1e-12:
            raise AlphabetError("v_block is not unitary to 1e-12")
        object.__setattr__(self, "v_block", frozen(v))

    def q_power(self, p: float) -> complex:
        return cmath.exp(2j * math.pi * self.q_exponent_k * p / 8)

    @classmethod
    def from_dict(cls, d: dict) -> "AlphabetParams":
        known = {"alpha", "q_exponent_k", "cphase_theta1", "cphase_theta2", "v_block"}
        extra = set(d) - known
        if extra:
            raise AlphabetError(f"unknown alphabet config keys: {sorted(extra)}")
        kw = {k: d[k] for k in known - {"v_block"} if k in d}
        if "v_block" in d:
            kw["v_block"] = matrix_from_literal(d["v_block"])
        return cls(**kw)

    @classmethod
    def from_json(cls, path: str | Path) -> "AlphabetParams":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "q_exponent_k": int(self.q_exponent_k),
            "cphase_theta1": self.cphase_theta1,
            "cphase_theta2": self.cphase_theta2,
            "v_block": matrix_to_literal(self.v_block),
        }


@dataclass(frozen=True)
class GateAlphabet:
    """Ordered gate set. Program digit ``d`` selects ``gates[d]``."""

    labels: tuple[str, ...]
    gates: tuple[np.ndarray, ...]
    n_c: int
    n_nc: int

    def __post_init__(self):
        if len(self.labels) != len(self.gates) or not self.gates:
            raise AlphabetError("labels and gates must be non-empty and of equal length")
        gates = tuple(frozen(as_matrix(g)) for g in self.gates)
        n = self.n_c + self.n_nc
        for label, g in zip(self.labels, gates):
            if g.shape != (n, n):
                raise AlphabetError(f"gate {label} has shape {g.shape}, expected {(n, n)}")
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "gates", gates)

    @property
    def n(self) -> int:
        return self.n_c + self.n_nc

    @property
    def m(self) -> int:
        return len(self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __getitem__(self, i: int) -> np.ndarray:
        return self.gates[i]

    def with_identity(self) -> "GateAlphabet":
        """Append ``I_n`` so fixed-depth models can express shorter circuits."""
        return GateAlphabet(self.labels + ("I",), self.gates + (identity(self.n),), self.n_c, self.n_nc)


def b_coefficients(alpha: float) -> tuple[float, float]:
    """Return ``(B_{alpha+1}, B_{alpha-1})``.

    The second coefficient uses ``cot(pi alpha / 4)``; the label and the
    argument disagree by one, and the argument is what gets evaluated.
    """

    def coeff(angle: float, name: str) -> float:
        t = math.tan(angle)
        cot = math.inf if t == 0 else 1.0 / t
        denom = -1.0 + cot
        if abs(denom) < _SINGULAR_TOL:
            raise AlphabetError(f"{name}: denominator -1 + cot({angle:.17g}) vanishes")
        return math.sqrt(2) / denom

    return (
        coeff(math.pi * (alpha + 1) / 4, "B_{alpha+1}"),
        coeff(math.pi * alpha / 4, "B_{alpha-1}"),
    )


def b1_squared(params: AlphabetParams) -> np.ndarray:
    """Single-qubit ``b1^2 = diag(q^alpha, q^-alpha)``; defined for every alpha."""
    return np.diag([params.q_power(params.alpha), params.q_power(-params.alpha)]).astype(np.complex128)


def b1_squared_gate(params: AlphabetParams) -> np.ndarray:
    """The 6x6 ``b1^2``. Unlike ``b2`` it needs no coefficient to be finite."""
    prim = -params.q_power(-1) * b1_squared(params)
    return direct_sum(kron(prim, identity(2)), prim)


def single_qubit_gates(params: AlphabetParams) -> tuple[np.ndarray, np.ndarray]:
    """Single-qubit ``(b1^2, b2)`` in their displayed normalization."""
    q = params.q_power
    alpha = params.alpha
    b_plus, b_minus = b_coefficients(alpha)
    if b_minus == 0:
        raise AlphabetError("B_{alpha-1} is zero; sqrt ratio undefined")
    r = cmath.sqrt(b_plus) / cmath.sqrt(b_minus)

    den_a = 1 - q(2 * alpha)
    den_b = 1 - q(-2 * alpha)
    if abs(den_a) < _SINGULAR_TOL or abs(den_b) < _SINGULAR_TOL:
        raise AlphabetError(f"q^(2 alpha) = 1 for alpha={alpha}, k={params.q_exponent_k}")
    one_plus_q2 = 1 + q(2)
    b1_sq = b1_squared(params)
    b2 = q(-1) * np.array(
        [
            [one_plus_q2 / den_a, q(-1) * r],
            [q(-1) * r, one_plus_q2 / den_b],
        ],
        dtype=np.complex128,
    )
    return b1_sq, b2


def build_alphabet(params: AlphabetParams | None = None) -> GateAlphabet:
    """Assemble the five 6x6 NON-SEMI gates, checking each for unitarity."""
    params = params or AlphabetParams()
    q = params.q_power
    alpha = params.alpha
    b1_sq, b2 = single_qubit_gates(params)
    # b1^2 = -q (b1^{a s s})^2  and  b2 = q^{-3/2} b2^{a s s}
    b1_prim_sq = -q(-1) * b1_sq
    b2_prim = q(1.5) * b2
    i2 = identity(2)
    half = q(0.5) * i2

    gates = (
        b1_squared_gate(params),
        direct_sum(kron(b2_prim, i2), half),
        direct_sum(kron(i2, b1_prim_sq), np.diag([q(1 - alpha), q(1 + alpha)])),
        direct_sum(kron(i2, b2_prim), half),
        direct_sum(
            np.diag([1, 1, cmath.exp(1j * params.cphase_theta1), cmath.exp(1j * params.cphase_theta2)]),
            np.asarray(params.v_block),
        ),
    )
    bad = [(lbl, unitarity_residual(g)) for lbl, g in zip(GATE_LABELS, gates)]
    bad = [(lbl, res) for lbl, res in bad if not res <= UNITARY_TOL]
    if bad:
        detail = ", ".join(f"{lbl} (residual {res:.3e})" for lbl, res in bad)
        raise AlphabetError(f"non-unitary gates at alpha={alpha}, k={params.q_exponent_k}: {detail}")
    return GateAlphabet(GATE_LABELS, gates, n_c=4, n_nc=2)


@dataclass(frozen=True)
class ValidationReport:
    unitarity_residuals: dict[str, float]
    block_residuals: dict[str, float]
    det_moduli: dict[str, float]
    tol: float

    @property
    def failures(self) -> list[str]:
        out = [f"{k}: unitarity residual {v:.3e}" for k, v in self.unitarity_residuals.items() if not v <= self.tol]
        out += [f"{k}: off-block residual {v:.3e}" for k, v in self.block_residuals.items() if not v <= self.tol]
        return out

    @property
    def ok(self) -> bool:
        return not self.failures


def validate_alphabet(alphabet: GateAlphabet, tol: float = UNITARY_TOL) -> ValidationReport:
    unit, block, dets = {}, {}, {}
    for label, g in zip(alphabet.labels, alphabet.gates):
        unit[label] = unitarity_residual(g)
        block[label] = block_offdiag_max(g, alphabet.n_c)
        dets[label] = abs(determinant(g))
    return ValidationReport(unit, block, dets, tol)
