"""Braid programs: parsing, evaluation and the reporting metrics.

A program is a digit string over the alphabet (``"4444"`` is four CPHASE
gates). Evaluation left-multiplies: ``Y_0 = I``, ``Y_t = G[d_t] @ Y_{t-1}``,
where ``d_t`` is the t-th digit read left to right (``order="forward"``).
``order="reversed"`` applies the digits right to left instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, NamedTuple

import numpy as np

from .alphabet import GateAlphabet
from .errors import DimensionError, NonUnitaryError, ProgramParseError, ProgramRangeError
from .invariants import CNOT, LocalInvariants, d_cnot_from, d_pe_from, local_invariants
from .linalg import block_offdiag_max, frobenius_norm_sq, identity

Order = Literal["forward", "reversed"]
LEAKAGE_TOL = 1e-8


@dataclass(frozen=True)
class Program:
    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))

    @property
    def depth(self) -> int:
        return len(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __str__(self) -> str:
        return "".join(str(i) for i in self.indices)

    def concat(self, other: "Program") -> "Program":
        return Program(self.indices + other.indices)

    @classmethod
    def of(cls, indices: Iterable[int]) -> "Program":
        return cls(tuple(indices))


def parse_program(text: str, alphabet_size: int) -> Program:
    """Parse a digit string; whitespace (including table line wraps) is ignored.

    Positions in error messages are 1-based offsets into ``text``.
    """
    if alphabet_size > 10:
        raise ValueError("digit programs address at most 10 gates")
    out = []
    for pos, ch in enumerate(text, start=1):
        if ch.isspace():
            continue
        if not ("0" <= ch <= "9"):
            raise ProgramParseError(f"illegal character {ch!r}", pos)
        d = ord(ch) - ord("0")
        if d >= alphabet_size:
            raise ProgramRangeError(f"gate index {d} out of range for alphabet of size {alphabet_size}", pos)
        out.append(d)
    return Program(tuple(out))


def _ordered(program: Program, order: Order) -> tuple[int, ...]:
    if order == "forward":
        return program.indices
    if order == "reversed":
        return program.indices[::-1]
    raise ValueError(f"unknown order {order!r}")


def evaluate(program: Program, alphabet: GateAlphabet, order: Order = "forward") -> np.ndarray:
    y = identity(alphabet.n)
    for i in _ordered(program, order):
        if not 0 <= i < alphabet.m:
            raise ProgramRangeError(f"gate index {i} out of range", 0)
        y = alphabet.gates[i] @ y
    return y


def prefix_products(program: Program, alphabet: GateAlphabet, order: Order = "forward") -> list[np.ndarray]:
    """``[Y_0, Y_1, ..., Y_d]``; same arithmetic as :func:`evaluate`."""
    ys = [identity(alphabet.n)]
    for i in _ordered(program, order):
        ys.append(alphabet.gates[i] @ ys[-1])
    return ys


def leakage_of(y: np.ndarray, n_c: int) -> float:
    return block_offdiag_max(y, n_c)


def j_distance(target: np.ndarray, u: np.ndarray) -> float:
    """Squared Frobenius distance ``sum |T_kl - U_kl|^2``."""
    if target.shape != u.shape:
        raise DimensionError(f"target {target.shape} vs operator {u.shape}")
    return frobenius_norm_sq(target - u)


def d2_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Hilbert-Schmidt distance between the norm-normalized matrices; in [0, 2]."""
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise ValueError("d2 distance undefined for a zero matrix")
    return float(np.linalg.norm(a / na - b / nb))


@dataclass(frozen=True)
class EvaluationReport:
    program: Program
    product: np.ndarray
    computational_block: np.ndarray
    leakage: float
    leaky: bool
    j_frobenius: float
    d2_hilbert_schmidt: float
    invariants: LocalInvariants | None
    d_cnot: float
    d_pe: float
    order: str = "forward"

    def to_dict(self) -> dict:
        inv = self.invariants
        return {
            "program": str(self.program),
            "depth": self.program.depth,
            "order": self.order,
            "leakage": self.leakage,
            "leaky": self.leaky,
            "j": self.j_frobenius,
            "d2": self.d2_hilbert_schmidt,
            "g1": inv.g1 if inv else math.nan,
            "g2": inv.g2 if inv else math.nan,
            "g3": inv.g3 if inv else math.nan,
            "d_cnot": self.d_cnot,
            "d_pe": self.d_pe,
        }


def block_metrics(u: np.ndarray) -> tuple[LocalInvariants | None, float, float]:
    """Invariants, D_CNOT and D_PE of a 4x4 block; NaN when not defined."""
    if u.shape != (4, 4):
        return None, math.nan, math.nan
    try:
        g = local_invariants(u)
    except NonUnitaryError:
        return None, math.nan, math.nan
    return g, d_cnot_from(g), d_pe_from(g)


def evaluate_report(
    program: Program,
    alphabet: GateAlphabet,
    target: np.ndarray | None = None,
    order: Order = "forward",
    leak_tol: float = LEAKAGE_TOL,
) -> EvaluationReport:
    target = CNOT if target is None else np.asarray(target)
    if target.shape != (alphabet.n_c, alphabet.n_c):
        raise DimensionError(f"target must be {alphabet.n_c}x{alphabet.n_c}, got {target.shape}")
    y = evaluate(program, alphabet, order)
    u = y[: alphabet.n_c, : alphabet.n_c]
    leak = leakage_of(y, alphabet.n_c)
    g, dc, dp = block_metrics(u)
    return EvaluationReport(
        program=program,
        product=y,
        computational_block=u,
        leakage=leak,
        leaky=leak > leak_tol,
        j_frobenius=j_distance(target, u),
        d2_hilbert_schmidt=d2_distance(u, target),
        invariants=g,
        d_cnot=dc,
        d_pe=dp,
        order=order,
    )


class SweepRow(NamedTuple):
    L: int
    d_pe: float
    d_cnot: float
    g1: float
    g2: float
    g3: float


def power_sweep(gate_index: int, alphabet: GateAlphabet, l_max: int) -> list[SweepRow]:
    """Metrics of the computational block of ``G^L`` for ``L = 1..l_max``."""
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    g = alphabet.gates[gate_index]
    y = identity(alphabet.n)
    rows = []
    for L in range(1, l_max + 1):
        y = g @ y
        inv, dc, dp = block_metrics(y[: alphabet.n_c, : alphabet.n_c])
        gs = inv.as_tuple() if inv else (math.nan,) * 3
        rows.append(SweepRow(L, dp, dc, *gs))
    return rows
