"""Desk-scale native compilation by enumeration, branch-and-bound and beam search.

All modes score a program on the computational block of its product and
rank candidates by ``(value, depth, digit sequence)``: ties go to the
shorter program, then to the lexicographically smaller one. Products are
built with the same left multiplication as :func:`braidcomp.program.evaluate`,
so a returned value re-evaluates bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Callable, Literal, Optional

import numpy as np

from .alphabet import GateAlphabet
from .errors import BraidError, NonUnitaryError
from .invariants import CNOT, d_cnot_from, d_pe_from, local_invariants
from .linalg import identity, max_abs_diff
from .program import EvaluationReport, LEAKAGE_TOL, Program, d2_distance, evaluate_report, j_distance, leakage_of

ObjectiveName = Literal["frobenius", "cnot_class", "perfect_entangler"]
Mode = Literal["exhaustive", "branch_and_bound", "beam"]

# slack on the pruning bound against rounding in the triangle inequality
_BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class SearchConfig:
    objective: ObjectiveName = "frobenius"
    max_depth: int = 4
    mode: Mode = "exhaustive"
    beam_width: int = 16
    leakage_tolerance: float = LEAKAGE_TOL
    prune_bound: Optional[float] = None
    seed: int = 0
    target: Optional[np.ndarray] = field(default=None, compare=False)
    min_depth: int = 1
    # 0 disables canonical-prefix pruning; otherwise the window length
    prefix_window: int = 0
    prefix_tol: float = 1e-12

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.beam_width < 1:
            raise ValueError("beam_width must be >= 1")
        if not 0 <= self.min_depth <= self.max_depth:
            raise ValueError("min_depth must lie in 0..max_depth")
        if self.objective not in ("frobenius", "cnot_class", "perfect_entangler"):
            raise ValueError(f"unknown objective {self.objective!r}")
        if self.mode not in ("exhaustive", "branch_and_bound", "beam"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class SearchResult:
    best_program: Optional[Program]
    best_value: float
    report: Optional[EvaluationReport]
    nodes_explored: int
    proven_optimal: bool
    mode: str = ""

    def to_dict(self) -> dict:
        return {
            "program": str(self.best_program) if self.best_program is not None else None,
            "depth": self.best_program.depth if self.best_program is not None else None,
            "best_value": self.best_value,
            "nodes_explored": self.nodes_explored,
            "proven_optimal": self.proven_optimal,
            "mode": self.mode,
            "report": self.report.to_dict() if self.report is not None else None,
        }


Scorer = Callable[[np.ndarray], Optional[float]]


def make_scorer(alphabet: GateAlphabet, objective: ObjectiveName, target=None, leak_tol: float = LEAKAGE_TOL) -> Scorer:
    """Map a full product to its objective value, or ``None`` if inadmissible."""
    nc = alphabet.n_c
    if objective == "frobenius":
        t = np.asarray(CNOT if target is None else target, dtype=np.complex128)
        if t.shape != (nc, nc):
            raise BraidError(f"target must be {nc}x{nc}")
        return lambda y: j_distance(t, y[:nc, :nc])
    if nc != 4:
        raise BraidError("invariant objectives need a 4-dimensional computational block")
    dist = d_cnot_from if objective == "cnot_class" else d_pe_from

    def score(y: np.ndarray) -> Optional[float]:
        if leakage_of(y, nc) > leak_tol:
            return None
        try:
            return dist(local_invariants(y[:4, :4]))
        except NonUnitaryError:
            return None

    return score


class _Best:
    """Incumbent under the ``(value, depth, sequence)`` order."""

    def __init__(self, value: float = math.inf, seq: Optional[tuple[int, ...]] = None):
        self.value = value
        self.seq = seq

    def offer(self, value: float, seq: tuple[int, ...]) -> None:
        if self.seq is None:
            if value < self.value or (value == self.value and not math.isinf(value)):
                self.value, self.seq = value, seq
            return
        if (value, len(seq), seq) < (self.value, len(self.seq), self.seq):
            self.value, self.seq = value, seq


# -- canonical prefix filter --------------------------------------------------


@dataclass(frozen=True)
class PrefixFilter:
    """Rejects sequences containing a short window whose product equals that
    of a preferred (shorter or lexicographically smaller) window.

    Replacing such a window yields an equal product and a preferred program,
    so the (depth, lexicographic) minimum of every equal-product class
    survives.
    """

    window: int
    banned: frozenset
    class_count: int

    def allows(self, seq: tuple[int, ...]) -> bool:
        for w in range(1, min(self.window, len(seq)) + 1):
            if seq[-w:] in self.banned:
                return False
        return True


def canonical_prefix_pruning(alphabet: GateAlphabet, tol: float = 1e-12, window: int = 2) -> PrefixFilter:
    words = [()]
    for length in range(1, window + 1):
        words += list(iproduct(range(alphabet.m), repeat=length))
    # words are already in (length, lexicographic) order, so the first member
    # of each class is its canonical representative
    products = []
    for w in words:
        y = identity(alphabet.n)
        for i in w:
            y = alphabet.gates[i] @ y
        products.append(y)
    reps: list[int] = []
    banned = set()
    for j, y in enumerate(products):
        if any(max_abs_diff(y, products[r]) <= tol for r in reps):
            banned.add(words[j])
        else:
            reps.append(j)
    return PrefixFilter(window, frozenset(banned), len(reps))


def distinct_product_count(alphabet: GateAlphabet, depth: int, tol: float) -> int:
    """Number of classes among all depth-``depth`` products under ``d2 < tol``."""
    prods = []
    for w in iproduct(range(alphabet.m), repeat=depth):
        y = identity(alphabet.n)
        for i in w:
            y = alphabet.gates[i] @ y
        prods.append(y)
    reps: list[np.ndarray] = []
    for y in prods:
        if not any(d2_distance(y, r) < tol for r in reps):
            reps.append(y)
    return len(reps)


# -- modes -------------------------------------------------------------------


def _finish(alphabet, config_target, objective, best: _Best, nodes: int, proven: bool, mode: str) -> SearchResult:
    if best.seq is None:
        return SearchResult(None, best.value, None, nodes, proven, mode)
    prog = Program(best.seq)
    target = config_target if objective == "frobenius" else None
    report = evaluate_report(prog, alphabet, target) if alphabet.n_c == 4 or target is not None else None
    return SearchResult(prog, best.value, report, nodes, proven, mode)


def _exhaustive(alphabet: GateAlphabet, config: SearchConfig) -> SearchResult:
    score = make_scorer(alphabet, config.objective, config.target, config.leakage_tolerance)
    pf = canonical_prefix_pruning(alphabet, config.prefix_tol, config.prefix_window) if config.prefix_window else None
    best = _Best()
    nodes = 0
    gates = alphabet.gates

    def visit(seq: tuple[int, ...], y: np.ndarray) -> None:
        nonlocal nodes
        nodes += 1
        if len(seq) >= config.min_depth:
            v = score(y)
            if v is not None:
                best.offer(v, seq)
        if len(seq) < config.max_depth:
            for i in range(alphabet.m):
                child = seq + (i,)
                if pf is not None and not pf.allows(child):
                    continue
                visit(child, gates[i] @ y)

    visit((), identity(alphabet.n))
    return _finish(alphabet, config.target, config.objective, best, nodes, True, "exhaustive")


def branch_bound_frobenius(
    alphabet: GateAlphabet,
    target: np.ndarray,
    max_depth: int,
    incumbent: Optional[float] = None,
    *,
    min_depth: int = 1,
    prune: bool = True,
    prefix_filter: Optional[PrefixFilter] = None,
) -> SearchResult:
    """Depth-first search minimizing ``||T - U||_F^2`` with a triangle-inequality bound.

    Appending gate ``G`` to a unitary prefix product ``Y`` moves the
    computational rows by exactly ``||(G - I)[:n_c, :] Y||_F =
    ||(G - I)[:n_c, :]||_F``, so with ``r`` gates left the distance
    can shrink by at most ``r * max_G ||(G - I)[:n_c, :]||_F``. Subtrees whose
    bound exceeds the incumbent are cut. ``incumbent`` is a known achievable
    value; when nothing beats it, ``best_program`` is ``None``.
    """
    target = np.asarray(target, dtype=np.complex128)
    nc, n = alphabet.n_c, alphabet.n
    if incumbent is not None and incumbent <= 0:
        return SearchResult(None, float(incumbent), None, 0, True, "branch_and_bound")
    step = max(float(np.linalg.norm((g - identity(n))[:nc, :])) for g in alphabet.gates)
    best = _Best(math.inf if incumbent is None else float(incumbent))
    nodes = 0
    gates = alphabet.gates

    def visit(seq: tuple[int, ...], y: np.ndarray) -> None:
        nonlocal nodes
        nodes += 1
        value = j_distance(target, y[:nc, :nc])
        if len(seq) >= min_depth:
            best.offer(value, seq)
        remaining = max_depth - len(seq)
        if remaining == 0:
            return
        if prune:
            slack = math.sqrt(value) - remaining * step - _BOUND_SLACK
            bound = slack * slack if slack > 0 else 0.0
            if bound > best.value:
                return
        for i in range(alphabet.m):
            child = seq + (i,)
            if prefix_filter is not None and not prefix_filter.allows(child):
                continue
            visit(child, gates[i] @ y)

    visit((), identity(n))
    return _finish(alphabet, target, "frobenius", best, nodes, True, "branch_and_bound")


def _beam(alphabet: GateAlphabet, config: SearchConfig) -> SearchResult:
    """Level-synchronous beam search.

    Intermediate prefixes are ranked with the final objective itself, which
    is only a heuristic for the invariant distances. Inadmissible (leaky)
    prefixes rank last but may still be kept if the beam has room.
    """
    score = make_scorer(alphabet, config.objective, config.target, config.leakage_tolerance)
    pf = canonical_prefix_pruning(alphabet, config.prefix_tol, config.prefix_window) if config.prefix_window else None
    best = _Best()
    beam = [((), identity(alphabet.n))]
    nodes = 1
    if config.min_depth == 0:
        v = score(beam[0][1])
        if v is not None:
            best.offer(v, ())
    for depth in range(1, config.max_depth + 1):
        scored = []
        for seq, y in beam:
            for i in range(alphabet.m):
                child = seq + (i,)
                if pf is not None and not pf.allows(child):
                    continue
                yc = alphabet.gates[i] @ y
                nodes += 1
                v = score(yc)
                if v is not None and depth >= config.min_depth:
                    best.offer(v, child)
                scored.append((math.inf if v is None else v, child, yc))
        scored.sort(key=lambda c: (c[0], c[1]))
        beam = [(seq, y) for _, seq, y in scored[: config.beam_width]]
        if not beam:
            break
    return _finish(alphabet, config.target, config.objective, best, nodes, False, "beam")


def search(alphabet: GateAlphabet, config: SearchConfig) -> SearchResult:
    if config.mode == "exhaustive":
        return _exhaustive(alphabet, config)
    if config.mode == "beam":
        return _beam(alphabet, config)
    if config.objective != "frobenius":
        raise BraidError("branch-and-bound is only available for the frobenius objective")
    target = CNOT if config.target is None else config.target
    pf = canonical_prefix_pruning(alphabet, config.prefix_tol, config.prefix_window) if config.prefix_window else None
    res = branch_bound_frobenius(
        alphabet, target, config.max_depth, config.prune_bound, min_depth=config.min_depth, prefix_filter=pf
    )
    return res
