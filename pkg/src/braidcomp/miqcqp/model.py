"""Solver-agnostic model IR: bounded variables, linear and bilinear
constraints, and a quadratic objective (always minimized)."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Mapping

from ..errors import AssignmentError, ModelError

SENSES = ("<=", "=", ">=")


class VarKind(str, Enum):
    CONTINUOUS = "continuous"
    BINARY = "binary"


@dataclass(frozen=True)
class VarRef:
    id: int
    name: str
    kind: VarKind = VarKind.CONTINUOUS
    lower: float = -1.0
    upper: float = 1.0


@dataclass(frozen=True)
class LinearConstraint:
    name: str
    terms: tuple[tuple[float, VarRef], ...]
    sense: str
    rhs: float


@dataclass(frozen=True)
class QuadraticConstraint:
    name: str
    bilinear_terms: tuple[tuple[float, VarRef, VarRef], ...]
    linear_terms: tuple[tuple[float, VarRef], ...]
    sense: str
    rhs: float


@dataclass(frozen=True)
class Objective:
    linear_terms: tuple[tuple[float, VarRef], ...] = ()
    quadratic_terms: tuple[tuple[float, VarRef, VarRef], ...] = ()
    constant: float = 0.0


def _lhs_linear(terms, values) -> float:
    return math.fsum(c * values[v.id] for c, v in terms)


def _lhs_bilinear(terms, values) -> float:
    return math.fsum(c * values[a.id] * values[b.id] for c, a, b in terms)


def _violation(lhs: float, sense: str, rhs: float) -> float:
    if sense == "<=":
        return max(0.0, lhs - rhs)
    if sense == ">=":
        return max(0.0, rhs - lhs)
    return abs(lhs - rhs)


@dataclass
class MiqcqpModel:
    vars: list[VarRef] = field(default_factory=list)
    linear: list[LinearConstraint] = field(default_factory=list)
    quadratic: list[QuadraticConstraint] = field(default_factory=list)
    objective: Objective = field(default_factory=Objective)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self._by_name: dict[str, VarRef] = {v.name: v for v in self.vars}

    # -- construction ------------------------------------------------------

    def add_var(
        self, name: str, kind: VarKind = VarKind.CONTINUOUS, lower: float = -1.0, upper: float = 1.0
    ) -> VarRef:
        if name in self._by_name:
            raise ModelError(f"duplicate variable {name}")
        if kind is VarKind.BINARY:
            lower, upper = 0.0, 1.0
        v = VarRef(len(self.vars), name, kind, float(lower), float(upper))
        self.vars.append(v)
        self._by_name[name] = v
        return v

    def add_linear(self, name: str, terms, sense: str, rhs: float) -> LinearConstraint:
        if sense not in SENSES:
            raise ModelError(f"bad sense {sense!r}")
        c = LinearConstraint(name, tuple((float(a), v) for a, v in terms), sense, float(rhs))
        self.linear.append(c)
        return c

    def add_quadratic(self, name: str, bilinear, linear, sense: str, rhs: float) -> QuadraticConstraint:
        if sense not in SENSES:
            raise ModelError(f"bad sense {sense!r}")
        c = QuadraticConstraint(
            name,
            tuple((float(a), x, y) for a, x, y in bilinear),
            tuple((float(a), v) for a, v in linear),
            sense,
            float(rhs),
        )
        self.quadratic.append(c)
        return c

    def var(self, name: str) -> VarRef:
        try:
            return self._by_name[name]
        except KeyError:
            raise ModelError(f"no variable named {name}") from None

    def has_var(self, name: str) -> bool:
        return name in self._by_name

    # -- inspection --------------------------------------------------------

    def audit(self) -> dict[str, int]:
        """Check referential integrity and return structural counts."""
        known = {v.id: v for v in self.vars}

        def check(v: VarRef, where: str):
            if known.get(v.id) != v:
                raise ModelError(f"{where} references unknown variable {v.name}")

        names = Counter()
        for c in self.linear:
            names[c.name] += 1
            for _, v in c.terms:
                check(v, c.name)
        for c in self.quadratic:
            names[c.name] += 1
            for _, a, b in c.bilinear_terms:
                check(a, c.name)
                check(b, c.name)
            for _, v in c.linear_terms:
                check(v, c.name)
        for _, v in self.objective.linear_terms:
            check(v, "objective")
        for _, a, b in self.objective.quadratic_terms:
            check(a, "objective")
            check(b, "objective")
        dup = [n for n, k in names.items() if k > 1]
        if dup:
            raise ModelError(f"duplicate constraint names: {dup[:5]}")

        prefix = Counter(v.name.split("_", 1)[0] for v in self.vars)
        one_hot = sum(1 for c in self.linear if c.name.startswith("onehot_"))
        depth = self.metadata.get("depth")
        if depth is not None and self.metadata.get("m") is not None:
            if one_hot != depth:
                raise ModelError(f"expected {depth} gate-selection constraints, found {one_hot}")
        return {
            "vars": len(self.vars),
            "binary": sum(1 for v in self.vars if v.kind is VarKind.BINARY),
            "y": prefix["Yre"] + prefix["Yim"],
            "z": prefix["z"],
            "linear": len(self.linear),
            "quadratic": len(self.quadratic),
            "onehot": one_hot,
        }

    def _values(self, assignment: Mapping[str, float]) -> list[float]:
        missing = [v.name for v in self.vars if v.name not in assignment]
        if missing:
            raise AssignmentError(f"assignment misses {len(missing)} variables, e.g. {missing[:3]}")
        return [float(assignment[v.name]) for v in self.vars]

    def objective_value(self, assignment: Mapping[str, float]) -> float:
        return evaluate_assignment(self, assignment)[0]


def evaluate_assignment(model: MiqcqpModel, assignment: Mapping[str, float]) -> tuple[float, float]:
    """Return ``(objective, max_violation)`` for a full assignment keyed by name.

    The violation covers constraint residuals, variable bounds, and the
    integrality gap of binaries.
    """
    vals = model._values(assignment)
    obj = model.objective
    objective = obj.constant + _lhs_linear(obj.linear_terms, vals) + _lhs_bilinear(obj.quadratic_terms, vals)

    worst = 0.0
    for v, x in zip(model.vars, vals):
        worst = max(worst, v.lower - x, x - v.upper)
        if v.kind is VarKind.BINARY:
            worst = max(worst, abs(x - round(x)))
    for c in model.linear:
        worst = max(worst, _violation(_lhs_linear(c.terms, vals), c.sense, c.rhs))
    for c in model.quadratic:
        lhs = _lhs_bilinear(c.bilinear_terms, vals) + _lhs_linear(c.linear_terms, vals)
        worst = max(worst, _violation(lhs, c.sense, c.rhs))
    return objective, worst


def constraint_violations(model: MiqcqpModel, assignment: Mapping[str, float]) -> dict[str, float]:
    """Per-constraint violation (only nonzero entries)."""
    vals = model._values(assignment)
    out = {}
    for c in model.linear:
        viol = _violation(_lhs_linear(c.terms, vals), c.sense, c.rhs)
        if viol > 0:
            out[c.name] = viol
    for c in model.quadratic:
        lhs = _lhs_bilinear(c.bilinear_terms, vals) + _lhs_linear(c.linear_terms, vals)
        viol = _violation(lhs, c.sense, c.rhs)
        if viol > 0:
            out[c.name] = viol
    return out


def load_assignment(path: str | Path) -> dict[str, float]:
    """Read a ``{var_name: value}`` JSON file."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ModelError("assignment file must hold a JSON object")
    return {str(k): float(v) for k, v in data.items()}


def save_assignment(assignment: Mapping[str, float], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({k: float(v) for k, v in assignment.items()}, fh, indent=1, sort_keys=True)
