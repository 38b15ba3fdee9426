"""CPLEX-style LP text export and a parser for the subset we emit.

Coefficients are written with ``repr`` so every float round-trips exactly.
Objective quadratics use the ``[ ... ] / 2`` convention (coefficients are
doubled on write and halved on read, both exact in binary floating point).
Every variable gets an explicit bound line in model order, which is how the
parser recovers variable ids.
"""

from __future__ import annotations

import json
import math
import os
import re
import tempfile
from pathlib import Path

from ..errors import ModelError
from .model import MiqcqpModel, Objective, VarKind

_TERMS_PER_LINE = 6
_META_PREFIX = "\\ meta: "


def _num(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))


def _signed(coef: float, body: str, first: bool) -> str:
    sign = "-" if coef < 0 or (coef == 0 and math.copysign(1.0, coef) < 0) else "+"
    mag = _num(abs(coef))
    text = f"{mag} {body}" if body else mag
    if first and sign == "+":
        return text
    return f"{sign} {text}"


def _quad_body(a: str, b: str) -> str:
    return f"{a} ^ 2" if a == b else f"{a} * {b}"


def _expression(linear, quadratic, *, objective: bool = False, constant: float | None = None) -> list[str]:
    pieces: list[str] = []
    for c, v in linear:
        pieces.append(_signed(c, v.name, not pieces))
    if quadratic:
        qp = []
        for c, a, b in quadratic:
            qp.append(_signed(2.0 * c if objective else c, _quad_body(a.name, b.name), not qp))
        pieces.append("+ [" if pieces else "[")
        pieces.extend(qp)
        pieces.append("] / 2" if objective else "]")
    if constant:
        pieces.append(_signed(constant, "", not pieces))
    if not pieces:
        pieces.append("0")
    return pieces


def _wrap(head: str, pieces: list[str], tail: str = "") -> list[str]:
    lines = []
    for j in range(0, len(pieces), _TERMS_PER_LINE):
        chunk = " ".join(pieces[j : j + _TERMS_PER_LINE])
        lines.append((head if j == 0 else "   ") + chunk)
    if tail:
        lines[-1] += " " + tail
    return lines


def to_lp_string(model: MiqcqpModel) -> str:
    out = ["\\ braid compilation model"]
    out.append(_META_PREFIX + json.dumps(model.metadata, sort_keys=True))
    out.append("Minimize")
    obj = model.objective
    out += _wrap(" obj: ", _expression(obj.linear_terms, obj.quadratic_terms, objective=True, constant=obj.constant))
    out.append("Subject To")
    for c in model.linear:
        out += _wrap(f" {c.name}: ", _expression(c.terms, ()), f"{c.sense} {_num(c.rhs)}")
    for c in model.quadratic:
        out += _wrap(f" {c.name}: ", _expression(c.linear_terms, c.bilinear_terms), f"{c.sense} {_num(c.rhs)}")
    out.append("Bounds")
    for v in model.vars:
        if v.lower == v.upper:
            out.append(f" {v.name} = {_num(v.lower)}")
        elif math.isinf(v.lower) and math.isinf(v.upper):
            out.append(f" {v.name} free")
        else:
            out.append(f" {_num(v.lower)} <= {v.name} <= {_num(v.upper)}")
    binaries = [v.name for v in model.vars if v.kind is VarKind.BINARY]
    if binaries:
        out.append("Binaries")
        for j in range(0, len(binaries), 8):
            out.append(" " + " ".join(binaries[j : j + 8]))
    out.append("End")
    return "\n".join(out) + "\n"


def export_model(model: MiqcqpModel, path: str | Path) -> None:
    """Write the model atomically (temp file in the target directory, then rename)."""
    model.audit()
    path = Path(path)
    text = to_lp_string(model)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- parsing -----------------------------------------------------------------

_SECTIONS = {
    "minimize": "obj",
    "subject to": "st",
    "bounds": "bounds",
    "binaries": "bin",
    "end": "end",
}
_TOKEN = re.compile(
    r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|<=|>=|=|\[|\]|\^|\*|/|[+-]|[^\s\[\]\^*/+<>=-]+"
)


def _is_number(tok: str) -> bool:
    try:
        float(tok)
    except ValueError:
        return False
    return True


class _Statement:
    def __init__(self, name: str | None, tokens: list[str]):
        self.name = name
        self.tokens = tokens


def _parse_expression(tokens: list[str], pos: int, stop: set[str]):
    """Return (linear, quadratic, constant, pos); quadratic already un-halved
    when followed by ``/ 2``."""
    linear: list[tuple[float, str]] = []
    quadratic: list[tuple[float, str, str]] = []
    constant = 0.0
    in_quad = False
    quad_start = 0
    sign = 1.0
    coef: float | None = None
    while pos < len(tokens) and (in_quad or tokens[pos] not in stop):
        tok = tokens[pos]
        if tok in "+-":
            sign = -1.0 if tok == "-" else 1.0
            pos += 1
            continue
        if tok == "[":
            in_quad = True
            quad_start = len(quadratic)
            pos += 1
            continue
        if tok == "]":
            in_quad = False
            pos += 1
            if pos + 1 < len(tokens) and tokens[pos] == "/":
                div = float(tokens[pos + 1])
                quadratic[quad_start:] = [(c / div, a, b) for c, a, b in quadratic[quad_start:]]
                pos += 2
            continue
        if _is_number(tok):
            nxt = tokens[pos + 1] if pos + 1 < len(tokens) else None
            value = sign * float(tok)
            if nxt is None or nxt in "+-" or nxt in stop or nxt in ("]",):
                if in_quad:
                    raise ModelError("constant inside quadratic bracket")
                constant += value
                sign = 1.0
                pos += 1
                continue
            coef = value
            pos += 1
            continue
        # variable name
        c = coef if coef is not None else sign
        name = tok
        pos += 1
        if in_quad:
            if pos < len(tokens) and tokens[pos] == "^":
                quadratic.append((c, name, name))
                pos += 2
            elif pos < len(tokens) and tokens[pos] == "*":
                quadratic.append((c, name, tokens[pos + 1]))
                pos += 2
            else:
                raise ModelError(f"linear term {name} inside quadratic bracket")
        else:
            linear.append((c, name))
        coef = None
        sign = 1.0
    return linear, quadratic, constant, pos


def parse_lp(text: str) -> MiqcqpModel:
    metadata: dict = {}
    section = None
    statements: dict[str, list[_Statement]] = {"obj": [], "st": [], "bounds": [], "bin": []}
    bound_lines: list[str] = []
    for raw in text.splitlines():
        if raw.startswith(_META_PREFIX):
            metadata = json.loads(raw[len(_META_PREFIX) :])
            continue
        line = raw.split("\\", 1)[0].rstrip()
        if not line.strip():
            continue
        key = line.strip().lower()
        if key in _SECTIONS and not raw.startswith(" "):
            section = _SECTIONS[key]
            continue
        if section == "bounds":
            bound_lines.append(line.strip())
            continue
        if section in ("obj", "st", "bin"):
            toks = line.split()
            if section != "bin" and toks and toks[0].endswith(":") and raw.startswith(" ") and not raw.startswith("   "):
                statements[section].append(_Statement(toks[0][:-1], _TOKEN.findall(line.split(":", 1)[1])))
            elif section == "bin":
                statements["bin"].append(_Statement(None, toks))
            else:
                if not statements[section]:
                    raise ModelError(f"continuation line without statement: {line!r}")
                statements[section][-1].tokens += _TOKEN.findall(line)

    model = MiqcqpModel(metadata=metadata)
    binaries = {tok for st in statements["bin"] for tok in st.tokens}
    for bl in bound_lines:
        parts = bl.split()
        if len(parts) == 5 and parts[1] == "<=" and parts[3] == "<=":
            lo, name, hi = float(parts[0]), parts[2], float(parts[4])
        elif len(parts) == 3 and parts[1] == "=":
            name, lo = parts[0], float(parts[2])
            hi = lo
        elif len(parts) == 2 and parts[1] == "free":
            name, lo, hi = parts[0], -math.inf, math.inf
        else:
            raise ModelError(f"unsupported bound line {bl!r}")
        kind = VarKind.BINARY if name in binaries else VarKind.CONTINUOUS
        model.add_var(name, kind, lo, hi)

    if len(statements["obj"]) != 1:
        raise ModelError("expected exactly one objective")
    lin, quad, const, _ = _parse_expression(statements["obj"][0].tokens, 0, set())
    model.objective = Objective(
        tuple((c, model.var(n)) for c, n in lin),
        tuple((c, model.var(a), model.var(b)) for c, a, b in quad),
        const,
    )
    for st in statements["st"]:
        lin, quad, const, pos = _parse_expression(st.tokens, 0, {"<=", ">=", "="})
        if const:
            raise ModelError(f"constraint {st.name}: constant on left-hand side")
        sense = st.tokens[pos]
        rhs_tokens = st.tokens[pos + 1 :]
        rhs = float("".join(rhs_tokens))
        lin_terms = [(c, model.var(n)) for c, n in lin]
        if quad:
            model.add_quadratic(st.name, [(c, model.var(a), model.var(b)) for c, a, b in quad], lin_terms, sense, rhs)
        else:
            model.add_linear(st.name, lin_terms, sense, rhs)
    return model


def parse_model(path: str | Path) -> MiqcqpModel:
    return parse_lp(Path(path).read_text(encoding="utf-8"))
