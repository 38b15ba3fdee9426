"""Builders for the compilation models.

Complex quantities are split into real and imaginary variables. Index
conventions in variable names: steps ``t`` run 0..d (``t = 0`` is the empty
product), matrix indices ``k, l, p`` and gate indices ``i`` are 0-based, and
the computational block is the leading ``n_c x n_c`` block.

Naming:
    x_{t}_{i}                 gate i selected at step t (t >= 1)
    Yre_{t}_{k}_{l}, Yim_...  components of the prefix product Y_t
    z_re_{t}_{k}_{l}_{p}_{i}  linearized x_{t,i} * Re(rho_i[k,p] Y_{t-1}[p,l])
    z_im_...                  same for the imaginary part
"""

from __future__ import annotations

from typing import Literal, Mapping

import numpy as np

from ..alphabet import GateAlphabet
from ..errors import DimensionError, ModelError
from ..invariants import BELL_Q
from ..linalg import determinant
from ..program import Order, Program, prefix_products
from .model import LinearConstraint, MiqcqpModel, Objective, VarKind, VarRef

InvariantObjective = Literal["cnot_class", "perfect_entangler"]

# |g1|,|g2| <= 1 and |g3| <= (16 + 4) / 4 for unitary blocks
_G12_BOUND = 1.0
_G3_BOUND = 5.0


def x_name(t: int, i: int) -> str:
    return f"x_{t}_{i}"


def y_name(part: str, t: int, k: int, l: int) -> str:
    return f"Y{part}_{t}_{k}_{l}"


def z_name(part: str, t: int, k: int, l: int, p: int, i: int) -> str:
    return f"z_{part}_{t}_{k}_{l}_{p}_{i}"


def linearize_bilinear(
    z: tuple[VarRef, VarRef],
    x: VarRef,
    coeff: complex,
    y_re: VarRef,
    y_im: VarRef,
) -> list[LinearConstraint]:
    """Big-M envelopes tying ``z = x * (coeff * y)`` for binary ``x``.

    ``z`` is the ``(real, imag)`` pair. For each component the product
    ``p`` is linear in ``(y_re, y_im)`` and satisfies ``|p| <= M`` with
    ``M = |Re c| + |Im c|`` on the box ``[-1, 1]^2``, so the four inequalities

        z >= -M x,  z >= p + M x - M,  z <= M x,  z <= p - M x + M

    pin ``z`` to ``0`` when ``x = 0`` and to ``p`` when ``x = 1``. A zero
    coefficient yields no constraints; callers skip creating ``z`` then.
    """
    cr, ci = float(np.real(coeff)), float(np.imag(coeff))
    big_m = abs(cr) + abs(ci)
    if big_m == 0:
        return []
    # p_re = cr*y_re - ci*y_im ; p_im = cr*y_im + ci*y_re
    components = (
        (z[0], [(cr, y_re), (-ci, y_im)]),
        (z[1], [(cr, y_im), (ci, y_re)]),
    )
    out = []
    for zv, p_terms in components:
        p_terms = [(a, v) for a, v in p_terms if a != 0]
        neg_p = [(-a, v) for a, v in p_terms]
        out.append(LinearConstraint(f"mc1_{zv.name}", ((1.0, zv), (big_m, x)), ">=", 0.0))
        out.append(LinearConstraint(f"mc2_{zv.name}", ((1.0, zv), *neg_p, (-big_m, x)), ">=", -big_m))
        out.append(LinearConstraint(f"mc3_{zv.name}", ((1.0, zv), (-big_m, x)), "<=", 0.0))
        out.append(LinearConstraint(f"mc4_{zv.name}", ((1.0, zv), *neg_p, (big_m, x)), "<=", big_m))
    return out


def _base_model(alphabet: GateAlphabet, depth: int, linearize: bool, pad_identity: bool) -> MiqcqpModel:
    if depth < 0:
        raise ModelError("depth must be non-negative")
    if pad_identity:
        alphabet = alphabet.with_identity()
    n, nc, m = alphabet.n, alphabet.n_c, alphabet.m
    model = MiqcqpModel(
        metadata={
            "depth": depth,
            "m": m,
            "n": n,
            "n_c": nc,
            "linearize": bool(linearize),
            "pad_identity": bool(pad_identity),
        }
    )

    ys = {}
    for t in range(depth + 1):
        for k in range(n):
            for l in range(n):
                for part in ("re", "im"):
                    ys[part, t, k, l] = model.add_var(y_name(part, t, k, l))
    xs = {}
    for t in range(1, depth + 1):
        for i in range(m):
            xs[t, i] = model.add_var(x_name(t, i), VarKind.BINARY)

    # Y_0 = I_n
    for k in range(n):
        for l in range(n):
            model.add_linear(f"init_re_{k}_{l}", [(1.0, ys["re", 0, k, l])], "=", 1.0 if k == l else 0.0)
            model.add_linear(f"init_im_{k}_{l}", [(1.0, ys["im", 0, k, l])], "=", 0.0)

    gates = [np.asarray(g) for g in alphabet.gates]
    for t in range(1, depth + 1):
        model.add_linear(f"onehot_{t}", [(1.0, xs[t, i]) for i in range(m)], "=", 1.0)
        for k in range(n):
            for l in range(n):
                yre, yim = ys["re", t, k, l], ys["im", t, k, l]
                if linearize:
                    z_re, z_im = [], []
                    for p in range(n):
                        for i in range(m):
                            c = complex(gates[i][k, p])
                            if c == 0:
                                continue
                            big_m = abs(c.real) + abs(c.imag)
                            zr = model.add_var(z_name("re", t, k, l, p, i), lower=-big_m, upper=big_m)
                            zi = model.add_var(z_name("im", t, k, l, p, i), lower=-big_m, upper=big_m)
                            model.linear.extend(
                                linearize_bilinear((zr, zi), xs[t, i], c, ys["re", t - 1, p, l], ys["im", t - 1, p, l])
                            )
                            z_re.append(zr)
                            z_im.append(zi)
                    model.add_linear(f"step_re_{t}_{k}_{l}", [(1.0, yre)] + [(-1.0, z) for z in z_re], "=", 0.0)
                    model.add_linear(f"step_im_{t}_{k}_{l}", [(1.0, yim)] + [(-1.0, z) for z in z_im], "=", 0.0)
                else:
                    bil_re, bil_im = [], []
                    for p in range(n):
                        pre, pim = ys["re", t - 1, p, l], ys["im", t - 1, p, l]
                        for i in range(m):
                            c = complex(gates[i][k, p])
                            x = xs[t, i]
                            if c.real:
                                bil_re.append((-c.real, x, pre))
                                bil_im.append((-c.real, x, pim))
                            if c.imag:
                                bil_re.append((c.imag, x, pim))
                                bil_im.append((-c.imag, x, pre))
                    model.add_quadratic(f"step_re_{t}_{k}_{l}", bil_re, [(1.0, yre)], "=", 0.0)
                    model.add_quadratic(f"step_im_{t}_{k}_{l}", bil_im, [(1.0, yim)], "=", 0.0)

    # no leakage: off-block entries of Y_d vanish
    if 0 < nc < n:
        for k in range(n):
            for l in range(n):
                if (k < nc) != (l < nc):
                    model.add_linear(f"leak_re_{k}_{l}", [(1.0, ys["re", depth, k, l])], "=", 0.0)
                    model.add_linear(f"leak_im_{k}_{l}", [(1.0, ys["im", depth, k, l])], "=", 0.0)
    return model


def build_frobenius_model(
    alphabet: GateAlphabet,
    target: np.ndarray,
    depth: int,
    linearize: bool = False,
    pad_identity: bool = False,
) -> MiqcqpModel:
    """Fixed-depth model minimizing ``||T - Y_d^C||_F^2``."""
    if depth < 1:
        raise ModelError("depth must be >= 1")
    target = np.asarray(target, dtype=np.complex128)
    nc = alphabet.n_c
    if target.shape != (nc, nc):
        raise DimensionError(f"target must be {nc}x{nc}, got {target.shape}")
    model = _base_model(alphabet, depth, linearize, pad_identity)
    model.metadata["objective"] = "frobenius"
    quad, lin = [], []
    const = 0.0
    for k in range(nc):
        for l in range(nc):
            for part, tv in (("re", target[k, l].real), ("im", target[k, l].imag)):
                y = model.var(y_name(part, depth, k, l))
                quad.append((1.0, y, y))
                if tv:
                    lin.append((-2.0 * tv, y))
                const += tv * tv
    model.objective = Objective(tuple(lin), tuple(quad), const)
    return model


# -- invariant objectives ----------------------------------------------------


def _cmul_terms(a: tuple[VarRef, VarRef], b: tuple[VarRef, VarRef], scale: float = 1.0):
    """Bilinear terms of ``scale * a * b`` split into (real, imag) parts."""
    (ar, ai), (br, bi) = a, b
    re = [(scale, ar, br), (-scale, ai, bi)]
    im = [(scale, ar, bi), (scale, ai, br)]
    return re, im


def _minor_name(part: str, cols: tuple[int, ...]) -> str:
    return f"det{part}_" + "".join(map(str, cols))


def _encode_determinant(model: MiqcqpModel, u) -> tuple[VarRef, VarRef]:
    """Cofactor expansion along the first row, one variable pair per minor.

    ``u[k][l]`` is the ``(re, im)`` VarRef pair of the block entry.
    """
    n = len(u)
    made: dict[tuple[int, ...], tuple[VarRef, VarRef]] = {}

    def minor(cols: tuple[int, ...]) -> tuple[VarRef, VarRef]:
        if cols in made:
            return made[cols]
        r = n - len(cols)
        zr = model.add_var(_minor_name("re", cols))
        zi = model.add_var(_minor_name("im", cols))
        if len(cols) == 2:
            c0, c1 = cols
            p_re, p_im = _cmul_terms(u[r][c0], u[r + 1][c1])
            q_re, q_im = _cmul_terms(u[r][c1], u[r + 1][c0], -1.0)
            bil_re, bil_im = p_re + q_re, p_im + q_im
        else:
            bil_re, bil_im = [], []
            for j, c in enumerate(cols):
                sub = minor(cols[:j] + cols[j + 1 :])
                t_re, t_im = _cmul_terms(u[r][c], sub, 1.0 if j % 2 == 0 else -1.0)
                bil_re += t_re
                bil_im += t_im
        tag = "".join(map(str, cols))
        model.add_quadratic(f"det_re_{tag}", [(-a, x, y) for a, x, y in bil_re], [(1.0, zr)], "=", 0.0)
        model.add_quadratic(f"det_im_{tag}", [(-a, x, y) for a, x, y in bil_im], [(1.0, zi)], "=", 0.0)
        made[cols] = (zr, zi)
        return zr, zi

    return minor(tuple(range(n)))


def build_invariant_model(
    alphabet: GateAlphabet,
    depth: int,
    objective: InvariantObjective,
    linearize: bool = False,
    pad_identity: bool = False,
) -> MiqcqpModel:
    """Fixed-depth model minimizing D_CNOT or D_PE of the computational block.

    The gate-selection part may be linearized; everything downstream of
    ``Y_d`` is continuous-by-continuous and stays bilinear.
    """
    if alphabet.n_c != 4:
        raise ModelError("invariant objectives need a 4-dimensional computational block")
    if objective not in ("cnot_class", "perfect_entangler"):
        raise ModelError(f"unknown invariant objective {objective!r}")
    model = _base_model(alphabet, depth, linearize, pad_identity)
    model.metadata["objective"] = objective
    d = depth
    u = [[(model.var(y_name("re", d, k, l)), model.var(y_name("im", d, k, l))) for l in range(4)] for k in range(4)]

    # U_B = Q^dagger U Q, linear in U
    q = np.asarray(BELL_Q)
    ub = [[None] * 4 for _ in range(4)]
    for a in range(4):
        for b in range(4):
            br = model.add_var(f"UBre_{a}_{b}")
            bi = model.add_var(f"UBim_{a}_{b}")
            lin_re, lin_im = [(1.0, br)], [(1.0, bi)]
            for k in range(4):
                for l in range(4):
                    c = complex(np.conj(q[k, a]) * q[l, b])
                    ur, ui = u[k][l]
                    if c.real:
                        lin_re.append((-c.real, ur))
                        lin_im.append((-c.real, ui))
                    if c.imag:
                        lin_re.append((c.imag, ui))
                        lin_im.append((-c.imag, ur))
            model.add_linear(f"bell_re_{a}_{b}", lin_re, "=", 0.0)
            model.add_linear(f"bell_im_{a}_{b}", lin_im, "=", 0.0)
            ub[a][b] = (br, bi)

    # m_U = U_B^T U_B
    mm = [[None] * 4 for _ in range(4)]
    for a in range(4):
        for b in range(4):
            mr = model.add_var(f"mre_{a}_{b}")
            mi = model.add_var(f"mim_{a}_{b}")
            bil_re, bil_im = [], []
            for c in range(4):
                t_re, t_im = _cmul_terms(ub[c][a], ub[c][b], -1.0)
                bil_re += t_re
                bil_im += t_im
            model.add_quadratic(f"makhlin_re_{a}_{b}", bil_re, [(1.0, mr)], "=", 0.0)
            model.add_quadratic(f"makhlin_im_{a}_{b}", bil_im, [(1.0, mi)], "=", 0.0)
            mm[a][b] = (mr, mi)

    tr_re = model.add_var("trre", lower=-4, upper=4)
    tr_im = model.add_var("trim", lower=-4, upper=4)
    model.add_linear("trace_re", [(1.0, tr_re)] + [(-1.0, mm[a][a][0]) for a in range(4)], "=", 0.0)
    model.add_linear("trace_im", [(1.0, tr_im)] + [(-1.0, mm[a][a][1]) for a in range(4)], "=", 0.0)

    tr2 = (model.add_var("tr2re", lower=-16, upper=16), model.add_var("tr2im", lower=-16, upper=16))
    t_re, t_im = _cmul_terms((tr_re, tr_im), (tr_re, tr_im), -1.0)
    model.add_quadratic("trsq_re", t_re, [(1.0, tr2[0])], "=", 0.0)
    model.add_quadratic("trsq_im", t_im, [(1.0, tr2[1])], "=", 0.0)

    trm2 = (model.add_var("trm2re", lower=-4, upper=4), model.add_var("trm2im", lower=-4, upper=4))
    bil_re, bil_im = [], []
    for a in range(4):
        for b in range(4):
            t_re, t_im = _cmul_terms(mm[a][b], mm[b][a], -1.0)
            bil_re += t_re
            bil_im += t_im
    model.add_quadratic("trm2_re", bil_re, [(1.0, trm2[0])], "=", 0.0)
    model.add_quadratic("trm2_im", bil_im, [(1.0, trm2[1])], "=", 0.0)

    det = _encode_determinant(model, u)

    # tr^2 = 16 det w, with g1 + i g2 = w
    g1 = model.add_var("g1", lower=-_G12_BOUND, upper=_G12_BOUND)
    g2 = model.add_var("g2", lower=-_G12_BOUND, upper=_G12_BOUND)
    t_re, t_im = _cmul_terms(det, (g1, g2), -16.0)
    model.add_quadratic("div_g12_re", t_re, [(1.0, tr2[0])], "=", 0.0)
    model.add_quadratic("div_g12_im", t_im, [(1.0, tr2[1])], "=", 0.0)

    # tr^2 - tr(m^2) = 4 det v, with g3 = Re v
    g3 = model.add_var("g3", lower=-_G3_BOUND, upper=_G3_BOUND)
    g3i = model.add_var("g3im", lower=-_G3_BOUND, upper=_G3_BOUND)
    t_re, t_im = _cmul_terms(det, (g3, g3i), -4.0)
    model.add_quadratic("div_g3_re", t_re, [(1.0, tr2[0]), (-1.0, trm2[0])], "=", 0.0)
    model.add_quadratic("div_g3_im", t_im, [(1.0, tr2[1]), (-1.0, trm2[1])], "=", 0.0)

    if objective == "cnot_class":
        # g1^2 + g2^2 + (g3 - 1)^2
        model.objective = Objective(((-2.0, g3),), ((1.0, g1, g1), (1.0, g2, g2), (1.0, g3, g3)), 1.0)
    else:
        # (g1 - g3 s)^2 with s = sqrt(g1^2 + g2^2) and h = g3 s
        s = model.add_var("s_pe", lower=0.0, upper=_G12_BOUND)
        h = model.add_var("h_pe", lower=-_G3_BOUND, upper=_G3_BOUND)
        model.add_quadratic("pe_sqrt", [(1.0, s, s), (-1.0, g1, g1), (-1.0, g2, g2)], [], "=", 0.0)
        model.add_quadratic("pe_prod", [(-1.0, g3, s)], [(1.0, h)], "=", 0.0)
        model.objective = Objective((), ((1.0, g1, g1), (-2.0, g1, h), (1.0, h, h)), 0.0)
    return model


# -- witnesses ---------------------------------------------------------------


def _invariant_witness(u: np.ndarray) -> dict[str, float]:
    vals: dict[str, float] = {}
    ub = np.asarray(BELL_Q).conj().T @ u @ np.asarray(BELL_Q)
    m = ub.T @ ub
    for a in range(4):
        for b in range(4):
            vals[f"UBre_{a}_{b}"] = ub[a, b].real
            vals[f"UBim_{a}_{b}"] = ub[a, b].imag
            vals[f"mre_{a}_{b}"] = m[a, b].real
            vals[f"mim_{a}_{b}"] = m[a, b].imag
    tr = np.trace(m)
    tr2 = tr * tr
    trm2 = np.sum(m * m.T)
    vals.update(trre=tr.real, trim=tr.imag, tr2re=tr2.real, tr2im=tr2.imag, trm2re=trm2.real, trm2im=trm2.imag)

    def minors(cols):
        sub = u[4 - len(cols) :, list(cols)]
        dv = determinant(sub)
        vals[_minor_name("re", cols)] = dv.real
        vals[_minor_name("im", cols)] = dv.imag
        if len(cols) > 2:
            for j in range(len(cols)):
                minors(cols[:j] + cols[j + 1 :])

    minors((0, 1, 2, 3))
    det = complex(vals["detre_0123"], vals["detim_0123"])
    w = tr2 / (16 * det)
    v = (tr2 - trm2) / (4 * det)
    vals.update(g1=w.real, g2=w.imag, g3=v.real, g3im=v.imag)
    s = abs(w)
    vals.update(s_pe=s, h_pe=v.real * s)
    return vals


def program_assignment(
    model: MiqcqpModel,
    program: Program,
    alphabet: GateAlphabet,
    order: Order = "forward",
) -> dict[str, float]:
    """Assignment induced by evaluating ``program``; covers every model variable."""
    meta = model.metadata
    if meta.get("pad_identity"):
        alphabet = alphabet.with_identity()
    depth = meta["depth"]
    if program.depth != depth:
        raise ModelError(f"program depth {program.depth} != model depth {depth}")
    seq = program.indices if order == "forward" else program.indices[::-1]
    ys = prefix_products(program, alphabet, order)
    n, m = alphabet.n, alphabet.m
    vals: dict[str, float] = {}
    for t, y in enumerate(ys):
        for k in range(n):
            for l in range(n):
                vals[y_name("re", t, k, l)] = y[k, l].real
                vals[y_name("im", t, k, l)] = y[k, l].imag
    for t in range(1, depth + 1):
        for i in range(m):
            vals[x_name(t, i)] = 1.0 if seq[t - 1] == i else 0.0

    for v in model.vars:
        if v.name.startswith("z_"):
            _, part, t, k, l, p, i = v.name.split("_")
            t, k, l, p, i = int(t), int(k), int(l), int(p), int(i)
            if vals[x_name(t, i)] == 0.0:
                vals[v.name] = 0.0
                continue
            c = complex(alphabet.gates[i][k, p])
            yr, yi = ys[t - 1][p, l].real, ys[t - 1][p, l].imag
            vals[v.name] = c.real * yr - c.imag * yi if part == "re" else c.real * yi + c.imag * yr

    if model.has_var("g1"):
        vals.update(_invariant_witness(ys[-1][:4, :4]))
    return vals


def assignment_with_binaries(model: MiqcqpModel, binaries: Mapping[str, float], alphabet: GateAlphabet) -> dict:
    """Complete an assignment from the gate-selection binaries alone."""
    depth = model.metadata["depth"]
    m = model.metadata["m"]
    seq = []
    for t in range(1, depth + 1):
        chosen = [i for i in range(m) if round(float(binaries.get(x_name(t, i), 0.0))) == 1]
        if len(chosen) != 1:
            raise ModelError(f"step {t}: expected exactly one selected gate, got {chosen}")
        seq.append(chosen[0])
    return program_assignment(model, Program(tuple(seq)), alphabet)
