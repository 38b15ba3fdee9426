"""Dense complex matrix helpers for the small (<= 8x8) operators used everywhere.

Matrices are plain ``numpy`` complex128 arrays. The functions here add the
shape checks and conventions the rest of the package relies on; the one
piece not delegated to numpy is :func:`determinant`, which uses first-row
cofactor expansion so that it agrees term-for-term with the determinant
encoding in the optimization model.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError

MAX_LAPLACE_DIM = 8


def as_matrix(data, *, copy: bool = True) -> np.ndarray:
    """Coerce ``data`` to a finite 2-D complex128 array."""
    a = np.array(data, dtype=np.complex128, copy=copy)
    if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN or Inf entries")
    return a


def frozen(a: np.ndarray) -> np.ndarray:
    """Return a read-only view of ``a``."""
    v = a.view()
    v.setflags(write=False)
    return v


def _require_square(a: np.ndarray, what: str = "matrix") -> int:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{what} must be square, got shape {a.shape}")
    return a.shape[0]


def multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def direct_sum(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Block-diagonal ``a (+) b`` with ``a`` leading; off-blocks are exact zeros."""
    na = _require_square(a, "leading block")
    nb = _require_square(b, "trailing block")
    out = np.zeros((na + nb, na + nb), dtype=np.complex128)
    out[:na, :na] = a
    out[na:, na:] = b
    return out


def frobenius_norm_sq(a: np.ndarray) -> float:
    """Sum of squared moduli of the entries."""
    return float(np.sum(a.real**2 + a.imag**2))


def determinant(a: np.ndarray) -> complex:
    """Determinant by recursive cofactor expansion along the first row.

    Minors are memoized by their column set, so an 8x8 input costs
    ``8 * 2**7`` products instead of ``8!``.
    """
    n = _require_square(a)
    if n > MAX_LAPLACE_DIM:
        raise DimensionError(f"Laplace determinant limited to {MAX_LAPLACE_DIM}x{MAX_LAPLACE_DIM}")
    rows = [[complex(x) for x in row] for row in a]
    cache: dict[tuple[int, ...], complex] = {}

    def minor(cols: tuple[int, ...]) -> complex:
        # rows used are the last len(cols) rows
        size = len(cols)
        r = n - size
        if size == 1:
            return rows[r][cols[0]]
        if size == 2:
            c0, c1 = cols
            return rows[r][c0] * rows[r + 1][c1] - rows[r][c1] * rows[r + 1][c0]
        hit = cache.get(cols)
        if hit is not None:
            return hit
        total = 0j
        for j, c in enumerate(cols):
            entry = rows[r][c]
            if entry == 0:
                continue
            sub = minor(cols[:j] + cols[j + 1 :])
            total += entry * sub if j % 2 == 0 else -entry * sub
        cache[cols] = total
        return total

    return minor(tuple(range(n)))


def unitarity_residual(a: np.ndarray) -> float:
    """Max-entry deviation of ``a^dagger a`` from the identity."""
    n = _require_square(a)
    return float(np.max(np.abs(dagger(a) @ a - np.eye(n))))


def is_unitary(a: np.ndarray, tol: float = 1e-10) -> bool:
    return unitarity_residual(a) <= tol


def max_abs_diff(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)))


# -- matrix literal files: JSON array-of-arrays of [re, im] pairs --------------


def matrix_to_literal(a: np.ndarray) -> list[list[list[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(a)]


def matrix_from_literal(rows: Sequence[Sequence]) -> np.ndarray:
    """Parse ``[[[re, im], ...], ...]``. Bare real numbers are accepted too."""
    out = []
    for row in rows:
        parsed = []
        for entry in row:
            if isinstance(entry, (int, float)):
                parsed.append(complex(entry))
            elif isinstance(entry, (list, tuple)) and len(entry) == 2:
                parsed.append(complex(float(entry[0]), float(entry[1])))
            else:
                raise ValueError(f"bad matrix entry {entry!r}; expected [re, im]")
        out.append(parsed)
    widths = {len(r) for r in out}
    if len(widths) != 1:
        raise DimensionError("ragged matrix literal")
    return as_matrix(out)


def load_matrix(path: str | Path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return matrix_from_literal(json.load(fh))


def save_matrix(a: np.ndarray, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_literal(a), fh)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def block_offdiag_max(a: np.ndarray, split: int) -> float:
    """Largest entry magnitude in the two off-diagonal blocks of a square matrix
    partitioned as ``[:split] | [split:]``."""
    n = _require_square(a)
    if not 0 < split < n:
        return 0.0
    upper = np.abs(a[:split, split:])
    lower = np.abs(a[split:, :split])
    return float(max(upper.max(), lower.max()))


def stack_products(gates: Iterable[np.ndarray], start: np.ndarray) -> list[np.ndarray]:
    """Prefix products ``Y_t = G_t ... G_1 start`` (left multiplication)."""
    out = [start]
    for g in gates:
        out.append(g @ out[-1])
    return out
