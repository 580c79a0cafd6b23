"""Dense complex LU factorization with partial pivoting.

Hand-rolled rather than LAPACK-backed on purpose: determinants and solve
ratios feed bit-reproducible reports, so the elimination order is fixed
and single-threaded.  All matrices passing through here are small (the
magnon count n, or desk-scale verification cases), so the plain-loop
cost is irrelevant.
"""

from __future__ import annotations

import numpy as np


class SingularMatrixError(ValueError):
    """Linear system is numerically singular; carries a condition estimate."""

    def __init__(self, condition: float):
        super().__init__(f"matrix numerically singular (condition estimate {condition:.3e})")
        self.condition = condition


#: Solves refuse systems whose 1-norm condition estimate exceeds this.
CONDITION_LIMIT = 1e12


def _as_square(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def lu_factor(m) -> tuple[np.ndarray, np.ndarray, int]:
    """Doolittle LU with partial pivoting.

    Returns (packed LU, row permutation, permutation sign).  A zero pivot
    column is left in place (its eliminations are skipped), so singular
    input factors without error and simply carries zero pivots.
    """
    lu = _as_square(m).copy()
    n = lu.shape[0]
    perm = np.arange(n)
    sign = 1
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if p != k:
            lu[[k, p], :] = lu[[p, k], :]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        piv = lu[k, k]
        if piv == 0:
            continue
        for i in range(k + 1, n):
            f = lu[i, k] / piv
            lu[i, k] = f
            lu[i, k + 1:] -= f * lu[k, k + 1:]
    return lu, perm, sign


def lu_determinant(m) -> complex:
    """Determinant via LU; an exact-zero pivot chain yields 0, not an error."""
    lu, _, sign = lu_factor(m)
    det = complex(sign)
    for k in range(lu.shape[0]):
        det *= lu[k, k]
    return complex(det)


def _substitute(lu: np.ndarray, perm: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = lu.shape[0]
    y = b[perm].astype(complex)
    for i in range(1, n):
        y[i] -= lu[i, :i] @ y[:i]
    x = y
    for i in range(n - 1, -1, -1):
        if i + 1 < n:
            x[i] -= lu[i, i + 1:] @ x[i + 1:]
        x[i] /= lu[i, i]
    return x


def condition_estimate(m) -> float:
    """1-norm condition estimate via explicit inverse columns (small n only)."""
    a = _as_square(m)
    n = a.shape[0]
    lu, perm, _ = lu_factor(a)
    if np.any(np.diagonal(lu) == 0):
        return np.inf
    inv_cols = np.empty((n, n), dtype=complex)
    eye = np.eye(n, dtype=complex)
    for j in range(n):
        inv_cols[:, j] = _substitute(lu, perm, eye[:, j])
    norm_a = float(np.max(np.sum(np.abs(a), axis=0)))
    norm_inv = float(np.max(np.sum(np.abs(inv_cols), axis=0)))
    cond = norm_a * norm_inv
    return cond if np.isfinite(cond) else np.inf


def lu_solve(m, rhs) -> np.ndarray:
    """Solve m x = rhs, refusing numerically singular systems.

    Raises SingularMatrixError (carrying the condition estimate) when the
    1-norm condition estimate exceeds CONDITION_LIMIT or a pivot vanishes.
    """
    a = _as_square(m)
    b = np.asarray(rhs, dtype=complex)
    if b.shape != (a.shape[0],):
        raise ValueError(f"rhs shape {b.shape} does not match matrix {a.shape}")
    cond = condition_estimate(a)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise SingularMatrixError(cond)
    lu, perm, _ = lu_factor(a)
    return _substitute(lu, perm, b)
