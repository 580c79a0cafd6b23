"""Continuous determinant families for on-shell scalar products.

An EvalPoint fixes the free variables X = (x_1..x_n), the auxiliary
variable x_0 and the on-shell roots xb.  The coefficient vector
(K_0..K_n) of the functional relation sum_i K_i S(X_i^0) = 0 is built
here, together with its aux-swapped images K^(l) (swap x_0 <-> x_l,
then exchange entries 0 and l).  Stacking rows l = 1..n of the swapped
coefficients gives the n x n matrix V; replacing column i by -K_0^(l)
gives V_i, the Cramer matrix of the subsystem solved for S(X_i^0).

Every matrix is assembled twice, by composing swapped coefficient
vectors and independently from fully expanded entry formulas, and the
two paths are compared entrywise on each build; a mismatch raises
immediately rather than producing a silently wrong determinant.

Family f of the representation evaluates prefactor * det(V) for f = 0
and prefactor * det(V_f) for f >= 1.  Family 0 returns the scalar
product at X with x_0 a free parameter; family f returns the scalar
product at X_f^0, so the value at a target point is obtained by loading
the target coordinate into x_0 and sampling the freed slot f.  The
sampled variable drops out of the final value in both cases; that
cancellation is what the x_0-spread checks measure.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from . import linalg
from .params import Boundary, ModelParams
from .weights import (
    PoleError,
    guarded_a,
    guarded_b,
    is_finite,
    pole_distance,
    weight_a,
    weight_b,
    weight_c,
)

#: Pole clearance demanded of an EvalPoint (looser than the hard 1e-10 guard).
EVAL_SEPARATION = 1e-8
#: Determinant matrices with a larger condition estimate are rejected so the
#: caller can resample the auxiliary variable.
V_CONDITION_LIMIT = 1e10
#: Entrywise agreement required between the two assembly paths, relative to
#: the largest entry magnitude of the assembled matrix.
ASSEMBLY_TOL = 1e-12


class AssemblyMismatchError(RuntimeError):
    """The two independent matrix-assembly paths disagree."""


class NearSingularError(RuntimeError):
    """Determinant matrix too ill-conditioned at this auxiliary sample."""

    def __init__(self, condition: float):
        super().__init__(f"determinant matrix near-singular (condition {condition:.3e})")
        self.condition = condition


@dataclass(frozen=True)
class EvalPoint:
    """Free variables, auxiliary variable and on-shell roots of one evaluation."""

    xs: tuple[complex, ...]
    x0: complex
    xb: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(complex(z) for z in self.xs))
        object.__setattr__(self, "xb", tuple(complex(z) for z in self.xb))
        object.__setattr__(self, "x0", complex(self.x0))
        if len(self.xs) != len(self.xb):
            raise ValueError(f"|X| = {len(self.xs)} but |roots| = {len(self.xb)}")
        if len(self.xs) < 1:
            raise ValueError("need at least one free variable")
        for z in (*self.xs, self.x0, *self.xb):
            if not is_finite(z):
                raise ValueError(f"non-finite evaluation value {z}")
        n = len(self.xs)
        for i in range(n):
            for j in range(i + 1, n):
                if pole_distance(self.xs[i], self.xs[j]) < EVAL_SEPARATION:
                    raise ValueError("free variables not pairwise separated")

    @property
    def n(self) -> int:
        return len(self.xs)

    def z(self, k: int) -> complex:
        """Variable by substitution index: z(0) = x0, z(k) = x_k."""
        return self.x0 if k == 0 else self.xs[k - 1]

    def swap_aux(self, l: int) -> "EvalPoint":
        """The image under exchanging x_0 with x_l."""
        if not 1 <= l <= self.n:
            raise IndexError(f"swap index {l} out of range 1..{self.n}")
        xs = list(self.xs)
        piv = xs[l - 1]
        xs[l - 1] = self.x0
        return EvalPoint(tuple(xs), piv, self.xb)


def check_eval_point(ep: EvalPoint, params: ModelParams) -> None:
    """Reject EvalPoints whose auxiliary variable sits on a pole.

    Only x0-against-everything clearances are demanded here: the
    coefficient formulas put nothing else in a denominator.  Free
    variables landing on roots are caught when an aux swap moves them
    into the x0 slot, and by the hard division guards as a backstop.
    """
    for z in (*ep.xs, *ep.xb):
        if pole_distance(ep.x0, z) < EVAL_SEPARATION:
            raise PoleError(f"x0 = {ep.x0} coincident with {z}")
    if params.boundary is Boundary.OPEN:
        g = params.gamma
        for z in (*ep.xs, *ep.xb):
            if abs(cmath.sinh(ep.x0 + z)) < EVAL_SEPARATION:
                raise PoleError(f"x0 = {ep.x0} on a reflected pole of {z}")
            if abs(cmath.sinh(ep.x0 + z + g)) < EVAL_SEPARATION:
                raise PoleError(f"x0 = {ep.x0} on a shifted reflected pole of {z}")
        if abs(weight_b(2 * ep.x0 + g)) < EVAL_SEPARATION or abs(weight_a(2 * ep.x0, g)) < EVAL_SEPARATION:
            raise PoleError(f"x0 = {ep.x0} on a double-argument pole")


# ---------------------------------------------------------------------------
# coefficient vectors


def coeff_twisted(ep: EvalPoint, params: ModelParams) -> np.ndarray:
    """Coefficients (K_0..K_n) of the twisted functional relation."""
    check_eval_point(ep, params)
    g = params.gamma
    p1, p2 = params.phi1, params.phi2
    n = ep.n
    K = np.empty(n + 1, dtype=complex)

    def ratio(u, v):
        return weight_a(u - v, g) / guarded_b(u - v)

    pa = np.prod([weight_a(ep.x0 - m, g) for m in params.mu])
    pb = np.prod([weight_b(ep.x0 - m) for m in params.mu])
    K[0] = (p1 * pa * (np.prod([ratio(x, ep.x0) for x in ep.xs])
                       - np.prod([ratio(y, ep.x0) for y in ep.xb]))
            + p2 * pb * (np.prod([ratio(ep.x0, x) for x in ep.xs])
                         - np.prod([ratio(ep.x0, y) for y in ep.xb])))
    c = weight_c(g)
    for i in range(1, n + 1):
        xi = ep.xs[i - 1]
        rest = [x for k, x in enumerate(ep.xs) if k != i - 1]
        pai = np.prod([weight_a(xi - m, g) for m in params.mu])
        pbi = np.prod([weight_b(xi - m) for m in params.mu])
        K[i] = (p1 * c / guarded_b(ep.x0 - xi) * pai * np.prod([ratio(x, xi) for x in rest])
                + p2 * c / guarded_b(xi - ep.x0) * pbi * np.prod([ratio(xi, x) for x in rest]))
    return K


def coeff_open(ep: EvalPoint, params: ModelParams) -> np.ndarray:
    """Coefficients (K_0..K_n) of the open-boundary functional relation."""
    check_eval_point(ep, params)
    g = params.gamma
    h, hb = params.h, params.hbar
    n = ep.n
    K = np.empty(n + 1, dtype=complex)

    def plus_ratio(u, v):
        # a(u-v)/b(u-v) * b(u+v)/a(u+v)
        return (weight_a(u - v, g) / guarded_b(u - v)
                * weight_b(u + v) / guarded_a(u + v, g))

    def shift_ratio(v, u):
        # a(v-u)/b(v-u) * a(v+u+g)/b(v+u+g)
        return (weight_a(v - u, g) / guarded_b(v - u)
                * weight_a(v + u + g, g) / guarded_b(v + u + g))

    def mu_a(z):
        return np.prod([weight_a(z - m, g) * weight_a(z + m, g) for m in params.mu])

    def mu_b(z):
        return np.prod([weight_b(z - m) * weight_b(z + m) for m in params.mu])

    x0 = ep.x0
    K[0] = (weight_b(x0 + h) * weight_b(x0 - hb)
            * weight_a(2 * x0 + g, g) / guarded_b(2 * x0 + g) * mu_a(x0)
            * (np.prod([plus_ratio(x, x0) for x in ep.xs])
               - np.prod([plus_ratio(y, x0) for y in ep.xb]))
            + weight_a(x0 - h, g) * weight_a(x0 + hb, g)
            * weight_b(2 * x0) / guarded_a(2 * x0, g) * mu_b(x0)
            * (np.prod([shift_ratio(x0, x) for x in ep.xs])
               - np.prod([shift_ratio(x0, y) for y in ep.xb])))
    c = weight_c(g)
    for i in range(1, n + 1):
        xi = ep.xs[i - 1]
        rest = [x for k, x in enumerate(ep.xs) if k != i - 1]
        bracket = (weight_b(xi + h) * weight_b(xi - hb) * mu_a(xi)
                   * np.prod([plus_ratio(x, xi) for x in rest])
                   - weight_a(xi - h, g) * weight_a(xi + hb, g) * mu_b(xi)
                   * np.prod([shift_ratio(xi, x) for x in rest]))
        K[i] = (weight_a(2 * x0 + g, g) / guarded_a(x0 + xi, g)
                * c / guarded_b(x0 - xi)
                * weight_b(2 * xi) / guarded_a(2 * xi, g)
                * bracket)
    return K


def coefficients(ep: EvalPoint, params: ModelParams) -> np.ndarray:
    if params.boundary is Boundary.TWISTED:
        return coeff_twisted(ep, params)
    return coeff_open(ep, params)


def coeff_permuted(ep: EvalPoint, params: ModelParams, l: int) -> np.ndarray:
    """Row l of the extended system: swap x_0 <-> x_l, then entries 0 and l."""
    if not 1 <= l <= ep.n:
        raise IndexError(f"row index {l} out of range 1..{ep.n}")
    K = coefficients(ep.swap_aux(l), params)
    K[0], K[l] = K[l], K[0]
    return K


# ---------------------------------------------------------------------------
# expanded entry formulas (independent assembly path)


def _entry_twisted(ep: EvalPoint, params: ModelParams, alpha: int, beta: int) -> complex:
    """V entry at row alpha, column beta (1-based), fully expanded."""
    g = params.gamma
    p1, p2 = params.phi1, params.phi2

    def ratio(u, v):
        return weight_a(u - v, g) / guarded_b(u - v)

    idx = range(ep.n + 1)
    if beta == alpha:
        za = ep.z(alpha)
        pa = np.prod([weight_a(za - m, g) for m in params.mu])
        pb = np.prod([weight_b(za - m) for m in params.mu])
        return (p1 * pa * (np.prod([ratio(ep.z(k), za) for k in idx if k != alpha])
                           - np.prod([ratio(y, za) for y in ep.xb]))
                + p2 * pb * (np.prod([ratio(za, ep.z(k)) for k in idx if k != alpha])
                             - np.prod([ratio(za, y) for y in ep.xb])))
    za, zb = ep.z(alpha), ep.z(beta)
    c = weight_c(g)
    pa = np.prod([weight_a(zb - m, g) for m in params.mu])
    pb = np.prod([weight_b(zb - m) for m in params.mu])
    others = [k for k in idx if k not in (alpha, beta)]
    return (p1 * c / guarded_b(za - zb) * pa * np.prod([ratio(ep.z(k), zb) for k in others])
            + p2 * c / guarded_b(zb - za) * pb * np.prod([ratio(zb, ep.z(k)) for k in others]))


def _replaced_column_twisted(ep: EvalPoint, params: ModelParams, alpha: int) -> complex:
    """Replaced-column entry at row alpha; the same for every column index."""
    g = params.gamma
    p1, p2 = params.phi1, params.phi2

    def ratio(u, v):
        return weight_a(u - v, g) / guarded_b(u - v)

    za, x0 = ep.z(alpha), ep.x0
    c = weight_c(g)
    pa = np.prod([weight_a(x0 - m, g) for m in params.mu])
    pb = np.prod([weight_b(x0 - m) for m in params.mu])
    others = [k for k in range(1, ep.n + 1) if k != alpha]
    return (-p1 * c / guarded_b(za - x0) * pa * np.prod([ratio(ep.z(k), x0) for k in others])
            - p2 * c / guarded_b(x0 - za) * pb * np.prod([ratio(x0, ep.z(k)) for k in others]))


def _open_bracket(ep: EvalPoint, params: ModelParams, pivot: complex, ks) -> complex:
    """Common bracket of the open entries: boundary terms times k-products."""
    g = params.gamma
    h, hb = params.h, params.hbar

    def plus_ratio(u, v):
        return (weight_a(u - v, g) / guarded_b(u - v)
                * weight_b(u + v) / guarded_a(u + v, g))

    def shift_ratio(v, u):
        return (weight_a(v - u, g) / guarded_b(v - u)
                * weight_a(v + u + g, g) / guarded_b(v + u + g))

    mu_a = np.prod([weight_a(pivot - m, g) * weight_a(pivot + m, g) for m in params.mu])
    mu_b = np.prod([weight_b(pivot - m) * weight_b(pivot + m) for m in params.mu])
    return (weight_b(pivot + h) * weight_b(pivot - hb) * mu_a
            * np.prod([plus_ratio(ep.z(k), pivot) for k in ks])
            - weight_a(pivot - h, g) * weight_a(pivot + hb, g) * mu_b
            * np.prod([shift_ratio(pivot, ep.z(k)) for k in ks]))


def _entry_open(ep: EvalPoint, params: ModelParams, alpha: int, beta: int) -> complex:
    """Open-chain V entry at row alpha, column beta (1-based), fully expanded."""
    g = params.gamma
    h, hb = params.h, params.hbar
    idx = range(ep.n + 1)
    if beta == alpha:
        za = ep.z(alpha)

        def plus_ratio(u, v):
            return (weight_a(u - v, g) / guarded_b(u - v)
                    * weight_b(u + v) / guarded_a(u + v, g))

        def shift_ratio(v, u):
            return (weight_a(v - u, g) / guarded_b(v - u)
                    * weight_a(v + u + g, g) / guarded_b(v + u + g))

        mu_a = np.prod([weight_a(za - m, g) * weight_a(za + m, g) for m in params.mu])
        mu_b = np.prod([weight_b(za - m) * weight_b(za + m) for m in params.mu])
        ks = [k for k in idx if k != alpha]
        return (weight_b(za + h) * weight_b(za - hb)
                * weight_a(2 * za + g, g) / guarded_b(2 * za + g) * mu_a
                * (np.prod([plus_ratio(ep.z(k), za) for k in ks])
                   - np.prod([plus_ratio(y, za) for y in ep.xb]))
                + weight_a(za - h, g) * weight_a(za + hb, g)
                * weight_b(2 * za) / guarded_a(2 * za, g) * mu_b
                * (np.prod([shift_ratio(za, ep.z(k)) for k in ks])
                   - np.prod([shift_ratio(za, y) for y in ep.xb])))
    za, zb = ep.z(alpha), ep.z(beta)
    others = [k for k in idx if k not in (alpha, beta)]
    return (weight_a(2 * za + g, g) / guarded_a(za + zb, g)
            * weight_c(g) / guarded_b(za - zb)
            * weight_b(2 * zb) / guarded_a(2 * zb, g)
            * _open_bracket(ep, params, zb, others))


def _replaced_column_open(ep: EvalPoint, params: ModelParams, alpha: int) -> complex:
    """Open replaced-column entry, with the Cramer sign made explicit."""
    g = params.gamma
    za, x0 = ep.z(alpha), ep.x0
    others = [k for k in range(1, ep.n + 1) if k != alpha]
    return -(weight_a(2 * za + g, g) / guarded_a(za + x0, g)
             * weight_c(g) / guarded_b(za - x0)
             * weight_b(2 * x0) / guarded_a(2 * x0, g)
             * _open_bracket(ep, params, x0, others))


def _entry(ep, params, alpha, beta):
    if params.boundary is Boundary.TWISTED:
        return _entry_twisted(ep, params, alpha, beta)
    return _entry_open(ep, params, alpha, beta)


def _replaced_column(ep, params, alpha):
    if params.boundary is Boundary.TWISTED:
        return _replaced_column_twisted(ep, params, alpha)
    return _replaced_column_open(ep, params, alpha)


# ---------------------------------------------------------------------------
# matrix assembly (both paths, cross-checked)


def _cross_check(expanded: np.ndarray, composed: np.ndarray, what: str) -> None:
    scale = max(float(np.max(np.abs(expanded))), float(np.max(np.abs(composed))), 1e-300)
    err = float(np.max(np.abs(expanded - composed)))
    if err > ASSEMBLY_TOL * scale:
        raise AssemblyMismatchError(
            f"{what}: expanded-entry and composed assemblies differ by "
            f"{err:.3e} against scale {scale:.3e}"
        )


def _composed_rows(ep: EvalPoint, params: ModelParams) -> np.ndarray:
    rows = np.empty((ep.n, ep.n + 1), dtype=complex)
    for l in range(1, ep.n + 1):
        rows[l - 1] = coeff_permuted(ep, params, l)
    return rows


def build_V(ep: EvalPoint, params: ModelParams) -> np.ndarray:
    """The n x n matrix of the subsystem, rows l = 1..n, columns 1..n."""
    check_eval_point(ep, params)
    n = ep.n
    expanded = np.empty((n, n), dtype=complex)
    for al in range(1, n + 1):
        for be in range(1, n + 1):
            expanded[al - 1, be - 1] = _entry(ep, params, al, be)
    composed = _composed_rows(ep, params)[:, 1:]
    _cross_check(expanded, composed, "V")
    return expanded


def build_Vi(ep: EvalPoint, params: ModelParams, i: int) -> np.ndarray:
    """V with column i replaced by the negated zeroth swapped coefficients."""
    if not 1 <= i <= ep.n:
        raise IndexError(f"family index {i} out of range 1..{ep.n}")
    check_eval_point(ep, params)
    n = ep.n
    expanded = np.empty((n, n), dtype=complex)
    for al in range(1, n + 1):
        for be in range(1, n + 1):
            if be == i:
                expanded[al - 1, be - 1] = _replaced_column(ep, params, al)
            else:
                expanded[al - 1, be - 1] = _entry(ep, params, al, be)
    rows = _composed_rows(ep, params)
    composed = rows[:, 1:].copy()
    composed[:, i - 1] = -rows[:, 0]
    _cross_check(expanded, composed, f"V_{i}")
    return expanded


# ---------------------------------------------------------------------------
# prefactors and scalar-product values


def prefactor_twisted(ep: EvalPoint, params: ModelParams) -> complex:
    """Multiplicative factor accompanying det(V) in the twisted family."""
    p = params.phi1 ** (-ep.n)
    for j in range(ep.n):
        p *= weight_b(ep.x0 - ep.xs[j]) / guarded_b(ep.xb[j] - ep.x0)
        for m in params.mu:
            p *= weight_b(ep.xb[j] - m)
    return complex(p)


def prefactor_open(ep: EvalPoint, params: ModelParams) -> complex:
    """Multiplicative factor accompanying det(V) in the open family.

    Note the double-argument denominator runs over the free variables
    x_j, not the roots; the pair product over roots is empty for n = 1.
    """
    g = params.gamma
    p = 1.0 + 0.0j
    for j in range(ep.n):
        for k in range(j + 1, ep.n):
            p *= weight_a(ep.xb[j] + ep.xb[k] + g, g) / guarded_b(ep.xb[j] + ep.xb[k])
    for j in range(ep.n):
        xj, yj = ep.xs[j], ep.xb[j]
        p *= (weight_b(ep.x0 - xj) * weight_a(ep.x0 + xj, g)
              / (guarded_b(ep.x0 - yj) * guarded_a(ep.x0 + yj, g)))
        p *= weight_b(2 * yj) / guarded_a(2 * xj + g, g)
        p *= weight_a(yj - params.h, g) / guarded_b(yj - params.hbar)
        for m in params.mu:
            p *= weight_b(yj - m) * weight_b(yj + m)
    return complex(p)


def prefactor(ep: EvalPoint, params: ModelParams) -> complex:
    if params.boundary is Boundary.TWISTED:
        return prefactor_twisted(ep, params)
    return prefactor_open(ep, params)


def family_determinant(ep: EvalPoint, params: ModelParams, family: int) -> complex:
    """det(V) for family 0, det(V_family) otherwise, with a condition gate."""
    if not 0 <= family <= ep.n:
        raise IndexError(f"family {family} out of range 0..{ep.n}")
    m = build_V(ep, params) if family == 0 else build_Vi(ep, params, family)
    cond = linalg.condition_estimate(m)
    if not np.isfinite(cond) or cond > V_CONDITION_LIMIT:
        raise NearSingularError(cond)
    return linalg.lu_determinant(m)


def scalar_product_det(ep: EvalPoint, params: ModelParams, family: int) -> complex:
    """Determinant-family value: S(X) for family 0, S(X_f^0) for family f."""
    return prefactor(ep, params) * family_determinant(ep, params, family)


def family_scalar_product(xs, xb, params: ModelParams, family: int, free_value: complex) -> complex:
    """Scalar product at the target point X through one chosen family.

    Family 0 treats free_value as the auxiliary variable directly.
    Family f >= 1 loads the target coordinate x_f into the auxiliary
    slot and frees slot f to free_value, so the returned S(X_f^0)
    equals the scalar product at the original target point.
    """
    xs = tuple(xs)
    if family == 0:
        return scalar_product_det(EvalPoint(xs, free_value, tuple(xb)), params, 0)
    if not 1 <= family <= len(xs):
        raise IndexError(f"family {family} out of range 0..{len(xs)}")
    moved = list(xs)
    aux = moved[family - 1]
    moved[family - 1] = free_value
    return scalar_product_det(EvalPoint(tuple(moved), aux, tuple(xb)), params, family)


def funcrel_residual(ep: EvalPoint, params: ModelParams, sp_values) -> complex:
    """Normalized residual of the functional relation for given S values."""
    sp = np.asarray(sp_values, dtype=complex)
    if sp.shape != (ep.n + 1,):
        raise ValueError(f"expected {ep.n + 1} scalar-product values, got {sp.shape}")
    K = coefficients(ep, params)
    terms = K * sp
    scale = float(np.sum(np.abs(terms)))
    if scale == 0.0:
        return 0.0 + 0.0j
    return complex(np.sum(terms) / scale)


def coefficient_system(ep: EvalPoint, params: ModelParams) -> np.ndarray:
    """The (n+1) x (n+1) stack of coefficient rows, l = 0..n."""
    n = ep.n
    M = np.empty((n + 1, n + 1), dtype=complex)
    M[0] = coefficients(ep, params)
    for l in range(1, n + 1):
        M[l] = coeff_permuted(ep, params, l)
    return M


def singular_value_ratio(m: np.ndarray) -> float:
    """min/max singular value; 0 for an exactly rank-deficient matrix."""
    sv = np.linalg.svd(np.asarray(m, dtype=complex), compute_uv=False)
    if sv[0] == 0.0:
        return 0.0
    return float(sv[-1] / sv[0])
