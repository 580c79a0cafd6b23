"""Lattice operators on the auxiliary space tensored with L spin-1/2 sites.

Basis conventions
-----------------
The auxiliary space is the leading tensor leg; site 1 is the most
significant bit of the quantum-space index and spin-up maps to bit 0,
so the pseudo-vacuum (all spins up) is basis vector 0.  Ordered products
over sites run with the ascending-index factor leftmost; the reversed
variant appears in the first half of the double-row product.  Both
orderings are pinned by the algebra-relation residual tests, not assumed.

Open boundaries
---------------
`double_row_monodromy` returns the reflection-algebra generator

    U_0(x) = [R_0L(x - mu_L) .. R_01(x - mu_1)] K_0(x) [R_01(x + mu_1) .. R_0L(x + mu_L)],

whose blocks build Bethe vectors and scalar products and which satisfies
the quadratic reflection-algebra relation.  Passing dressed=True
left-multiplies the dual reflection matrix on the auxiliary leg; the
partial trace of that dressed object is the commuting open transfer
matrix.  The dressing is a diagonal scalar on each auxiliary block, so
it rescales B/C without changing Bethe-vector directions.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .params import Boundary, ModelParams
from .weights import weight_a, weight_b, weight_c


def r_matrix(x: complex, gamma: complex) -> np.ndarray:
    """The 4x4 six-vertex weight matrix; exactly six nonzero entries."""
    a, b, c = weight_a(x, gamma), weight_b(x), weight_c(gamma)
    return np.array(
        [[a, 0, 0, 0],
         [0, b, c, 0],
         [0, c, b, 0],
         [0, 0, 0, a]],
        dtype=complex,
    )


def k_matrix(x: complex, h: complex) -> np.ndarray:
    """Diagonal boundary matrix diag(sinh(h+x), sinh(h-x))."""
    return np.diag([cmath.sinh(h + x), cmath.sinh(h - x)]).astype(complex)


def k_matrix_dual(x: complex, hbar: complex, gamma: complex) -> np.ndarray:
    """Dual boundary matrix diag(sinh(hbar-x-gamma), sinh(hbar+x+gamma))."""
    return np.diag([cmath.sinh(hbar - x - gamma), cmath.sinh(hbar + x + gamma)]).astype(complex)


def k_matrices(x: complex, params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """Boundary matrix and its dual for an open-chain instance."""
    if params.boundary is not Boundary.OPEN:
        raise ValueError("k_matrices requires open-boundary parameters")
    return k_matrix(x, params.h), k_matrix_dual(x, params.hbar, params.gamma)


def embed_two_site(m4: np.ndarray, i: int, j: int, num: int) -> np.ndarray:
    """Embed a 4x4 operator acting on legs (i, j) of `num` two-dimensional legs."""
    if i == j or not (0 <= i < num and 0 <= j < num):
        raise ValueError(f"bad legs ({i}, {j}) for {num} spaces")
    big = np.kron(np.asarray(m4, dtype=complex), np.eye(2 ** (num - 2), dtype=complex))
    t = big.reshape([2] * (2 * num))
    src = [i, j] + [k for k in range(num) if k not in (i, j)]
    perm = [src.index(s) for s in range(num)]
    t = t.transpose(perm + [num + p for p in perm])
    return np.ascontiguousarray(t.reshape(2 ** num, 2 ** num))


def embed_one_site(m2: np.ndarray, i: int, num: int) -> np.ndarray:
    """Embed a 2x2 operator acting on leg i of `num` two-dimensional legs."""
    if not 0 <= i < num:
        raise ValueError(f"bad leg {i} for {num} spaces")
    big = np.kron(np.asarray(m2, dtype=complex), np.eye(2 ** (num - 1), dtype=complex))
    t = big.reshape([2] * (2 * num))
    src = [i] + [k for k in range(num) if k != i]
    perm = [src.index(s) for s in range(num)]
    t = t.transpose(perm + [num + p for p in perm])
    return np.ascontiguousarray(t.reshape(2 ** num, 2 ** num))


def monodromy(x: complex, params: ModelParams) -> np.ndarray:
    """Ordered product of R_0j(x - mu_j) over sites, site-1 factor leftmost."""
    num = params.L + 1
    m = embed_two_site(r_matrix(x - params.mu[0], params.gamma), 0, 1, num)
    for j in range(2, params.L + 1):
        m = m @ embed_two_site(r_matrix(x - params.mu[j - 1], params.gamma), 0, j, num)
    return m


def double_row_monodromy(x: complex, params: ModelParams, dressed: bool = False) -> np.ndarray:
    """Double-row product for open boundaries; see the module docstring.

    dressed=False (default): the reflection-algebra generator U_0(x).
    dressed=True: the dual boundary matrix is applied on the auxiliary
    leg, giving the object whose auxiliary trace is the transfer matrix.
    """
    if params.boundary is not Boundary.OPEN:
        raise ValueError("double_row_monodromy requires open-boundary parameters")
    num = params.L + 1
    g = params.gamma
    m = embed_two_site(r_matrix(x - params.mu[params.L - 1], g), 0, params.L, num)
    for j in range(params.L - 1, 0, -1):
        m = m @ embed_two_site(r_matrix(x - params.mu[j - 1], g), 0, j, num)
    m = m @ embed_one_site(k_matrix(x, params.h), 0, num)
    for j in range(1, params.L + 1):
        m = m @ embed_two_site(r_matrix(x + params.mu[j - 1], g), 0, j, num)
    if dressed:
        m = embed_one_site(k_matrix_dual(x, params.hbar, g), 0, num) @ m
    return m


@dataclass(frozen=True)
class OperatorQuad:
    """The four auxiliary-space blocks of a (double-row) monodromy matrix."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray


def extract_quad(m: np.ndarray) -> OperatorQuad:
    """Split a 2d x 2d matrix into its four d x d auxiliary-space blocks."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
        raise ValueError(f"expected an even square matrix, got shape {m.shape}")
    d = m.shape[0] // 2
    return OperatorQuad(A=m[:d, :d], B=m[:d, d:], C=m[d:, :d], D=m[d:, d:])


def operator_quad(x: complex, params: ModelParams) -> OperatorQuad:
    """A/B/C/D blocks at spectral value x for either boundary type."""
    if params.boundary is Boundary.TWISTED:
        return extract_quad(monodromy(x, params))
    return extract_quad(double_row_monodromy(x, params))


def pseudo_vacuum(L: int) -> np.ndarray:
    """All-spins-up reference state."""
    v = np.zeros(2 ** L, dtype=complex)
    v[0] = 1.0
    return v


def bethe_vector(xs, params: ModelParams) -> np.ndarray:
    """Product of creation blocks B(x_i) applied to the pseudo-vacuum.

    The result is order-independent up to roundoff because the B blocks
    mutually commute; the product is applied rightmost factor first.
    """
    xs = tuple(xs)
    if len(xs) != params.n:
        raise ValueError(f"expected {params.n} magnon rapidities, got {len(xs)}")
    cache: dict[complex, OperatorQuad] = {}
    v = pseudo_vacuum(params.L)
    for z in reversed(xs):
        if z not in cache:
            cache[z] = operator_quad(z, params)
        v = cache[z].B @ v
    return v


def oracle_scalar_product(xc, xb, params: ModelParams) -> complex:
    """Scalar product by direct operator products.

    Applies the B blocks at xb to the vacuum, then the C blocks at xc
    (reversed product, innermost factor first), and pairs with the
    transpose dual of the vacuum, i.e. reads off the all-up amplitude.
    """
    xc, xb = tuple(xc), tuple(xb)
    if len(xc) != len(xb):
        raise ValueError(f"argument lists differ in length: {len(xc)} vs {len(xb)}")
    cache: dict[complex, OperatorQuad] = {}

    def quad(z):
        if z not in cache:
            cache[z] = operator_quad(z, params)
        return cache[z]

    v = pseudo_vacuum(params.L)
    for z in reversed(xb):
        v = quad(z).B @ v
    for z in xc:
        v = quad(z).C @ v
    return complex(v[0])


def transfer_matrix(x: complex, params: ModelParams) -> np.ndarray:
    """Commuting transfer matrix; on-shell Bethe vectors are its eigenvectors.

    Twisted: phi1*A(x) + phi2*D(x).  Open: the auxiliary trace of the
    dressed double-row product, i.e. the dual-boundary weights multiply
    the diagonal blocks.
    """
    if params.boundary is Boundary.TWISTED:
        q = operator_quad(x, params)
        return params.phi1 * q.A + params.phi2 * q.D
    q = extract_quad(double_row_monodromy(x, params, dressed=True))
    return q.A + q.D
