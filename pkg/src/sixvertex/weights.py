"""Statistical weights and spectral-variable bookkeeping.

The three trigonometric weights of the model are

    a(x) = sinh(x + gamma),   b(x) = sinh(x),   c = sinh(gamma),

with complex spectral argument x and fixed complex anisotropy gamma.
Everything downstream (operators, coefficients, determinants) is built
from these three functions.

Proximity of two spectral values is always measured through
|sinh(x - y)|, never |x - y|: the weights are 2*pi*i periodic and
sinh-differences are what actually appear in denominators.  Two values
with |sinh(x - y)| below COINCIDENCE_TOL are treated as coincident and
rejected wherever a division by b(x - y) follows.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

#: |sinh(x - y)| below this means "x and y coincide" for pole purposes.
COINCIDENCE_TOL = 1e-10


class PoleError(ValueError):
    """A denominator weight is coincident with zero."""


def weight_a(x: complex, gamma: complex) -> complex:
    """Weight a(x) = sinh(x + gamma)."""
    return cmath.sinh(x + gamma)


def weight_b(x: complex) -> complex:
    """Weight b(x) = sinh(x)."""
    return cmath.sinh(x)


def weight_c(gamma: complex) -> complex:
    """Weight c = sinh(gamma); constant in the spectral variable."""
    return cmath.sinh(gamma)


def is_finite(z: complex) -> bool:
    return cmath.isfinite(z)


def coincident(x: complex, y: complex, tol: float = COINCIDENCE_TOL) -> bool:
    """True when x and y are the same spectral value up to sinh-periodicity."""
    return abs(cmath.sinh(x - y)) < tol


def pole_distance(x: complex, y: complex) -> float:
    """|sinh(x - y)|, the distance that controls b(x - y) denominators."""
    return abs(cmath.sinh(x - y))


def guarded_b(x: complex, tol: float = COINCIDENCE_TOL) -> complex:
    """b(x), raising PoleError instead of returning a near-zero denominator."""
    v = cmath.sinh(x)
    if abs(v) < tol:
        raise PoleError(f"b({x}) = {v} is coincident with zero")
    return v


def guarded_a(x: complex, gamma: complex, tol: float = COINCIDENCE_TOL) -> complex:
    """a(x), raising PoleError instead of returning a near-zero denominator."""
    v = cmath.sinh(x + gamma)
    if abs(v) < tol:
        raise PoleError(f"a({x}) = {v} is coincident with zero")
    return v


@dataclass(frozen=True)
class VariableSet:
    """Ordered variables x_1..x_n plus the auxiliary x_0.

    The substitution `substituted(i)` returns the sequence with x_i
    replaced by x_0 (slot i), and the original sequence for i = 0.
    """

    xs: tuple[complex, ...]
    x0: complex

    def __post_init__(self):
        if len(self.xs) < 1:
            raise ValueError("need at least one variable")
        for z in (*self.xs, self.x0):
            if not is_finite(z):
                raise ValueError(f"non-finite spectral value {z}")
        n = len(self.xs)
        for i in range(n):
            for j in range(i + 1, n):
                if coincident(self.xs[i], self.xs[j]):
                    raise ValueError(
                        f"coincident variables x_{i+1} and x_{j+1}: "
                        f"{self.xs[i]} vs {self.xs[j]}"
                    )

    @property
    def n(self) -> int:
        return len(self.xs)

    def substituted(self, i: int) -> tuple[complex, ...]:
        """The sequence with slot i holding x_0; i = 0 leaves it unchanged."""
        if not 0 <= i <= self.n:
            raise IndexError(f"substitution index {i} out of range 0..{self.n}")
        if i == 0:
            return self.xs
        out = list(self.xs)
        out[i - 1] = self.x0
        return tuple(out)


def substitute(vs: VariableSet, i: int) -> tuple[complex, ...]:
    """Module-level alias for VariableSet.substituted."""
    return vs.substituted(i)
