"""Model parameter container shared by every layer."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .weights import COINCIDENCE_TOL, is_finite, weight_c

#: Dense 2^L operators; beyond this the matrices stop being desk scale.
MAX_SITES = 12


class Boundary(str, Enum):
    TWISTED = "twisted"
    OPEN = "open"


@dataclass(frozen=True)
class ModelParams:
    """All fixed parameters of one model instance.

    Twisted chains carry the diagonal twist pair (phi1, phi2); open
    chains carry the boundary fields (h, hbar).  The inhomogeneities mu
    are fixed per instance and of length L.
    """

    boundary: Boundary
    L: int
    n: int
    gamma: complex
    mu: tuple[complex, ...]
    phi1: complex | None = None
    phi2: complex | None = None
    h: complex | None = None
    hbar: complex | None = None

    def __post_init__(self):
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        object.__setattr__(self, "mu", tuple(complex(m) for m in self.mu))
        if not 1 <= self.L <= MAX_SITES:
            raise ValueError(f"L = {self.L} outside 1..{MAX_SITES}")
        if not 1 <= self.n <= self.L:
            raise ValueError(f"need 1 <= n <= L, got n = {self.n}, L = {self.L}")
        if len(self.mu) != self.L:
            raise ValueError(f"expected {self.L} inhomogeneities, got {len(self.mu)}")
        for name, z in [("gamma", self.gamma), *[(f"mu[{i}]", m) for i, m in enumerate(self.mu)]]:
            if not is_finite(complex(z)):
                raise ValueError(f"non-finite parameter {name} = {z}")
        if abs(weight_c(self.gamma)) < COINCIDENCE_TOL:
            raise ValueError(f"degenerate anisotropy: sinh(gamma) ~ 0 for gamma = {self.gamma}")
        if self.boundary is Boundary.TWISTED:
            if self.phi1 is None or self.phi2 is None:
                raise ValueError("twisted boundary requires phi1 and phi2")
            for name, z in [("phi1", self.phi1), ("phi2", self.phi2)]:
                if not is_finite(complex(z)) or z == 0:
                    raise ValueError(f"twist {name} must be finite and nonzero, got {z}")
        else:
            if self.h is None or self.hbar is None:
                raise ValueError("open boundary requires h and hbar")
            for name, z in [("h", self.h), ("hbar", self.hbar)]:
                if not is_finite(complex(z)):
                    raise ValueError(f"non-finite boundary field {name} = {z}")

    @classmethod
    def twisted(cls, L, n, gamma, mu, phi1, phi2) -> "ModelParams":
        return cls(Boundary.TWISTED, L, n, complex(gamma), tuple(mu),
                   phi1=complex(phi1), phi2=complex(phi2))

    @classmethod
    def open_chain(cls, L, n, gamma, mu, h, hbar) -> "ModelParams":
        return cls(Boundary.OPEN, L, n, complex(gamma), tuple(mu),
                   h=complex(h), hbar=complex(hbar))
