"""Shared parameter factories for the test suite."""

import numpy as np
import pytest

from sixvertex.params import ModelParams


def desk_params(boundary: str, L: int, n: int, seed: int) -> ModelParams:
    """Generic desk-scale parameter draw, deterministic in the seed."""
    rng = np.random.default_rng([seed, L, n, 0xFACE])
    gamma = complex(0.45 + 0.25 * rng.uniform(), 0.2 * rng.uniform() - 0.1)
    mu = [complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.25, 0.25)) for _ in range(L)]
    if boundary == "twisted":
        phi1 = complex(1.0 + 0.3 * rng.uniform(), 0.3 * (rng.uniform() - 0.5))
        phi2 = complex(1.6 + 0.5 * rng.uniform(), 0.4 * (rng.uniform() - 0.5))
        return ModelParams.twisted(L, n, gamma, mu, phi1, phi2)
    h = complex(0.55 + 0.5 * rng.uniform(), 0.5 * (rng.uniform() - 0.5))
    hbar = complex(0.6 + 0.5 * rng.uniform(), 0.5 * (rng.uniform() - 0.5))
    return ModelParams.open_chain(L, n, gamma, mu, h, hbar)


@pytest.fixture
def rng():
    return np.random.default_rng(20250811)
