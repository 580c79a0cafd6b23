"""ModelParams validation."""

import math

import pytest

from sixvertex.params import Boundary, ModelParams

GOOD = dict(L=3, n=2, gamma=0.5 + 0.1j, mu=[0.1, -0.2, 0.3])


def test_twisted_roundtrip():
    p = ModelParams.twisted(**GOOD, phi1=1.0, phi2=2.0)
    assert p.boundary is Boundary.TWISTED
    assert p.mu == (0.1 + 0j, -0.2 + 0j, 0.3 + 0j)


def test_open_roundtrip():
    p = ModelParams.open_chain(**GOOD, h=0.8, hbar=0.6)
    assert p.boundary is Boundary.OPEN


@pytest.mark.parametrize("bad", [0, 13])
def test_site_count_bounds(bad):
    with pytest.raises(ValueError):
        ModelParams.twisted(L=bad, n=1, gamma=0.5, mu=[0.1] * max(bad, 1), phi1=1, phi2=2)


def test_magnon_count_bounds():
    with pytest.raises(ValueError, match="n <= L"):
        ModelParams.twisted(L=2, n=3, gamma=0.5, mu=[0.1, 0.2], phi1=1, phi2=2)
    with pytest.raises(ValueError):
        ModelParams.twisted(L=2, n=0, gamma=0.5, mu=[0.1, 0.2], phi1=1, phi2=2)


def test_inhomogeneity_length_checked():
    with pytest.raises(ValueError, match="inhomogeneities"):
        ModelParams.twisted(L=3, n=1, gamma=0.5, mu=[0.1], phi1=1, phi2=2)


@pytest.mark.parametrize("gamma", [0.0, 1j * math.pi])
def test_degenerate_anisotropy_rejected(gamma):
    with pytest.raises(ValueError, match="anisotropy"):
        ModelParams.twisted(L=1, n=1, gamma=gamma, mu=[0.1], phi1=1, phi2=2)


def test_twists_must_be_nonzero():
    with pytest.raises(ValueError, match="phi2"):
        ModelParams.twisted(L=1, n=1, gamma=0.5, mu=[0.1], phi1=1, phi2=0)
    with pytest.raises(ValueError, match="phi1 and phi2"):
        ModelParams(Boundary.TWISTED, 1, 1, 0.5, (0.1,), phi2=2)


def test_open_requires_boundary_fields():
    with pytest.raises(ValueError, match="h and hbar"):
        ModelParams(Boundary.OPEN, 1, 1, 0.5, (0.1,), h=0.8)


def test_non_finite_rejected():
    with pytest.raises(ValueError, match="mu"):
        ModelParams.twisted(L=1, n=1, gamma=0.5, mu=[complex("nan")], phi1=1, phi2=2)
