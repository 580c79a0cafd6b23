"""Weight functions, coincidence measure and variable-set substitution."""

import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sixvertex.weights import (
    VariableSet,
    coincident,
    substitute,
    weight_a,
    weight_b,
    weight_c,
)

# frozen from a 30-digit evaluation of sinh at the rational arguments
SINH_1_5 = 2.1292794550948173
SINH_0_5 = 0.5210953054937474

boxed = st.builds(
    complex,
    st.floats(min_value=-2.0, max_value=2.0, allow_nan=False),
    st.floats(min_value=-2.0, max_value=2.0, allow_nan=False),
)


class TestWeightA:
    def test_at_zero_equals_c(self):
        g = 0.37 + 0.21j
        assert weight_a(0, g) == weight_c(g)

    def test_zero_at_minus_gamma(self):
        g = 0.37 + 0.21j
        assert abs(weight_a(-g, g)) < 1e-15

    def test_high_precision_value(self):
        assert abs(weight_a(1.0 + 0j, 0.5 + 0j) - SINH_1_5) < 1e-15


class TestWeightB:
    def test_zero(self):
        assert weight_b(0) == 0

    def test_imaginary_period(self):
        assert abs(weight_b(1j * math.pi)) < 1e-15

    def test_matches_exponential_form(self):
        x = 0.7 + 0.3j
        expected = (cmath.exp(x) - cmath.exp(-x)) / 2
        assert abs(weight_b(x) - expected) < 1e-15

    def test_odd(self):
        x = 0.83 - 0.44j
        assert weight_b(-x) == -weight_b(x)


class TestWeightC:
    def test_free_fermion_point(self):
        assert weight_c(0) == 0

    def test_equals_a_at_zero(self):
        g = -0.8 + 1.1j
        assert weight_c(g) == weight_a(0, g)

    def test_high_precision_value(self):
        assert abs(weight_c(0.5 + 0j) - SINH_0_5) < 1e-15


@given(x=boxed, g=boxed)
@settings(max_examples=200, deadline=None)
def test_addition_theorem(x, g):
    # a(x) - b(x) cosh(g) = c cosh(x)
    lhs = weight_a(x, g) - weight_b(x) * cmath.cosh(g)
    rhs = weight_c(g) * cmath.cosh(x)
    assert abs(lhs - rhs) < 1e-13


def test_coincident_is_sinh_periodic():
    assert coincident(0.4 + 0.2j, 0.4 + 0.2j + 1j * math.pi)
    assert not coincident(0.4, 0.5)


class TestSubstitute:
    def setup_method(self):
        self.vs2 = VariableSet((0.1 + 0.2j, -0.3 + 0.1j), x0=1.1 - 0.4j)
        self.vs3 = VariableSet((0.1, -0.3 + 0.1j, 0.7 - 0.2j), x0=1.1 - 0.4j)

    def test_zero_is_identity(self):
        assert substitute(self.vs2, 0) == self.vs2.xs

    def test_first_slot(self):
        assert substitute(self.vs2, 1) == (self.vs2.x0, self.vs2.xs[1])

    def test_last_slot(self):
        assert substitute(self.vs3, 3) == (self.vs3.xs[0], self.vs3.xs[1], self.vs3.x0)

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            substitute(self.vs2, 3)
        with pytest.raises(IndexError):
            substitute(self.vs2, -1)

    def test_rejects_coincident_variables(self):
        with pytest.raises(ValueError):
            VariableSet((0.1, 0.1 + 1j * math.pi), x0=0.5)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            VariableSet((complex("inf"),), x0=0.5)


@given(
    xs=st.lists(boxed, min_size=1, max_size=4),
    x0=boxed,
    data=st.data(),
)
@settings(max_examples=100, deadline=None)
def test_substitute_round_trip(xs, x0, data):
    try:
        vs = VariableSet(tuple(xs), x0)
    except ValueError:
        return  # coincident draw; outside the contract
    i = data.draw(st.integers(min_value=1, max_value=vs.n))
    out = list(vs.substituted(i))
    assert out[i - 1] == x0
    out[i - 1] = vs.xs[i - 1]
    assert tuple(out) == vs.xs
