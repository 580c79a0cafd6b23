"""LU determinant and solve against independent cofactor/residual oracles."""

import numpy as np
import pytest

from sixvertex.linalg import SingularMatrixError, condition_estimate, lu_determinant, lu_solve


def cofactor_determinant(m: np.ndarray) -> complex:
    """Independent oracle: recursive cofactor expansion along the first row."""
    n = m.shape[0]
    if n == 1:
        return complex(m[0, 0])
    total = 0.0 + 0.0j
    for j in range(n):
        minor = np.delete(np.delete(m, 0, axis=0), j, axis=1)
        total += (-1) ** j * m[0, j] * cofactor_determinant(minor)
    return total


def random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


class TestDeterminant:
    def test_identity(self):
        assert lu_determinant(np.eye(3, dtype=complex)) == 1.0

    def test_repeated_row_is_zero(self, rng):
        m = random_complex(rng, (4, 4))
        m[2] = m[0]
        scale = float(np.max(np.abs(m))) ** 4
        assert abs(lu_determinant(m)) < 1e-12 * scale

    def test_matches_cofactor_oracle_4x4(self, rng):
        m = random_complex(rng, (4, 4))
        expected = cofactor_determinant(m)
        assert abs(lu_determinant(m) - expected) < 1e-12 * abs(expected)

    @pytest.mark.parametrize("size", [1, 2, 3, 4, 5])
    def test_matches_cofactor_all_small_sizes(self, rng, size):
        for _ in range(10):
            m = random_complex(rng, (size, size))
            expected = cofactor_determinant(m)
            assert abs(lu_determinant(m) - expected) < 1e-11 * max(abs(expected), 1e-30)

    def test_exactly_singular_returns_zero(self):
        m = np.zeros((3, 3), dtype=complex)
        assert lu_determinant(m) == 0.0

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            lu_determinant(np.ones((2, 3), dtype=complex))


class TestSolve:
    def test_identity(self):
        e2 = np.array([0, 1, 0], dtype=complex)
        assert np.array_equal(lu_solve(np.eye(3, dtype=complex), e2), e2)

    def test_diagonal(self):
        m = np.diag([2.0 + 0j, 4.0 + 0j])
        x = lu_solve(m, np.array([2.0, 4.0], dtype=complex))
        assert np.allclose(x, [1.0, 1.0], rtol=0, atol=1e-15)

    def test_residual_well_conditioned_5x5(self, rng):
        for _ in range(10):
            m = random_complex(rng, (5, 5)) + 3 * np.eye(5)
            b = random_complex(rng, 5)
            x = lu_solve(m, b)
            assert np.linalg.norm(m @ x - b) < 1e-11 * np.linalg.norm(b)

    def test_singular_raises_with_condition(self):
        m = np.array([[1, 2], [2, 4]], dtype=complex)
        with pytest.raises(SingularMatrixError) as err:
            lu_solve(m, np.array([1, 1], dtype=complex))
        assert err.value.condition > 1e12

    def test_rhs_shape_checked(self):
        with pytest.raises(ValueError):
            lu_solve(np.eye(2, dtype=complex), np.ones(3, dtype=complex))


def test_condition_estimate_orders_of_magnitude(rng):
    well = random_complex(rng, (4, 4)) + 4 * np.eye(4)
    assert condition_estimate(well) < 1e3
    nearly = np.eye(3, dtype=complex)
    nearly[2, 2] = 1e-14
    assert condition_estimate(nearly) > 1e13
