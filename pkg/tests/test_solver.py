"""Bethe-equation residuals, Newton search, validation and deduplication."""

import cmath
import math

import numpy as np
import pytest

from conftest import desk_params
from sixvertex.params import ModelParams
from sixvertex.solver import (
    ba_residual,
    ba_residual_open,
    ba_residual_twisted,
    closed_form_root_single_magnon,
    solve_newton,
    validate_solution,
)
from sixvertex.weights import PoleError, pole_distance


def anchor_params():
    return ModelParams.twisted(1, 1, 0.47 + 0.13j, [0.21 - 0.11j], 1.0, 2.0 - 0.3j)


class TestResidualTwisted:
    def test_closed_form_root(self):
        p = anchor_params()
        lam = closed_form_root_single_magnon(p)
        assert np.max(np.abs(ba_residual_twisted([lam], p))) < 1e-12

    def test_off_shell_nonzero(self):
        p = anchor_params()
        assert abs(ba_residual_twisted([0.9 - 0.4j], p)[0]) > 1e-3

    def test_permutation_reorders_components(self):
        p = desk_params("twisted", 4, 2, seed=21)
        roots = (0.3 + 0.1j, -0.5 + 0.4j)
        r12 = ba_residual_twisted(roots, p)
        r21 = ba_residual_twisted(roots[::-1], p)
        assert np.allclose(r12, r21[::-1], rtol=1e-12, atol=1e-14)

    def test_pole_at_inhomogeneity(self):
        p = anchor_params()
        with pytest.raises(PoleError):
            ba_residual_twisted([p.mu[0]], p)


class TestResidualOpen:
    def test_newton_root_single_variable(self):
        p = desk_params("open", 1, 1, seed=22)
        sols = solve_newton(p, seed=22, max_starts=40)
        assert sols
        for s in sols:
            assert np.max(np.abs(ba_residual_open(s.roots, p))) < 1e-12

    def test_off_shell_nonzero(self):
        p = desk_params("open", 2, 1, seed=23)
        assert abs(ba_residual_open([0.9 - 0.4j], p)[0]) > 1e-3

    def test_permutation_reorders_components(self):
        p = desk_params("open", 4, 2, seed=24)
        roots = (0.3 + 0.1j, -0.5 + 0.4j)
        r12 = ba_residual_open(roots, p)
        r21 = ba_residual_open(roots[::-1], p)
        assert np.allclose(r12, r21[::-1], rtol=1e-12, atol=1e-14)


class TestSolveNewton:
    def test_recovers_closed_form(self):
        p = anchor_params()
        lam = closed_form_root_single_magnon(p)
        sols = solve_newton(p, seed=31, max_starts=20)
        assert any(pole_distance(s.roots[0], lam) < 1e-10 for s in sols)

    def test_two_site_single_magnon_all_validated(self):
        p = ModelParams.twisted(2, 1, 0.5, [0.1, -0.2], 1.0, 2.0)
        sols = solve_newton(p, seed=32, max_starts=30)
        assert sols
        for s in sols:
            assert s.residual_norm < 1e-12
            assert s.eigencheck_residual < 1e-8

    @pytest.mark.parametrize("boundary,starts", [("twisted", 40), ("open", 160)])
    def test_four_site_two_magnons_validated(self, boundary, starts):
        # open chains have small admissible basins, hence the higher start count
        p = desk_params(boundary, 4, 2, seed=33)
        sols = solve_newton(p, seed=33, max_starts=starts)
        assert sols
        for s in sols:
            redone = validate_solution(s.roots, p)
            assert redone.admissible

    def test_reproducible(self):
        p = desk_params("twisted", 3, 2, seed=34)
        a = solve_newton(p, seed=34, max_starts=25)
        b = solve_newton(p, seed=34, max_starts=25)
        assert [s.roots for s in a] == [s.roots for s in b]

    def test_deduplicated_modulo_shift_and_permutation(self):
        p = desk_params("twisted", 4, 2, seed=35)
        sols = solve_newton(p, seed=35, max_starts=60)
        for i in range(len(sols)):
            for j in range(i + 1, len(sols)):
                dists = [pole_distance(x, y)
                         for x, y in zip(sols[i].roots, sols[j].roots)]
                assert max(dists) > 1e-8

    def test_roots_folded_into_strip(self):
        p = desk_params("twisted", 3, 1, seed=36)
        for s in solve_newton(p, seed=36, max_starts=25):
            for z in s.roots:
                assert -math.pi / 2 - 1e-12 < z.imag <= math.pi / 2 + 1e-12

    def test_open_no_reflection_duplicates(self):
        p = desk_params("open", 2, 1, seed=37)
        sols = solve_newton(p, seed=37, max_starts=60)
        assert sols
        for i, si in enumerate(sols):
            flipped = -si.roots[0] - p.gamma
            for j, sj in enumerate(sols):
                if i != j:
                    assert pole_distance(flipped, sj.roots[0]) > 1e-8


class TestValidateSolution:
    def test_closed_form_admissible(self):
        p = anchor_params()
        sol = validate_solution([closed_form_root_single_magnon(p)], p)
        assert sol.admissible
        assert sol.residual_norm < 1e-12
        assert sol.eigencheck_residual < 1e-8

    def test_duplicated_roots_inadmissible(self):
        p = desk_params("twisted", 4, 2, seed=38)
        sol = validate_solution([0.3 + 0.1j, 0.3 + 0.1j], p)
        assert not sol.admissible

    def test_root_on_inhomogeneity_inadmissible(self):
        p = anchor_params()
        sol = validate_solution([p.mu[0]], p)
        assert not sol.admissible
        assert not math.isfinite(sol.residual_norm)

    def test_open_double_argument_poles_inadmissible(self):
        p = desk_params("open", 2, 1, seed=39)
        assert not validate_solution([0.0 + 0.0j], p).admissible
        assert not validate_solution([-p.gamma / 2], p).admissible

    def test_off_shell_point_inadmissible(self):
        p = anchor_params()
        sol = validate_solution([0.9 - 0.4j], p)
        assert not sol.admissible


def test_residual_dispatch_matches_boundary():
    pt = desk_params("twisted", 2, 1, seed=40)
    po = desk_params("open", 2, 1, seed=40)
    z = [0.3 + 0.2j]
    assert np.allclose(ba_residual(z, pt), ba_residual_twisted(z, pt))
    assert np.allclose(ba_residual(z, po), ba_residual_open(z, po))
