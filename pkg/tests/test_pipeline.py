"""Verification pipeline: report assembly, gating and determinism."""

import dataclasses
import math

import pytest

from conftest import desk_params
from sixvertex.pipeline import VerifyTolerances, verify_model, verify_solution
from sixvertex.solver import solve_newton


class TestVerifySolution:
    def test_twisted_report_passes(self):
        p = desk_params("twisted", 4, 2, seed=71)
        sol = solve_newton(p, seed=71, max_starts=60)[0]
        rep = verify_solution(p, sol, seed=71)
        assert rep.passed and not rep.failed_checks
        assert rep.oracle_relerr < 1e-8
        assert rep.max_x0_spread < 1e-9
        assert rep.max_family_spread < 1e-8
        assert rep.funcrel_residual < 1e-9
        assert rep.system_min_singular_ratio < 1e-9
        assert len(rep.det_values) == p.n + 1
        assert all(len(row) == 5 for row in rep.det_values)

    def test_open_report_passes(self):
        p = desk_params("open", 2, 1, seed=72)
        sol = solve_newton(p, seed=72, max_starts=60)[0]
        rep = verify_solution(p, sol, seed=72)
        assert rep.passed and not rep.failed_checks

    def test_offshell_ratio_is_recorded(self):
        # identically singular system: the control value is data, not a gate
        p = desk_params("twisted", 3, 1, seed=73)
        sol = solve_newton(p, seed=73, max_starts=40)[0]
        rep = verify_solution(p, sol, seed=73)
        assert math.isfinite(rep.offshell_singular_ratio)
        assert "offshell" not in " ".join(rep.failed_checks)

    def test_deterministic_given_seed(self):
        p = desk_params("twisted", 3, 1, seed=74)
        sol = solve_newton(p, seed=74, max_starts=40)[0]
        a = verify_solution(p, sol, seed=74)
        b = verify_solution(p, sol, seed=74)
        assert dataclasses.asdict(a) == dataclasses.asdict(b)

    def test_raw_determinants_recorded_per_family(self):
        p = desk_params("twisted", 3, 1, seed=75)
        sol = solve_newton(p, seed=75, max_starts=40)[0]
        rep = verify_solution(p, sol, seed=75, x0_samples=3)
        assert len(rep.det_raw) == p.n + 1
        assert all(len(row) == 3 and all(v != 0 for v in row) for row in rep.det_raw)


class TestVerifyModel:
    def test_all_solutions_reported(self):
        p = desk_params("twisted", 4, 2, seed=76)
        results = verify_model(p, seed=76, max_starts=60)
        assert results
        for sol, rep in results:
            assert rep.roots == sol.roots
            assert rep.passed

    def test_perturbed_roots_fail_named_checks(self):
        p = desk_params("twisted", 3, 1, seed=77)
        results = verify_model(p, seed=77, max_starts=40, perturb_roots=0.25 + 0.1j)
        assert results
        for _, rep in results:
            assert not rep.passed
            assert "funcrel_residual" in rep.failed_checks
            assert "ba_residual" in rep.failed_checks


class TestTolerances:
    def test_overrides_by_name(self):
        t = VerifyTolerances.from_mapping({"oracle_relerr": 1e-6})
        assert t.oracle_relerr == 1e-6
        assert t.funcrel_residual == 1e-9

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError, match="unknown tolerance"):
            VerifyTolerances.from_mapping({"not_a_threshold": 1.0})

    def test_tightened_gate_fails_the_report(self):
        p = desk_params("twisted", 3, 1, seed=78)
        sol = solve_newton(p, seed=78, max_starts=40)[0]
        strict = VerifyTolerances.from_mapping({"oracle_relerr": 1e-18})
        rep = verify_solution(p, sol, seed=78, tolerances=strict)
        assert "oracle_relerr" in rep.failed_checks
