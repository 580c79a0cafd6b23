"""Command-line surface: solve, verify and sweep pipelines.

Complex literals on the command line and in TOML configs are written
"re,im" (the imaginary part may be omitted).  Reports serialize complex
numbers as "re+imj" strings; JSON output is key-sorted and newline
terminated so identical (config, seed) runs are byte-identical.

Exit codes: 0 pass, 1 invariant failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .params import ModelParams
from .pipeline import VerifyTolerances, verify_model
from .solver import solve_newton

SCHEMA_VERSION = 1

_GRID_PARAMS = ("gamma", "phi1", "phi2", "h", "hbar")


class ConfigError(Exception):
    """Bad configuration value; the message names the offending field."""


def parse_complex(text, field_name: str) -> complex:
    if isinstance(text, (int, float)):
        return complex(text)
    if isinstance(text, complex):
        return text
    parts = [p.strip() for p in str(text).split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ConfigError(f"field '{field_name}': cannot parse complex literal {text!r} (expected 're,im')")


def fmt_complex(z: complex) -> str:
    return repr(complex(z)).strip("()")


@dataclass
class RunConfig:
    boundary: str = "twisted"
    L: int = 2
    n: int = 1
    seed: int = 0
    x0_samples: int = 5
    max_starts: int = 60
    gamma: complex | None = None
    phi1: complex | None = None
    phi2: complex | None = None
    h: complex | None = None
    hbar: complex | None = None
    mu: list[complex] | None = None
    out: str | None = None
    tolerances: dict = field(default_factory=dict)
    perturb_roots: complex | None = None

    _COMPLEX_FIELDS = ("gamma", "phi1", "phi2", "h", "hbar", "perturb_roots")
    _INT_FIELDS = ("L", "n", "seed", "x0_samples", "max_starts")

    def update(self, source: dict) -> None:
        for key, value in source.items():
            if value is None:
                continue
            if key == "boundary":
                if value not in ("twisted", "open"):
                    raise ConfigError(f"field 'boundary': expected 'twisted' or 'open', got {value!r}")
                self.boundary = value
            elif key in self._INT_FIELDS:
                try:
                    setattr(self, key, int(value))
                except (TypeError, ValueError):
                    raise ConfigError(f"field '{key}': expected an integer, got {value!r}")
            elif key in self._COMPLEX_FIELDS:
                setattr(self, key, parse_complex(value, key))
            elif key == "mu":
                if not isinstance(value, (list, tuple)):
                    raise ConfigError("field 'mu': expected a list of 're,im' literals")
                self.mu = [parse_complex(v, f"mu[{i}]") for i, v in enumerate(value)]
            elif key == "out":
                self.out = str(value)
            elif key == "tolerances":
                if not isinstance(value, dict):
                    raise ConfigError("field 'tolerances': expected a table of named thresholds")
                self.tolerances.update(value)
            else:
                raise ConfigError(f"field '{key}': unknown configuration key")

    def fill_defaults(self) -> None:
        """Derive any unset model parameters deterministically from the seed."""
        rng = np.random.default_rng([int(self.seed), 0xA11])
        gamma = complex(0.45 + 0.25 * rng.uniform(), 0.2 * rng.uniform() - 0.1)
        mu = [complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.25, 0.25)) for _ in range(self.L)]
        phi1 = complex(1.0 + 0.3 * rng.uniform(), 0.3 * (rng.uniform() - 0.5))
        phi2 = complex(1.6 + 0.5 * rng.uniform(), 0.4 * (rng.uniform() - 0.5))
        h = complex(0.55 + 0.5 * rng.uniform(), 0.5 * (rng.uniform() - 0.5))
        hbar = complex(0.6 + 0.5 * rng.uniform(), 0.5 * (rng.uniform() - 0.5))
        if self.gamma is None:
            self.gamma = gamma
        if self.mu is None:
            self.mu = mu
        if self.phi1 is None:
            self.phi1 = phi1
        if self.phi2 is None:
            self.phi2 = phi2
        if self.h is None:
            self.h = h
        if self.hbar is None:
            self.hbar = hbar

    def model_params(self) -> ModelParams:
        self.fill_defaults()
        if len(self.mu) != self.L:
            raise ConfigError(f"field 'mu': expected {self.L} entries, got {len(self.mu)}")
        try:
            if self.boundary == "twisted":
                return ModelParams.twisted(self.L, self.n, self.gamma, self.mu, self.phi1, self.phi2)
            return ModelParams.open_chain(self.L, self.n, self.gamma, self.mu, self.h, self.hbar)
        except ValueError as exc:
            raise ConfigError(f"invalid model parameters: {exc}") from exc

    def verify_tolerances(self) -> VerifyTolerances:
        try:
            return VerifyTolerances.from_mapping(self.tolerances)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"field 'tolerances': {exc}") from exc

    def echo(self) -> dict:
        self.fill_defaults()
        return {
            "boundary": self.boundary,
            "L": self.L,
            "n": self.n,
            "seed": self.seed,
            "x0_samples": self.x0_samples,
            "max_starts": self.max_starts,
            "gamma": fmt_complex(self.gamma),
            "mu": [fmt_complex(m) for m in self.mu],
            "phi1": fmt_complex(self.phi1),
            "phi2": fmt_complex(self.phi2),
            "h": fmt_complex(self.h),
            "hbar": fmt_complex(self.hbar),
            "tolerances": {k: float(v) for k, v in sorted(self.tolerances.items())},
            "perturb_roots": None if self.perturb_roots is None else fmt_complex(self.perturb_roots),
        }


def load_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            with open(args.config, "rb") as fh:
                data = tomllib.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}")
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config file is not valid TOML: {exc}")
        cfg.update(data)
    flag_values = {
        "boundary": args.boundary,
        "L": args.L,
        "n": args.n,
        "seed": args.seed,
        "x0_samples": args.x0_samples,
        "max_starts": args.max_starts,
        "gamma": args.gamma,
        "phi1": args.phi1,
        "phi2": args.phi2,
        "h": args.h,
        "hbar": args.hbar,
        "mu": args.mu.split(";") if args.mu else None,
        "out": args.out,
        "perturb_roots": getattr(args, "perturb_roots", None),
    }
    cfg.update(flag_values)
    return cfg


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_json(payload: dict, out_path: str | None) -> None:
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", out_path)


def cmd_solve(cfg: RunConfig) -> int:
    params = cfg.model_params()
    solutions = solve_newton(params, cfg.seed, max_starts=cfg.max_starts)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "solve",
        "config": cfg.echo(),
        "solutions": [
            {
                "roots": [fmt_complex(z) for z in s.roots],
                "residual": s.residual_norm,
                "eigencheck_residual": s.eigencheck_residual,
                "admissible": s.admissible,
            }
            for s in solutions
        ],
    }
    if not solutions:
        payload["warning"] = "no admissible solutions found"
    _dump_json(payload, cfg.out)
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    params = cfg.model_params()
    results = verify_model(
        params,
        cfg.seed,
        x0_samples=cfg.x0_samples,
        max_starts=cfg.max_starts,
        tolerances=cfg.verify_tolerances(),
        perturb_roots=cfg.perturb_roots,
    )
    sol_payload = []
    for sol, rep in results:
        sol_payload.append({
            "roots": [fmt_complex(z) for z in rep.roots],
            "target_xs": [fmt_complex(z) for z in rep.target_xs],
            "residual": rep.residual_norm,
            "eigencheck_residual": rep.eigencheck_residual,
            "oracle": fmt_complex(rep.oracle),
            "det_families": [[fmt_complex(v) for v in row] for row in rep.det_values],
            "det_raw": [[fmt_complex(v) for v in row] for row in rep.det_raw],
            "free_samples": [[fmt_complex(v) for v in row] for row in rep.free_samples],
            "max_x0_spread": rep.max_x0_spread,
            "max_family_spread": rep.max_family_spread,
            "oracle_relerr": rep.oracle_relerr,
            "funcrel_residual": rep.funcrel_residual,
            "min_singular_ratio": rep.system_min_singular_ratio,
            "offshell_singular_ratio": rep.offshell_singular_ratio,
            "failed_checks": rep.failed_checks,
            "pass": rep.passed,
        })
    all_pass = all(entry["pass"] for entry in sol_payload)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "config": cfg.echo(),
        "solutions": sol_payload,
        "pass": all_pass,
    }
    if not sol_payload:
        payload["warning"] = "no admissible solutions found"
    _dump_json(payload, cfg.out)
    if not all_pass:
        failing = sorted({name for entry in sol_payload for name in entry["failed_checks"]})
        print(f"verify: failed checks: {', '.join(failing)}", file=sys.stderr)
        return 1
    return 0


def parse_grid(spec: str) -> tuple[str, list[complex]]:
    try:
        name, rest = spec.split("=", 1)
        lo_s, hi_s, count_s = rest.split(":")
    except ValueError:
        raise ConfigError(f"field 'grid': expected 'name=start:stop:count', got {spec!r}")
    name = name.strip()
    if name not in _GRID_PARAMS:
        raise ConfigError(f"field 'grid': unknown parameter {name!r} (choose from {', '.join(_GRID_PARAMS)})")
    lo = parse_complex(lo_s, f"grid {name} start")
    hi = parse_complex(hi_s, f"grid {name} stop")
    try:
        count = int(count_s)
    except ValueError:
        raise ConfigError(f"field 'grid': count must be an integer, got {count_s!r}")
    if count < 0:
        raise ConfigError("field 'grid': count must be >= 0")
    if count == 0:
        return name, []
    if count == 1:
        return name, [lo]
    step = (hi - lo) / (count - 1)
    return name, [lo + k * step for k in range(count)]


_SWEEP_COLUMNS = (
    "status", "n_solutions", "worst_ba_residual", "worst_eigencheck",
    "worst_oracle_relerr", "worst_x0_spread", "worst_family_spread",
    "worst_funcrel", "worst_onshell_ratio",
)


def sweep_point(task) -> dict:
    """One grid point; failures are recorded in the row, never raised."""
    base_cfg, assignments = task
    cfg = copy.deepcopy(base_cfg)
    row = {name: fmt_complex(value) for name, value in assignments}
    row.update({c: "" for c in _SWEEP_COLUMNS})
    for name, value in assignments:
        setattr(cfg, name, value)
    try:
        params = cfg.model_params()
    except ConfigError:
        row["status"] = "inadmissible"
        row["n_solutions"] = 0
        return row
    results = verify_model(params, cfg.seed, x0_samples=cfg.x0_samples,
                           max_starts=cfg.max_starts, tolerances=cfg.verify_tolerances())
    row["n_solutions"] = len(results)
    if not results:
        row["status"] = "no_solutions"
        return row
    reports = [rep for _, rep in results]
    row["status"] = "pass" if all(r.passed for r in reports) else "fail"
    row["worst_ba_residual"] = repr(max(r.residual_norm for r in reports))
    row["worst_eigencheck"] = repr(max(r.eigencheck_residual for r in reports))
    row["worst_oracle_relerr"] = repr(max(r.oracle_relerr for r in reports))
    row["worst_x0_spread"] = repr(max(r.max_x0_spread for r in reports))
    row["worst_family_spread"] = repr(max(r.max_family_spread for r in reports))
    row["worst_funcrel"] = repr(max(r.funcrel_residual for r in reports))
    row["worst_onshell_ratio"] = repr(max(r.system_min_singular_ratio for r in reports))
    return row


def cmd_sweep(cfg: RunConfig, grid_specs: list[str], workers: int, as_json: bool) -> int:
    grids = [parse_grid(s) for s in grid_specs]
    if not 1 <= len(grids) <= 2:
        raise ConfigError("field 'grid': pass one or two --grid specifications")
    points: list[tuple] = []
    if len(grids) == 1:
        name, values = grids[0]
        points = [((name, v),) for v in values]
        grid_names = [name]
    else:
        (n1, v1), (n2, v2) = grids
        if n1 == n2:
            raise ConfigError("field 'grid': the two grids must vary different parameters")
        points = [((n1, a), (n2, b)) for a in v1 for b in v2]
        grid_names = [n1, n2]

    cfg.fill_defaults()
    tasks = [(cfg, list(assignments)) for assignments in points]
    if workers > 1 and tasks:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(sweep_point, tasks))
    else:
        rows = [sweep_point(t) for t in tasks]

    header = grid_names + list(_SWEEP_COLUMNS)
    if as_json:
        _dump_json({"schema_version": SCHEMA_VERSION, "command": "sweep",
                    "config": cfg.echo(), "rows": rows}, cfg.out)
        return 0
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    _emit(buf.getvalue(), cfg.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sixvertex",
        description="Bethe-vector scalar products: solve, verify and sweep pipelines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("solve", "find admissible Bethe root sets and write them as JSON"),
        ("verify", "run the full oracle-versus-determinant verification"),
        ("sweep", "verify across a parameter grid and write a CSV table"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="TOML configuration file")
        p.add_argument("--seed", type=int, default=None, help="RNG seed (default 0)")
        p.add_argument("--boundary", choices=["twisted", "open"], default=None)
        p.add_argument("--L", type=int, default=None, help="site count")
        p.add_argument("--n", type=int, default=None, help="magnon count")
        p.add_argument("--x0-samples", dest="x0_samples", type=int, default=None)
        p.add_argument("--max-starts", dest="max_starts", type=int, default=None)
        p.add_argument("--gamma", help="anisotropy as 're,im'")
        p.add_argument("--phi1", help="first twist as 're,im'")
        p.add_argument("--phi2", help="second twist as 're,im'")
        p.add_argument("--h", help="boundary field as 're,im'")
        p.add_argument("--hbar", help="dual boundary field as 're,im'")
        p.add_argument("--mu", help="inhomogeneities as 're,im;re,im;...'")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--json", action="store_true", help="JSON output")
        p.add_argument("--csv", action="store_true", help="CSV output (sweep only)")
        if name == "verify":
            p.add_argument("--perturb-roots", dest="perturb_roots",
                           help="shift every root by 're,im' before verifying (off-shell control)")
        if name == "sweep":
            p.add_argument("--grid", action="append", default=[],
                           help="grid spec 'name=start:stop:count' (repeat for a 2d grid)")
            p.add_argument("--workers", type=int, default=1, help="worker processes")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        if args.command == "sweep":
            if args.json and args.csv:
                raise ConfigError("choose one of --json or --csv")
            return cmd_sweep(cfg, args.grid, args.workers, as_json=args.json)
        if args.csv:
            raise ConfigError(f"field '--csv': {args.command} output is JSON only")
        if args.command == "solve":
            return cmd_solve(cfg)
        return cmd_verify(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
