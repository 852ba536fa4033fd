"""Command-line front end.

Subcommands: moments, tail, profile, simulate, verify. Every command emits an
OutputRecord as JSON (default) or flat CSV; floats are printed in shortest
round-trip form. Exit codes: 0 ok, 1 verification failure, 2 invalid space or
usage, 3 accuracy/convergence failure, 4 invalid Monte Carlo configuration.

The default series tolerance can be overridden with the CUTOFFLAB_TOL
environment variable.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import mc, profiles, quadrature, spectral, verify
from .errors import (AccuracyError, ConfigError, ConvergenceError, DimensionError,
                     ThresholdError, UnsupportedFamilyError)
from .manifolds import Family, ManifoldSpec, make_spec

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_BAD_SPEC = 2
EXIT_ACCURACY = 3
EXIT_BAD_CONFIG = 4

_SPACES = {"sphere": Family.SPHERE, "rp": Family.REAL_PROJECTIVE,
           "cp": Family.COMPLEX_PROJECTIVE, "hp": Family.QUATERNIONIC_PROJECTIVE,
           "torus-factor": Family.TORUS}
_FAMILIES = {"torus": Family.TORUS, "sphere": Family.SPHERE,
             "rp": Family.REAL_PROJECTIVE, "cp": Family.COMPLEX_PROJECTIVE,
             "hp": Family.QUATERNIONIC_PROJECTIVE}


@dataclass
class OutputRecord:
    command: str
    spec: str
    params: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "OutputRecord":
        return cls(**json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        meta = {"command": self.command, "spec": self.spec, "params": self.params}
        buf.write("# " + json.dumps(meta) + "\n")
        if self.rows:
            cols = list(self.rows[0].keys())
            writer = csv.writer(buf)
            writer.writerow(cols)
            for row in self.rows:
                writer.writerow([_csv_cell(row.get(c)) for c in cols])
        return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return ""
    return v


def _default_tol() -> float:
    return float(os.environ.get("CUTOFFLAB_TOL", "1e-10"))


def _parse_grid(text: str) -> list[float]:
    """'a:b:steps' -> steps equally spaced points, both ends included."""
    a, b, steps = text.split(":")
    pts = np.linspace(float(a), float(b), int(steps))
    return [float(x) for x in pts]


def _parse_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _spec_for(space: str, dim: int | None) -> ManifoldSpec:
    family = _SPACES[space]
    if family is Family.TORUS:
        return make_spec(family, dim if dim else 1)
    if dim is None:
        raise DimensionError("--dim is required for manifold spaces")
    return make_spec(family, dim)


def cmd_moments(args) -> tuple[OutputRecord, int]:
    spec = _spec_for(args.space, args.dim)
    rows = []
    code = EXIT_OK
    for k in range(1, args.k_max + 1):
        row: dict = {"k": k}
        if args.method in ("quadrature", "both"):
            try:
                row["quadrature"] = quadrature.moment_quadrature(spec, k)
            except AccuracyError as exc:
                row["quadrature"] = None
                row["error"] = str(exc)
                code = EXIT_ACCURACY
        if args.method in ("spectral", "both"):
            try:
                row["spectral"] = spectral.moment_spectral(spec, k)
            except ThresholdError:
                row["spectral"] = None
        if args.method == "both" and row.get("quadrature") and row.get("spectral"):
            row["rel_disagreement"] = abs(row["quadrature"] / row["spectral"] - 1)
        rows.append(row)
    rec = OutputRecord(command="moments", spec=spec.label,
                       params={"k_max": args.k_max, "method": args.method}, rows=rows)
    return rec, code


def cmd_tail(args) -> tuple[OutputRecord, int]:
    spec = _spec_for(args.space, args.dim)
    tol = args.tol if args.tol is not None else _default_tol()
    rows = []
    n_ok = 0
    for x in _parse_grid(args.x_grid):
        row: dict = {"x": x}
        try:
            if spec.family is Family.TORUS:
                res = spectral.tail_torus_single(x, tol)
            else:
                res = spectral.tail_manifold(spec, x, tol)
            row.update(tail=res.value, terms_used=res.terms_used,
                       truncation_bound=res.truncation_bound, ok=True)
            n_ok += 1
        except ConvergenceError as exc:
            row.update(tail=None, terms_used=None, truncation_bound=None, ok=False,
                       error=str(exc))
        rows.append(row)
    rec = OutputRecord(command="tail", spec=spec.label,
                       params={"tol": tol, "x_grid": args.x_grid}, rows=rows)
    return rec, EXIT_OK if n_ok else EXIT_ACCURACY


def cmd_profile(args) -> tuple[OutputRecord, int]:
    family = _FAMILIES[args.family]
    tol = args.tol if args.tol is not None else _default_tol()
    table = profiles.profile_table(family, _parse_list(args.n_list),
                                   _parse_grid(args.c_grid), tol)
    rows = [dict(n=r.n, c=r.c, t=r.t,
                 s_exact=None if math.isnan(r.s_exact) else r.s_exact,
                 s_limit=r.s_limit,
                 gap=None if math.isnan(r.gap) else r.gap, valid=r.valid)
            for r in table]
    rec = OutputRecord(command="profile", spec=args.family,
                       params={"n_list": args.n_list, "c_grid": args.c_grid,
                               "tol": tol}, rows=rows)
    return rec, EXIT_OK if any(r["valid"] for r in rows) else EXIT_ACCURACY


def cmd_simulate(args) -> tuple[OutputRecord, int]:
    spec = _spec_for(args.space, args.dim)
    cfg = mc.McConfig(n_paths=args.paths, dt=args.dt, eps0=args.eps0,
                      seed=args.seed, drift_cap=args.drift_cap)
    if args.sst_n:
        if spec.family is not Family.TORUS:
            raise ConfigError("--sst-n applies to --space torus-factor")
        result = mc.sim_torus_sst(args.sst_n, cfg, workers=args.workers)
        analytic_mean = analytic_var = None
    elif spec.family is Family.TORUS:
        result = mc.sim_bessel3_hitting(cfg, workers=args.workers)
        analytic_mean, analytic_var = 1.0 / 3.0, 2.0 / 45.0
    else:
        result = mc.sim_radius_hitting(spec, cfg, workers=args.workers)
        try:
            analytic_mean = quadrature.mean_closed(spec)
            analytic_var = quadrature.variance_closed(spec)
        except UnsupportedFamilyError:
            analytic_mean = quadrature.moment_quadrature(spec, 1)
            analytic_var = quadrature.moment_quadrature(spec, 2) - analytic_mean ** 2
    s = result.samples
    mean = float(s.mean())
    var = float(s.var(ddof=1))
    se = float(s.std(ddof=1) / math.sqrt(len(s)))
    row = {"tag": result.spec_tag, "paths": len(s), "mean": mean, "variance": var,
           "stderr": se, "floor_hits": result.floor_hits,
           "config_hash": result.config_hash,
           "analytic_mean": analytic_mean, "analytic_variance": analytic_var,
           "mean_dev_in_se": None if analytic_mean is None
           else abs(mean - analytic_mean) / se}
    if args.export:
        result.to_csv(args.export)
    rec = OutputRecord(command="simulate", spec=result.spec_tag,
                       params={"paths": args.paths, "dt": args.dt, "seed": args.seed,
                               "sst_n": args.sst_n, "workers": args.workers},
                       rows=[row])
    return rec, EXIT_OK


def cmd_verify(args) -> tuple[OutputRecord, int]:
    hook = os.environ.get("CUTOFFLAB_PERTURB_CK")
    if hook:
        spectral.set_coefficient_perturbation(float(hook))
    try:
        results = verify.run_criteria(level=args.level, workers=args.workers)
    finally:
        if hook:
            spectral.set_coefficient_perturbation(1.0)
    rows = [dict(criterion=r.name, passed=bool(r.passed), measured=float(r.measured),
                 threshold=float(r.threshold), detail=r.detail,
                 seconds=round(r.seconds, 2))
            for r in results]
    ok = all(r["passed"] for r in rows)
    rec = OutputRecord(command="verify", spec=args.level,
                       params={"level": args.level}, rows=rows)
    return rec, EXIT_OK if ok else EXIT_VERIFY_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cutofflab",
        description="Separation-cutoff profiles for Brownian motion on tori, "
                    "spheres and projective spaces")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--out", help="write the record to this file instead of stdout")
    # accept the output flags after the subcommand as well
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"),
                        default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True,
                            parser_class=lambda **kw: argparse.ArgumentParser(
                                parents=[common], **kw))

    p = sub.add_parser("moments", help="covering-time moments")
    p.add_argument("--space", choices=sorted(_SPACES), required=True)
    p.add_argument("--dim", type=int)
    p.add_argument("--k-max", type=int, default=2)
    p.add_argument("--method", choices=("quadrature", "spectral", "both"),
                   default="both")
    p.set_defaults(fn=cmd_moments)

    p = sub.add_parser("tail", help="tail distribution of the covering time")
    p.add_argument("--space", choices=sorted(_SPACES), required=True)
    p.add_argument("--dim", type=int)
    p.add_argument("--x-grid", required=True,
                   help="a:b:steps, inclusive equally spaced grid")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(fn=cmd_tail)

    p = sub.add_parser("profile", help="finite-n separation profile vs its limit")
    p.add_argument("--family", choices=sorted(_FAMILIES), required=True)
    p.add_argument("--n-list", required=True, help="comma separated dimensions")
    p.add_argument("--c-grid", required=True, help="a:b:steps window positions")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(fn=cmd_profile)

    p = sub.add_parser("simulate", help="Monte Carlo of the dual radius processes")
    p.add_argument("--space", choices=sorted(_SPACES), required=True)
    p.add_argument("--dim", type=int)
    p.add_argument("--paths", type=int, required=True)
    p.add_argument("--dt", type=float, default=1e-4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps0", type=float, default=1e-4)
    p.add_argument("--drift-cap", type=float, default=None,
                   help="default: min(1e4, 5/dt)")
    p.add_argument("--sst-n", type=int, default=0,
                   help="simulate the torus strong stationary time with this many "
                        "coordinates")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--export", help="write samples to this CSV file")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("verify", help="run the acceptance criteria")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    p.add_argument("--workers", type=int, default=2)
    p.set_defaults(fn=cmd_verify)
    return ap


def _merge_negative_values(argv: list[str]) -> list[str]:
    """Join grid flags with leading-dash values so argparse accepts -0.5:1:4."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--c-grid", "--x-grid") and i + 1 < len(argv) \
                and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    args = build_parser().parse_args(_merge_negative_values(list(argv)))
    try:
        record, code = args.fn(args)
    except (DimensionError, UnsupportedFamilyError, KeyError) as exc:
        print(f"invalid space: {exc}", file=sys.stderr)
        return EXIT_BAD_SPEC
    except ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except (AccuracyError, ConvergenceError) as exc:
        print(f"accuracy failure: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    text = record.to_json() if args.format == "json" else record.to_csv()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + ("\n" if not text.endswith("\n") else ""))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
