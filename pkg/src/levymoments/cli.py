"""Command line runner: ``levymoments <subcommand> ...``.

Settings are resolved in three layers, later layers winning::

    built-in defaults  <  --config JSON file  <  explicit command line flags

Only flags that are actually given override the config file.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from importlib import resources

import numpy as np

from .exceptions import LevyError, NotCoveredError
from .experiment import ExperimentConfig, TOL_DELTA, run_experiment, run_table, run_verify
from .levy_core import DriftConvention, Family, ProcessSpec, make_process
from .moment_engine import moment_curves, write_curves_csv
from .rates import fit_curve_arrays, predict_rate
from .sampler import Scheme, SchemeKind, SmallJumpMode, path_stream, sample_path
from .specfun import bessel_k

# parameter sets used by `catalog`
CATALOG_EXAMPLES = [
    ("Gamma", {}),
    ("Stable", {"alpha": 1.5, "C1": 1.0, "C2": 1.0}),
    ("Stable", {"alpha": 1.0, "C1": 1.0, "C2": 1.0}),
    ("TemperedStable", {"alpha": 0.3, "gamma": 1.0}),
    ("InverseGaussian", {"gamma": 1.0}),
    ("NIG", {"alpha": 1.0, "gamma": 0.0, "delta": 1.0}),
    ("Meixner", {"gamma": 0.0, "delta": 1.0}),
    ("Hyperbolic", {"gamma": 1.0, "delta": 1.0}),
]

_SCHEME_ALIASES = {
    "exact": SchemeKind.EXACT,
    "exactincrement": SchemeKind.EXACT,
    "cp": SchemeKind.COMPOUND_POISSON,
    "compoundpoisson": SchemeKind.COMPOUND_POISSON,
}


def bundled_config(name: str) -> str:
    """Path of a config shipped inside the package (e.g. ``gamma_quickcheck.json``)."""
    return str(resources.files("levymoments") / "configs" / name)


def parse_process(text: str) -> dict:
    """Parse ``--process``.

    Accepts a family name (``Gamma``), ``Family:key=value,...`` (``drift`` sets
    the drift) or a JSON object ``{"family": ..., "params": {...}}``.
    """
    text = text.strip()
    if text.startswith("{"):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise LevyError(f"--process is not valid JSON: {exc}") from None
        if "family" not in d:
            raise LevyError("--process JSON needs a 'family' key")
        return d
    family, _, rest = text.partition(":")
    params, drift = {}, None
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise LevyError(f"bad --process parameter {item!r}; expected key=value")
        try:
            num = float(val)
        except ValueError:
            raise LevyError(f"parameter {key} must be a number, got {val!r}") from None
        if key.strip() in ("drift", "drift_a", "a"):
            drift = num
        else:
            params[key.strip()] = num
    d = {"family": family.strip(), "params": params}
    if drift is not None:
        d["drift_a"] = drift
    return d


def _scheme_from_args(args, base: Scheme) -> Scheme:
    d = base.to_dict()
    if args.scheme is not None:
        key = args.scheme.replace("-", "").replace("_", "").lower()
        if key not in _SCHEME_ALIASES:
            raise LevyError(f"unknown scheme {args.scheme!r}; use exact or cp")
        d["kind"] = _SCHEME_ALIASES[key].value
    if args.epsilon is not None:
        d["epsilon"] = args.epsilon
    if args.small_jumps is not None:
        d["small_jump_mode"] = (SmallJumpMode.GAUSSIAN if args.small_jumps == "gaussian"
                                else SmallJumpMode.DROP).value
    if args.horizon_steps is not None:
        d["horizon_steps"] = args.horizon_steps
    if args.grid_step is not None:
        d["grid_step"] = args.grid_step
    return Scheme.from_dict(d)


def resolve_config(args) -> ExperimentConfig:
    """Merge defaults, the optional config file and explicit flags."""
    cfg = ExperimentConfig.load(args.config) if getattr(args, "config", None) else None
    d = cfg.to_dict() if cfg else {"process": {"family": "Gamma", "params": {}}}
    overrides = {
        "process": parse_process(args.process) if getattr(args, "process", None) else None,
        "p_list": getattr(args, "p", None),
        "t_max": getattr(args, "t_max", None),
        "t_min": getattr(args, "t_min", None),
        "points": getattr(args, "grid_points", None),
        "n_paths": getattr(args, "paths", None),
        "convention": getattr(args, "convention", None),
        "seed": getattr(args, "seed", None),
        "output": getattr(args, "out", None),
        "n_jobs": getattr(args, "n_jobs", None),
    }
    d.update({k: v for k, v in overrides.items() if v is not None})
    if getattr(args, "with_log", None) is not None:
        d["with_log"] = args.with_log
    base = Scheme.from_dict(d["scheme"]) if "scheme" in d else Scheme()
    d["scheme"] = _scheme_from_args(args, base).to_dict()
    return ExperimentConfig.from_dict(d)


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands -----------------------------------------------------------------

def cmd_catalog(args):
    rows = []
    for family, params in CATALOG_EXAMPLES:
        spec = make_process(family, **params)
        rows.append({**spec.to_dict(), "strictly_stable": spec.strictly_stable,
                     "simulable": family != Family.HYPERBOLIC.value})
    if args.json:
        _emit(rows)
        return 0
    print(f"{'family':<16} {'params':<40} {'beta':>5} {'sym':>5} {'drift a':>12}")
    for r in rows:
        params = ",".join(f"{k}={v:g}" for k, v in r["params"].items()) or "-"
        drift = r["drift_a"] + 0.0  # avoid printing -0
        print(f"{r['family']:<16} {params:<40} {r['beta']:>5g} {str(r['symmetric']):>5} {drift:>12.6g}")
    return 0


def cmd_simulate(args):
    cfg = resolve_config(args)
    spec = cfg.spec()
    T = cfg.t_max
    cfg.scheme.validate(spec, T)
    os.makedirs(cfg.output, exist_ok=True)
    paths_csv = os.path.join(cfg.output, "paths.csv")
    jumps_json = os.path.join(cfg.output, "jumps.json")
    jumps = []
    with open(paths_csv, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(["path_id", "time", "value"])
        for i in range(int(cfg.n_paths)):
            path = sample_path(spec, T, cfg.convention, cfg.scheme, path_stream(cfg.seed, i))
            for t, v in zip(path.grid, path.values):
                w.writerow([i, repr(float(t)), repr(float(v))])
            jumps.append({"path_id": i, "jumps": [[float(t), float(s)] for t, s in path.jumps]})
    _emit({"process": spec.to_dict(), "T": T, "seed": cfg.seed, "convention": cfg.convention.value,
           "scheme": cfg.scheme.to_dict(), "paths": jumps}, jumps_json)
    print(f"wrote {paths_csv} and {jumps_json}")
    return 0


def cmd_moment(args):
    cfg = resolve_config(args).validate()
    spec = cfg.spec()
    curves = moment_curves(spec, cfg.p_list, cfg.t_grid, cfg.convention, cfg.scheme,
                           int(cfg.n_paths), int(cfg.seed), int(cfg.n_jobs))
    chosen = [curves[(args.kind, p)] for p in cfg.p_list]
    os.makedirs(cfg.output, exist_ok=True)
    csv_path = os.path.join(cfg.output, "curves.csv")
    write_curves_csv(csv_path, chosen)
    meta = {
        "config": cfg.to_dict(),
        "kind": args.kind,
        "curves": [{"p": c.p, "meta": c.meta, "rows": c.to_rows(),
                    "warnings": sorted({w for e in c.estimates for w in e.warnings})} for c in chosen],
    }
    _emit(meta, os.path.join(cfg.output, "curves.json"))
    print(f"wrote {csv_path}")
    return 0


def read_curves_csv(path):
    """Read a curves CSV back into ``{p: (t, estimate, std_error)}``."""
    out = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            p = float(row["p"])
            out.setdefault(p, ([], [], []))
            out[p][0].append(float(row["t"]))
            out[p][1].append(float(row["estimate"]))
            out[p][2].append(float(row["std_error"]))
    return {p: tuple(np.array(v) for v in cols) for p, cols in out.items()}


def cmd_fit(args):
    curves = read_curves_csv(args.curves)
    wanted = curves if not args.p else {p: curves[p] for p in map(float, args.p) if p in curves}
    if not wanted:
        raise LevyError(f"no curve in {args.curves} matches p={args.p}")
    keys = ("gamma", "delta", "stderr_gamma", "stderr_delta", "source", "n_points")
    result = {}
    for p, (t, m, se) in sorted(wanted.items()):
        fit = fit_curve_arrays(t, m, se, with_log=bool(args.with_log), exclude_largest=args.exclude_largest)
        result[repr(p)] = {k: v for k, v in fit.to_dict().items() if k in keys}
    _emit(result[next(iter(result))] if len(result) == 1 else result, args.out)
    return 0


def cmd_predict(args):
    spec = ProcessSpec.from_dict(parse_process(args.process))
    conv = DriftConvention(args.convention) if args.convention else None
    keys = ("gamma", "delta", "stderr_gamma", "stderr_delta", "source", "n_points")
    result = {}
    for p in args.p:
        try:
            d = predict_rate(spec, float(p), conv).to_dict()
            result[repr(float(p))] = {k: d[k] for k in keys} | {"note": d.get("note", "")}
        except NotCoveredError as exc:
            result[repr(float(p))] = {"source": "not covered", "reason": str(exc)}
    _emit(result, args.out)
    return 0


def cmd_verify(args):
    tol_delta = TOL_DELTA if args.tol_delta is None else args.tol_delta
    if args.full_table:
        report = run_table(args.out or "verify_out", args.tol_gamma, tol_delta, n_jobs=args.n_jobs or 1,
                           scale=args.scale)
    else:
        if not args.config and not args.process:
            raise LevyError("verify needs --config, --process or --full-table")
        cfg = resolve_config(args)
        report = run_verify(cfg, args.tol_gamma, tol_delta)
    print(report.table())
    failed = report.failed
    print(f"\n{len(report.rows) - len(failed)} of {len(report.rows)} rows without failure")
    return 1 if failed else 0


def cmd_specfun(args):
    r = bessel_k(args.nu, args.z, tol=args.tol)
    _emit({"nu": r.order, "z": r.argument, "value": r.value, "abs_error_estimate": r.abs_error_estimate})
    return 0


# -- parser ------------------------------------------------------------------------

def _add_run_flags(p, *, grid=True):
    p.add_argument("--config", help="JSON experiment config; explicit flags override its fields")
    p.add_argument("--process", help="family name, Family:k=v,... or a JSON object")
    p.add_argument("--seed", type=int)
    p.add_argument("--paths", type=int, help="number of Monte Carlo paths")
    p.add_argument("--out", help="output directory")
    p.add_argument("--convention", choices=[c.value for c in DriftConvention])
    p.add_argument("--scheme", help="exact or cp (compound Poisson)")
    p.add_argument("--epsilon", type=float, help="jump cutoff for the cp scheme")
    p.add_argument("--small-jumps", choices=["drop", "gaussian"], help="small-jump treatment for cp")
    p.add_argument("--horizon-steps", type=int, help="uniform steps per horizon (exact scheme)")
    p.add_argument("--grid-step", type=float)
    p.add_argument("--t-max", type=float, help="largest horizon (path length for simulate)")
    p.add_argument("--n-jobs", type=int)
    if grid:
        p.add_argument("--p", type=float, nargs="+", help="moment orders")
        p.add_argument("--t-min", type=float)
        p.add_argument("--grid-points", type=int)
        p.add_argument("--with-log", dest="with_log", action="store_true", default=None)
        p.add_argument("--no-log", dest="with_log", action="store_false")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levymoments",
        description="Small-time moments of the running supremum of Levy processes.",
        epilog="Precedence: defaults < --config file < explicit flags.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list the catalog processes")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("simulate", help="simulate paths to CSV and jump lists to JSON")
    _add_run_flags(p, grid=False)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("moment", help="estimate moment curves over a horizon grid")
    _add_run_flags(p)
    p.add_argument("--kind", choices=["sup", "marginal"], default="sup")
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("run", help="moment curves plus fits (curves.csv and fit.json)")
    _add_run_flags(p)
    p.set_defaults(func=lambda a: _cmd_run(a))

    p = sub.add_parser("fit", help="fit t^gamma (-log t)^delta to a curves CSV")
    p.add_argument("curves", help="CSV written by the moment command")
    p.add_argument("--p", type=float, nargs="+")
    p.add_argument("--with-log", action="store_true")
    p.add_argument("--exclude-largest", type=int)
    p.add_argument("--out", help="JSON output file (stdout if omitted)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("predict", help="predicted small-time rate")
    p.add_argument("--process", required=True)
    p.add_argument("--p", type=float, nargs="+", required=True)
    p.add_argument("--convention", choices=[c.value for c in DriftConvention])
    p.add_argument("--out")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("verify", help="compare predicted and fitted rates")
    _add_run_flags(p)
    p.add_argument("--full-table", dest="full_table", action="store_true",
                   help="run the built-in regression table of catalog processes")
    p.add_argument("--paper-table", dest="full_table", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("--tol-gamma", type=float)
    p.add_argument("--tol-delta", type=float)
    p.add_argument("--scale", type=float, default=1.0, help="path-count multiplier for --full-table")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("specfun", help="special-function diagnostics")
    fsub = p.add_subparsers(dest="function", required=True)
    b = fsub.add_parser("besselk", help="K_nu(z) by quadrature")
    b.add_argument("--nu", type=float, required=True)
    b.add_argument("--z", type=float, required=True)
    b.add_argument("--tol", type=float, default=1e-12)
    b.set_defaults(func=cmd_specfun)
    return parser


def _cmd_run(args):
    cfg = resolve_config(args)
    res = run_experiment(cfg)
    print(f"wrote {res['curves']} and {res['fit']}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (LevyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
