"""Experiment configuration, runs and the rate verification table."""

from __future__ import annotations

import json
import math
import os
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .exceptions import ConfigError, LevyError, NotCoveredError
from .levy_core import DriftConvention, ProcessSpec, hyperbolic, inverse_gaussian, make_process, meixner, nig
from .levy_core import gamma_process, stable, tempered_stable
from .moment_engine import moment_curves, write_curves_csv
from .rates import RateModel, fit_rate, predict_rate
from .sampler import Scheme

__all__ = [
    "ExperimentConfig",
    "VerifyRow",
    "VerifyReport",
    "run_experiment",
    "run_verify",
    "run_table",
    "RATE_TABLE",
    "VERIFY_TABLE",
    "TOL_GAMMA",
    "TOL_GAMMA_LOG",
    "TOL_DELTA",
]

TOL_GAMMA = 0.05
TOL_GAMMA_LOG = 0.1
TOL_DELTA = 0.3


@dataclass
class ExperimentConfig:
    """Everything needed to reproduce one experiment.

    ``process`` is ``{"family": ..., "params": {...}, "drift_a": optional}``.
    The horizon grid is geometric from ``t_max`` down to ``t_min``.
    """

    process: dict
    p_list: list = field(default_factory=lambda: [1.0])
    t_max: float = 2.0 ** -4
    t_min: float = 2.0 ** -16
    points: int = 13
    n_paths: int = 10_000
    scheme: Scheme = field(default_factory=Scheme)
    convention: DriftConvention = DriftConvention.RAW
    seed: int = 0
    output: str = "out"
    with_log: bool | None = None
    n_jobs: int = 1

    def __post_init__(self):
        self.p_list = [float(p) for p in np.atleast_1d(self.p_list)]
        if isinstance(self.scheme, dict):
            self.scheme = Scheme.from_dict(self.scheme)
        self.convention = DriftConvention(self.convention)

    def validate(self) -> "ExperimentConfig":
        if not isinstance(self.process, dict) or "family" not in self.process:
            raise ConfigError("process must be an object with a 'family' key")
        try:
            self.spec()
        except LevyError as exc:
            raise ConfigError(f"invalid process: {exc}") from None
        if not self.p_list or any(not p > 0 for p in self.p_list):
            raise ConfigError("p_list must contain positive powers")
        if not 0 < self.t_min < self.t_max <= 1:
            raise ConfigError(f"need 0 < t_min < t_max <= 1, got t_min={self.t_min}, t_max={self.t_max}")
        if int(self.points) < 2:
            raise ConfigError("points must be >= 2")
        if int(self.n_paths) < 100:
            raise ConfigError(f"n_paths must be >= 100, got {self.n_paths}")
        if int(self.seed) < 0:
            raise ConfigError("seed must be >= 0")
        if int(self.n_jobs) < 1:
            raise ConfigError("n_jobs must be >= 1")
        return self

    def spec(self) -> ProcessSpec:
        return ProcessSpec.from_dict(self.process)

    @property
    def t_grid(self) -> np.ndarray:
        return np.geomspace(self.t_max, self.t_min, int(self.points))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["scheme"] = self.scheme.to_dict()
        d["convention"] = self.convention.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**d)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad config: {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                return cls.from_json(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None


def _write_json(path, obj):
    try:
        with open(path, "w") as fh:
            json.dump(obj, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _ensure_dir(path):
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {path}: {exc}") from exc


def run_experiment(config: ExperimentConfig) -> dict:
    """Estimate sup-moment curves, fit them and write ``curves.csv`` and ``fit.json``.

    Outputs depend only on the config, so re-running overwrites the files
    with identical bytes.

    Returns
    -------
    dict
        ``{"curves": path, "fit": path, "results": {p: {...}}}``.
    """
    config.validate()
    spec = config.spec()
    curves = moment_curves(spec, config.p_list, config.t_grid, config.convention, config.scheme,
                           int(config.n_paths), int(config.seed), int(config.n_jobs))
    _ensure_dir(config.output)
    csv_path = os.path.join(config.output, "curves.csv")
    write_curves_csv(csv_path, [curves[("sup", p)] for p in config.p_list])
    results = {}
    for p in config.p_list:
        curve = curves[("sup", p)]
        entry = {}
        try:
            pred = predict_rate(spec, p, config.convention)
            entry["predicted"] = pred.to_dict()
        except NotCoveredError as exc:
            pred = None
            entry["predicted"] = {"status": "not covered", "reason": str(exc)}
        with_log = config.with_log if config.with_log is not None else bool(pred and pred.delta != 0)
        try:
            entry["fit"] = fit_rate(curve, with_log=with_log).to_dict()
        except LevyError as exc:
            entry["fit"] = {"status": "failed", "reason": str(exc)}
        results[repr(p)] = entry
    fit_path = os.path.join(config.output, "fit.json")
    _write_json(fit_path, {"config": config.to_dict(), "results": results})
    return {"curves": csv_path, "fit": fit_path, "results": results}


# -- verification ---------------------------------------------------------------

@dataclass
class VerifyRow:
    """One (process, p) comparison of predicted and fitted rates."""

    label: str
    family: str
    params: dict
    p: float
    status: str  # pass, fail, not covered, not simulated, error
    predicted: RateModel | None = None
    fitted: RateModel | None = None
    runtime: float = 0.0
    n_paths: int = 0
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self):
        return {
            "label": self.label,
            "family": self.family,
            "params": self.params,
            "p": self.p,
            "status": self.status,
            "predicted": None if self.predicted is None else self.predicted.to_dict(),
            "fitted": None if self.fitted is None else self.fitted.to_dict(),
            "runtime": self.runtime,
            "n_paths": self.n_paths,
            "reason": self.reason,
        }


@dataclass
class VerifyReport:
    rows: list
    tol_gamma: float
    tol_delta: float

    @property
    def failed(self) -> list:
        return [r for r in self.rows if r.status in ("fail", "error")]

    @property
    def ok(self) -> bool:
        return not self.failed

    def to_dict(self):
        return {"tol_gamma": self.tol_gamma, "tol_delta": self.tol_delta,
                "rows": [r.to_dict() for r in self.rows]}

    def table(self) -> str:
        head = f"{'row':<44} {'p':>6} {'pred (g,d)':>14} {'fit (g,d)':>16} {'status':>13} {'sec':>7}"
        lines = [head, "-" * len(head)]
        for r in self.rows:
            pred = "-" if r.predicted is None else f"({r.predicted.gamma:.3g},{r.predicted.delta:.3g})"
            fit = "-" if r.fitted is None else f"({r.fitted.gamma:.3f},{r.fitted.delta:.3f})"
            lines.append(f"{r.label:<44} {r.p:>6.3g} {pred:>14} {fit:>16} {r.status:>13} {r.runtime:>7.1f}")
        return "\n".join(lines)


def _judge(pred: RateModel, fit: RateModel, with_log: bool, tol_gamma, tol_delta):
    tg = tol_gamma if tol_gamma is not None else (TOL_GAMMA_LOG if with_log else TOL_GAMMA)
    ok = abs(fit.gamma - pred.gamma) <= tg
    if pred.delta > 0:
        ok = ok and abs(fit.delta - pred.delta) <= tol_delta
    return ok


def _verify_one(label, spec, p, convention, scheme, t_grid, n_paths, seed, with_log, tol_gamma, tol_delta,
                n_jobs=1, simulate=True):
    start = time.perf_counter()
    base = dict(label=label, family=spec.family.value, params=dict(spec.params), p=float(p))
    try:
        pred = predict_rate(spec, p, convention)
    except NotCoveredError as exc:
        return VerifyRow(status="not covered", reason=str(exc), **base)
    if not simulate:
        return VerifyRow(status="not simulated", predicted=pred, reason="no sampler for this family", **base)
    with_log = pred.delta != 0 if with_log is None else with_log
    try:
        curve = moment_curves(spec, [p], t_grid, convention, scheme, n_paths, seed, n_jobs)[("sup", float(p))]
        fit = fit_rate(curve, with_log=with_log)
    except LevyError as exc:
        return VerifyRow(status="error", predicted=pred, reason=str(exc), runtime=time.perf_counter() - start,
                         n_paths=n_paths, **base)
    ok = _judge(pred, fit, with_log, tol_gamma, tol_delta)
    return VerifyRow(status="pass" if ok else "fail", predicted=pred, fitted=fit,
                     runtime=time.perf_counter() - start, n_paths=n_paths, **base)


def run_verify(config: ExperimentConfig, tol_gamma: float | None = None, tol_delta: float = TOL_DELTA,
               write: bool = True) -> VerifyReport:
    """Compare predicted and fitted rates for every ``p`` of a config.

    ``tol_gamma=None`` selects 0.05 for power-only fits and 0.1 for fits
    with the log term.  Rows without a covering bound are recorded as
    "not covered" and do not count as failures.
    """
    config.validate()
    spec = config.spec()
    rows = [
        _verify_one(f"{spec.family.value} {spec.params}", spec, p, config.convention, config.scheme,
                    config.t_grid, int(config.n_paths), int(config.seed), config.with_log,
                    tol_gamma, tol_delta, int(config.n_jobs))
        for p in config.p_list
    ]
    report = VerifyReport(rows, TOL_GAMMA if tol_gamma is None else tol_gamma, tol_delta)
    if write:
        _write_report(report, config.output)
    return report


def _write_report(report, out):
    _ensure_dir(out)
    _write_json(os.path.join(out, "verify.json"), report.to_dict())
    with open(os.path.join(out, "verify.txt"), "w") as fh:
        fh.write(report.table() + "\n")


# Rates stated for the catalog, as exponent pairs; None marks "no bound".
# (label, process factory, p, convention or None for the natural one, expected)
RATE_TABLE = [
    ("Gamma", gamma_process, 0.25, None, (1.0, 0.0)),
    ("Gamma", gamma_process, 0.5, None, (1.0, 0.0)),
    ("Gamma", gamma_process, 1.0, None, (1.0, 0.0)),
    ("Gamma", gamma_process, 2.0, None, (1.0, 0.0)),
    ("Gamma", gamma_process, 3.0, None, (1.0, 0.0)),
    ("stable a=1.5 non-strict", lambda: stable(1.5, 1.0, 0.5, drift=0.2), 0.75, "raw", (0.5, 0.0)),
    ("stable a=1.2 non-strict", lambda: stable(1.2, 0.3, 1.0, drift=-1.0), 1.0, "raw", (1.0 / 1.2, 0.0)),
    ("stable a=0.5 non-strict", lambda: stable(0.5, 1.0, 0.5, drift=0.3), 0.25, "compensated", (0.5, 0.0)),
    ("stable a=0.8 non-strict", lambda: stable(0.8, 1.0, 0.0, drift=0.0), 0.4, "compensated", (0.5, 0.0)),
    ("stable a=1 non-strict", lambda: stable(1.0, 1.0, 0.5), 0.5, "raw", (0.5, 0.5)),
    ("stable a=1 non-strict", lambda: stable(1.0, 0.0, 1.0), 0.8, "raw", (0.8, 0.8)),
    ("strictly stable a=1.5", lambda: stable(1.5), 0.75, "raw", (0.5, 0.0)),
    ("strictly stable a=1.2 skewed", lambda: stable(1.2, 1.0, 0.3), 0.6, "raw", (0.5, 0.0)),
    ("strictly stable a=0.5 one-sided", lambda: stable(0.5, 1.0, 0.0), 0.2, "raw", (0.4, 0.0)),
    ("strictly stable a=0.5", lambda: stable(0.5, 1.0, 0.5), 0.2, "compensated", (0.4, 0.0)),
    ("Cauchy", lambda: stable(1.0), 0.5, "raw", (0.5, 0.0)),
    ("Cauchy", lambda: stable(1.0), 0.9, "raw", (0.9, 0.0)),
    ("stable a=1.5", lambda: stable(1.5), 1.5, "raw", None),
    ("stable a=1.5", lambda: stable(1.5), 2.0, "raw", None),
    ("stable a=0.5", lambda: stable(0.5, 1.0, 0.0), 0.7, "raw", None),
    ("Cauchy", lambda: stable(1.0), 1.0, "raw", None),
    ("tempered stable a=0.3", lambda: tempered_stable(0.3, 1.0), 0.1, "raw", (1.0 / 3.0, 0.0)),
    ("tempered stable a=0.3", lambda: tempered_stable(0.3, 1.0), 0.3, "raw", (1.0, 1.0)),
    ("tempered stable a=0.3", lambda: tempered_stable(0.3, 1.0), 0.5, "raw", (1.0, 0.0)),
    ("tempered stable a=0.7", lambda: tempered_stable(0.7, 2.0), 0.35, "raw", (0.5, 0.0)),
    ("tempered stable a=0.7", lambda: tempered_stable(0.7, 2.0), 0.7, "raw", (1.0, 1.0)),
    ("tempered stable a=0.7", lambda: tempered_stable(0.7, 2.0), 1.5, "raw", (1.0, 0.0)),
    ("inverse Gaussian", lambda: inverse_gaussian(1.0), 0.25, "raw", (0.5, 0.0)),
    ("inverse Gaussian", lambda: inverse_gaussian(1.0), 0.5, "raw", (1.0, 1.0)),
    ("inverse Gaussian", lambda: inverse_gaussian(1.0), 1.0, "raw", (1.0, 0.0)),
    ("inverse Gaussian", lambda: inverse_gaussian(1.0), 2.0, "raw", (1.0, 0.0)),
    ("NIG", lambda: nig(2.0, 0.5, 1.0), 2.0, "raw", (1.0, 0.0)),
    ("NIG", lambda: nig(2.0, 0.5, 1.0), 1.5, "raw", (1.0, 0.0)),
    ("NIG", lambda: nig(2.0, 0.5, 1.0), 1.0, "raw", (1.0, 1.0)),
    ("NIG", lambda: nig(2.0, 0.5, 1.0), 0.5, "raw", (0.5, 0.5)),
    ("NIG symmetric", lambda: nig(1.0, 0.0, 1.0), 0.5, "raw", (0.5, 0.0)),
    ("NIG symmetric", lambda: nig(1.0, 0.0, 1.0), 1.0, "raw", (1.0, 1.0)),
    ("NIG symmetric", lambda: nig(1.0, 0.0, 1.0), 2.0, "raw", (1.0, 0.0)),
    ("hyperbolic", lambda: hyperbolic(1.0, 1.0), 2.0, "raw", (1.0, 0.0)),
    ("hyperbolic", lambda: hyperbolic(1.0, 1.0), 0.5, "raw", (0.5, 0.0)),
    ("hyperbolic", lambda: hyperbolic(1.0, 1.0), 1.0, "raw", (1.0, 1.0)),
    ("Meixner", lambda: meixner(1.0, 1.0), 2.0, "raw", (1.0, 0.0)),
    ("Meixner", lambda: meixner(1.0, 1.0), 1.0, "raw", (1.0, 1.0)),
    ("Meixner", lambda: meixner(1.0, 1.0), 0.5, "raw", (0.5, 0.5)),
    ("Meixner symmetric", lambda: meixner(0.0, 1.0), 0.5, "raw", (0.5, 0.0)),
    ("Meixner symmetric", lambda: meixner(0.0, 1.0), 1.0, "raw", (1.0, 1.0)),
]


def _grid(k_max, k_min=4):
    return 2.0 ** -np.arange(k_min, k_max + 1, dtype=float)


# Simulated rows: (label, factory, p, convention, scheme, t_grid, n_paths, with_log)
VERIFY_TABLE = [
    ("Gamma", gamma_process, 0.5, "raw", Scheme.exact(), _grid(16, 6), 100_000, None),
    ("Gamma", gamma_process, 2.0, "raw", Scheme.exact(), _grid(10), 1_000_000, None),
    ("Cauchy", lambda: stable(1.0), 0.5, "raw", Scheme.exact(horizon_steps=64), _grid(14), 40_000, None),
    ("strictly stable a=1.5", lambda: stable(1.5), 0.6, "raw", Scheme.exact(horizon_steps=64), _grid(14),
     40_000, None),
    ("strictly stable a=0.5 one-sided", lambda: stable(0.5, 1.0, 0.0), 0.2, "raw", Scheme.exact(), _grid(16),
     100_000, None),
    ("tempered stable a=0.3", lambda: tempered_stable(0.3, 1.0), 0.1, "raw", Scheme.exact(), _grid(16),
     100_000, None),
    ("inverse Gaussian", lambda: inverse_gaussian(1.0), 0.25, "raw", Scheme.exact(), _grid(16), 100_000, None),
    ("inverse Gaussian", lambda: inverse_gaussian(1.0), 1.0, "raw", Scheme.exact(), _grid(16), 100_000, None),
    ("inverse Gaussian (log)", lambda: inverse_gaussian(1.0), 0.5, "raw", Scheme.exact(), _grid(16, 6),
     1_000_000, True),
    ("NIG symmetric", lambda: nig(1.0, 0.0, 1.0), 0.5, "raw", Scheme.exact(horizon_steps=64), _grid(14),
     40_000, None),
    ("NIG symmetric (log)", lambda: nig(1.0, 0.0, 1.0), 1.0, "raw", Scheme.exact(horizon_steps=64),
     _grid(16, 6), 400_000, True),
    ("NIG symmetric", lambda: nig(1.0, 0.0, 1.0), 2.0, "raw", Scheme.exact(horizon_steps=64), _grid(11, 5),
     200_000, None),
    ("Meixner symmetric", lambda: meixner(0.0, 1.0), 2.0, "raw", Scheme.compound_poisson(2.0 ** -10),
     _grid(11, 5), 100_000, None),
    ("hyperbolic", lambda: hyperbolic(1.0, 1.0), 1.0, "raw", None, None, 0, None),
    ("stable a=1.5", lambda: stable(1.5), 1.5, "raw", None, None, 0, None),
]


def run_table(out: str | None = None, tol_gamma: float | None = None, tol_delta: float = TOL_DELTA,
              seed: int = 20240601, n_jobs: int = 1, scale: float = 1.0) -> VerifyReport:
    """Run every row of :data:`VERIFY_TABLE`.

    ``scale`` multiplies the per-row path counts (minimum 1000).
    """
    rows = []
    for i, (label, factory, p, conv, scheme, grid, n, with_log) in enumerate(VERIFY_TABLE):
        spec = factory()
        n_eff = max(1000, int(round(n * scale)))
        rows.append(_verify_one(label, spec, p, conv, scheme, grid, n_eff, seed + i, with_log,
                                tol_gamma, tol_delta, n_jobs, simulate=scheme is not None))
    report = VerifyReport(rows, TOL_GAMMA if tol_gamma is None else tol_gamma, tol_delta)
    if out:
        _write_report(report, out)
    return report
