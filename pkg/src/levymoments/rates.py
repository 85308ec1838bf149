"""Small-time rates for running-supremum moments.

A rate is a pair ``(gamma, delta)`` meaning
``E sup_{s<=t} |U_s|**p = O(t**gamma * (-log t)**delta)`` as ``t -> 0``.

* :func:`predict_rate` returns the sharpest known rate for a process, a
  power ``p`` and a drift convention ``U``.
* :func:`compensator_integrals` evaluates the time-space integrals against
  the Lévy measure that drive those bounds.
* :func:`fit_rate` and :class:`RateRegressor` estimate the pair from a
  Monte Carlo moment curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from ._integrate import quad
from .exceptions import DivergentIntegralError, DomainError, LevyError, NotCoveredError
from .levy_core import (
    DriftConvention,
    LevyMeasure,
    PowerLawMeasure,
    ProcessSpec,
    StableMeasure,
    bg_index,
    drift_rate,
)

__all__ = [
    "RateSource",
    "RateModel",
    "CompensatorIntegrals",
    "predict_rate",
    "compensator_integrals",
    "fit_rate",
    "fit_curve_arrays",
    "RateRegressor",
    "AIC_MARGIN",
]

AIC_MARGIN = 2.0
MIN_POINTS = 6
SE_FLOOR = 1e-12
_DRIFT_TOL = 1e-12


class RateSource(str, Enum):
    """Where a rate comes from."""

    LARGE_POWER = "large_power"  # p above the index: linear in t
    BELOW_INDEX = "below_index"  # p below the index: t^(p/beta) with slowly varying corrections
    AT_INDEX = "at_index"  # p at the index under a pure power-law bound: log correction
    SLOWLY_VARYING_ENVELOPE = "slowly_varying_envelope"  # below-index rate for monotone unbounded/vanishing l
    STRICT_STABLE_SCALING = "strict_stable_scaling"  # exact self-similarity
    FITTED = "fitted"


@dataclass(frozen=True)
class RateModel:
    """``m(t) ~ c * t**gamma * (-log t)**delta``.

    Predicted models leave ``constant`` unset.  Fitted models carry
    standard errors.  ``slack`` records the free parameters ``(r, q, eps)``
    behind a below-index bound.
    """

    gamma: float
    delta: float
    source: RateSource
    constant: float | None = None
    stderr_gamma: float | None = None
    stderr_delta: float | None = None
    slack: dict | None = None
    process: DriftConvention | None = None
    n_points: int | None = None
    prefers_log: bool | None = None
    note: str = ""

    @property
    def exponents(self):
        return (self.gamma, self.delta)

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "delta": self.delta,
            "stderr_gamma": self.stderr_gamma,
            "stderr_delta": self.stderr_delta,
            "source": self.source.value,
            "n_points": self.n_points,
            "constant": self.constant,
            "prefers_log": self.prefers_log,
            "process": None if self.process is None else self.process.value,
            "slack": self.slack,
            "note": self.note,
        }


# -- prediction -------------------------------------------------------------------

def _as_spec(obj) -> tuple:
    """(measure, spec or None) from a ProcessSpec or a bare measure."""
    if isinstance(obj, ProcessSpec):
        return obj.measure, obj
    if isinstance(obj, LevyMeasure):
        return obj, None
    raise DomainError(f"expected ProcessSpec or LevyMeasure, got {type(obj).__name__}")


def _dominant(a, b):
    """The slower-decaying of two (gamma, delta) rates as t -> 0."""
    if a[0] != b[0]:
        return a if a[0] < b[0] else b
    return a if a[1] >= b[1] else b


def _envelope(beta, p, lower_q, r_max):
    r = min(r_max, beta + (r_max - beta) / 2.0)
    q = max(lower_q, beta * 15.0 / 16.0)
    return r, q


def predict_rate(process, p: float, convention: DriftConvention | str | None = None) -> RateModel:
    """Sharpest known small-time rate of ``E sup_{s<=t}|U_s|**p``.

    Parameters
    ----------
    process : ProcessSpec or LevyMeasure
        A bare measure is treated as a process with drift 0.
    p : float
    convention : DriftConvention, optional
        The process ``U``.  ``None`` selects the convention for which the
        bound is stated; a different convention adds a linear drift whose
        ``t**p`` contribution is folded into the rate.

    Raises
    ------
    NotCoveredError
        If no bound covers the combination; the message names the gap.
    """
    p = float(p)
    if not p > 0:
        raise DomainError(f"p must be > 0, got {p}")
    measure, spec = _as_spec(process)
    beta = bg_index(measure)
    sym = measure.symmetric
    b = measure.log_power
    if not measure.moment_exists(p):
        raise NotCoveredError(f"E|X_1|^{p} is infinite, so the supremum moment is infinite; no rate applies")

    model = _base_rate(measure, spec, p, beta, sym, b)
    if convention is None:
        return model
    convention = DriftConvention(convention)
    if convention is model.process:
        return model
    if spec is None:
        raise NotCoveredError("a drift convention other than the natural one needs a ProcessSpec")
    try:
        d = drift_rate(spec, convention) - drift_rate(spec, model.process)
    except LevyError as exc:
        raise NotCoveredError(f"convention {convention.value} is undefined for this process: {exc}") from None
    if abs(d) <= _DRIFT_TOL:
        return _replace(model, process=convention)
    g, dl = _dominant((model.gamma, model.delta), (p, 0.0))
    note = model.note
    if (g, dl) != (model.gamma, model.delta):
        note = f"linear drift {d:.6g} dominates: |d t|^p ~ t^{p}"
    return _replace(model, gamma=g, delta=dl, process=convention, note=note)


def _replace(model, **kw):
    data = {f: getattr(model, f) for f in model.__dataclass_fields__}
    data.update(kw)
    return RateModel(**data)


def _natural_large_p(p):
    if p < 1:
        return DriftConvention.COMPENSATED
    if p <= 2:
        return DriftConvention.CENTERED
    return DriftConvention.RAW


def _base_rate(measure, spec, p, beta, sym, b):
    # exact scaling for strictly stable laws
    if spec is not None and spec.strictly_stable and p < beta:
        return RateModel(p / beta, 0.0, RateSource.STRICT_STABLE_SCALING, process=DriftConvention.RAW,
                         note="self-similarity: m(t) = t^(p/alpha) m(1)")
    if p > beta:
        return RateModel(1.0, 0.0, RateSource.LARGE_POWER, process=_natural_large_p(p))
    bounded_l = b <= 0  # density dominated by C |x|^-(beta+1) near 0
    if p == beta:
        if beta > 0 and b < -1:  # int_{|x|<=1} |x|^beta dnu < inf
            return RateModel(1.0, 0.0, RateSource.LARGE_POWER, process=_natural_large_p(p),
                             note="p equals the index but |x|^p is integrable near 0")
        if beta == 1.0:
            if not bounded_l:
                raise NotCoveredError("p = beta = 1 needs a density bounded by C|x|^-2 near 0")
            return RateModel(1.0, 1.0, RateSource.AT_INDEX, process=DriftConvention.RAW)
        if 0 < beta < 2 and bounded_l:
            proc = DriftConvention.RAW if beta > 1 else DriftConvention.COMPENSATED
            return RateModel(1.0, 1.0, RateSource.AT_INDEX, process=proc)
        raise NotCoveredError(
            f"p = beta = {beta}: needs beta in (0,2) and a density bounded by C|x|^-(beta+1) near 0")

    # p < beta
    if beta == 1.0 and not sym:
        if bounded_l:
            return RateModel(p, p, RateSource.AT_INDEX, process=DriftConvention.RAW,
                             note="index 1 with asymmetric measure: (t(-log t))^p")
        raise NotCoveredError("beta = 1 with asymmetric measure and unbounded l: no bound available")
    if beta > 1:
        r_max, lower_q, proc = 2.0, max(p, 1.0), DriftConvention.RAW
        if sym:
            lower_q = p
    elif beta < 1:
        r_max = 2.0 if sym else 1.0
        lower_q, proc = p, DriftConvention.COMPENSATED
    else:  # beta == 1, symmetric: X - a t
        r_max, lower_q, proc = 2.0, p, DriftConvention.COMPENSATED
    r, q = _envelope(beta, p, lower_q, r_max)
    if beta == 2.0:
        delta = max(0.0, b * p / q)
    elif b > 0:
        delta = b * p / q
    elif b < 0:
        delta = b * p / r
    else:
        delta = 0.0
    source = RateSource.BELOW_INDEX if b == 0 else RateSource.SLOWLY_VARYING_ENVELOPE
    eps = beta - q if b > 0 else (r - beta if b < 0 else None)
    return RateModel(p / beta, delta, source, process=proc,
                     slack={"r": r, "q": q, "eps": eps})


# -- compensator integrals ------------------------------------------------------

@dataclass(frozen=True)
class CompensatorIntegrals:
    """Time-space integrals against ``nu`` restricted to ``|x| <= c``.

    small_jump = int_0^t int |x|^r 1{|x| <= s^(1/beta)} dnu ds
    big_jump   = int_0^t int |x|^q 1{|x| >  s^(1/beta)} dnu_1 ds
    psi        = int_0^t int x     1{|x| >  s^(1/beta)} dnu_1 ds
    """

    small_jump: float
    big_jump: float
    psi: float
    method: str = "quad"
    beta: float = math.nan
    r: float = math.nan
    q: float = math.nan
    t: float = math.nan
    extra: dict = field(default_factory=dict)


def _closed_form_ok(measure, beta):
    if isinstance(measure, PowerLawMeasure) and measure.pure:
        return measure.beta == beta
    return isinstance(measure, StableMeasure) and measure.alpha == beta


def _weights(measure):
    if isinstance(measure, StableMeasure):
        return measure.C1, measure.C2
    return measure.C1, measure.C2


def compensator_integrals(measure: LevyMeasure, beta: float, r: float, q: float, t: float,
                          c: float | None = None, method: str = "auto") -> CompensatorIntegrals:
    """Evaluate the small-jump, big-jump and ``psi`` integrals.

    The time integral is done analytically, leaving one integral over the
    jump size: ``small_jump = int |x|^r (t - |x|^beta)^+ dnu_1``,
    ``big_jump = int |x|^q min(|x|^beta, t) dnu_1`` and
    ``psi = int x min(|x|^beta, t) dnu_1``.

    Parameters
    ----------
    c : float, optional
        Truncation radius of ``nu_1``; defaults to ``measure.cutoff``.
    method : {"auto", "quad", "closed"}
        "auto" uses exact power-law formulas when the measure is a pure power
        law with index ``beta`` and quadrature otherwise.

    Raises
    ------
    DivergentIntegralError
        If ``r <= beta`` (the small-jump integral is infinite).
    """
    c = measure.cutoff if c is None else float(c)
    if method not in ("auto", "quad", "closed"):
        raise DomainError(f"unknown method {method!r}")
    if not 0 < beta <= 2:
        raise DomainError(f"beta must lie in (0, 2], got {beta}")
    if r <= beta:
        raise DivergentIntegralError(f"small-jump integral diverges for r={r} <= beta={beta}")
    if q > beta or q <= 0:
        raise DomainError(f"q must lie in (0, beta], got {q}")
    if t < 0 or t > c ** beta * (1 + 1e-12):
        raise DomainError(f"t must lie in [0, c^beta = {c ** beta}], got {t}")
    if t == 0:
        return CompensatorIntegrals(0.0, 0.0, 0.0, "exact", beta, r, q, t)
    closed = _closed_form_ok(measure, beta)
    if method == "closed" and not closed:
        raise DomainError("closed forms exist only for pure power-law measures with matching index")
    if method == "closed" or (method == "auto" and closed):
        sj, bj, ps = _closed(measure, beta, r, q, t, c)
        return CompensatorIntegrals(sj, bj, ps, "closed", beta, r, q, t)
    sj, bj, ps = _quadrature(measure, beta, r, q, t, c)
    return CompensatorIntegrals(sj, bj, ps, "quad", beta, r, q, t)


def _closed(measure, beta, r, q, t, c):
    c1, c2 = _weights(measure)
    cs = c1 + c2
    small = cs * beta / ((r - beta) * r) * t ** (r / beta)
    if q < beta:
        big = cs * beta / ((beta - q) * q) * t ** (q / beta) - cs * c ** (q - beta) * t / (beta - q)
    else:
        big = cs * (t * math.log(c) + (t / beta) * (1.0 - math.log(t)))
    if measure.symmetric:
        psi = 0.0
    elif beta == 1.0:
        psi = (c1 - c2) * (t + t * (math.log(c) - math.log(t)))
    else:
        psi = (c1 - c2) * (t ** (1.0 / beta) + t * (c ** (1.0 - beta) - t ** ((1.0 - beta) / beta)) / (1.0 - beta))
    return small, big, psi


def _quadrature(measure, beta, r, q, t, c):
    vs = math.log(t) / beta  # |x| = t^(1/beta)
    vc = math.log(c)
    v_lo = max(-700.0, vs - 60.0 / max(min(r - beta, q + 1e-9), 1e-3))

    def x2(s, v):
        return float(measure.x2_density(s * math.exp(v)))

    small = big = psi = 0.0
    signs = measure._signs()
    for s in signs:
        small += _split(lambda v: math.exp((r - 1.0) * v) * x2(s, v) * (t - math.exp(beta * v)), v_lo, vs)
        inner = max(-700.0, vs - 60.0 / max(q, 1e-3))
        big += _split(lambda v: math.exp((q - 1.0 + beta) * v) * x2(s, v), inner, vs)
        if vc > vs:
            big += t * _split(lambda v: math.exp((q - 1.0) * v) * x2(s, v), vs, vc)
    if not measure.symmetric:
        inner = max(-700.0, vs - 60.0)
        for s in signs:
            part = _split(lambda v: math.exp(beta * v) * x2(s, v), inner, vs)
            if vc > vs:
                part += t * _split(lambda v: x2(s, v), vs, vc)
            psi += s * part
    return small, big, psi


def _split(g, a, b, width=4.0):
    n = max(1, int(math.ceil((b - a) / width)))
    edges = np.linspace(a, b, n + 1)
    return sum(quad(g, lo, hi, what="compensator integral", epsabs=0.0, epsrel=1e-10)[0]
               for lo, hi in zip(edges[:-1], edges[1:]))


# -- fitting --------------------------------------------------------------------

def _design(t, with_log):
    cols = [np.ones_like(t), np.log(t)]
    if with_log:
        cols.append(np.log(-np.log(t)))
    return np.column_stack(cols)


def _wls(t, m, se, with_log):
    a = _design(t, with_log)
    w = (m / se) ** 2
    aw = a * w[:, None]
    ata = a.T @ aw
    if np.linalg.matrix_rank(a) < a.shape[1] or np.linalg.cond(ata) > 1e14 * max(1.0, w.max() / w.min()):
        raise DomainError("singular design: the t-grid is too narrow to separate the regressors")
    y = np.log(m)
    coef = np.linalg.solve(ata, aw.T @ y)
    resid = y - a @ coef
    chi2 = float(np.sum(w * resid ** 2))
    dof = max(1, t.size - a.shape[1])
    cov = np.linalg.inv(ata) * max(1.0, chi2 / dof)
    return coef, cov, chi2


def _prepare(t, m, se, with_log, exclude_largest):
    t = np.asarray(t, dtype=float)
    m = np.asarray(m, dtype=float)
    se = np.zeros_like(m) if se is None else np.asarray(se, dtype=float)
    if not (t.shape == m.shape == se.shape) or t.ndim != 1:
        raise DomainError("t, estimates and standard errors must be 1-D arrays of equal length")
    keep = t > 0
    t, m, se = t[keep], m[keep], se[keep]
    order = np.argsort(t)
    t, m, se = t[order], m[order], se[order]
    if exclude_largest is None:
        exclude_largest = 2 if with_log else 0
    if exclude_largest:
        t, m, se = t[:-exclude_largest], m[:-exclude_largest], se[:-exclude_largest]
    if t.size < MIN_POINTS:
        raise DomainError(f"need at least {MIN_POINTS} grid points with t > 0, got {t.size}")
    if np.any(m <= 0):
        raise DomainError("all estimates must be > 0 for a log-log fit")
    if with_log and np.any(t >= 1):
        raise DomainError("log-corrected fits need t < 1")
    se = np.maximum(se, SE_FLOOR * m)
    return t, m, se


def fit_curve_arrays(t, m, se=None, with_log=False, exclude_largest=None) -> RateModel:
    """Weighted least squares fit of ``log m = log c + gamma log t [+ delta log(-log t)]``.

    Weights are ``(m / se)**2``; standard errors are floored at ``1e-12 m``.
    The covariance is inflated by the reduced chi-square when it exceeds 1.
    """
    t, m, se = _prepare(t, m, se, with_log, exclude_largest)
    coef, cov, chi2 = _wls(t, m, se, with_log)
    # AIC-style comparison on the same points
    prefers = None
    if np.all(t < 1):
        other = _wls(t, m, se, not with_log)[2]
        aic_self = chi2 + 2 * (3 if with_log else 2)
        aic_other = other + 2 * (2 if with_log else 3)
        aic_log, aic_pow = (aic_self, aic_other) if with_log else (aic_other, aic_self)
        prefers = bool(aic_log + AIC_MARGIN < aic_pow)
    sd = np.sqrt(np.diag(cov))
    return RateModel(
        gamma=float(coef[1]),
        delta=float(coef[2]) if with_log else 0.0,
        source=RateSource.FITTED,
        constant=float(math.exp(coef[0])),
        stderr_gamma=float(sd[1]),
        stderr_delta=float(sd[2]) if with_log else 0.0,
        n_points=int(t.size),
        prefers_log=prefers,
    )


def fit_rate(curve, with_log: bool = False, exclude_largest: int | None = None) -> RateModel:
    """Fit ``(gamma, delta)`` to a :class:`~levymoments.moment_engine.MomentCurve`.

    With ``with_log`` the two largest horizons are dropped by default,
    since log corrections are a small-t statement.

    Raises
    ------
    DomainError
        Fewer than 6 usable points, a nonpositive estimate, or a singular design.
    """
    return fit_curve_arrays(curve.t_grid, curve.values, curve.std_errors, with_log, exclude_largest)


class RateRegressor(RegressorMixin, BaseEstimator):
    """Scikit-learn estimator for ``m(t) = c t**gamma (-log t)**delta``.

    Parameters
    ----------
    with_log : bool
        Include the ``log(-log t)`` regressor.
    exclude_largest : int or None
        Number of largest ``t`` dropped before fitting (default 2 with the
        log term, else 0).

    Attributes
    ----------
    gamma_, delta_, constant_, stderr_gamma_, stderr_delta_ : float
    model_ : RateModel
    """

    def __init__(self, with_log=False, exclude_largest=None):
        self.with_log = with_log
        self.exclude_largest = exclude_largest

    def fit(self, X, y, std_error=None):
        t = np.asarray(X, dtype=float).reshape(-1)
        model = fit_curve_arrays(t, np.asarray(y, dtype=float), std_error, self.with_log, self.exclude_largest)
        self.model_ = model
        self.gamma_ = model.gamma
        self.delta_ = model.delta
        self.constant_ = model.constant
        self.stderr_gamma_ = model.stderr_gamma
        self.stderr_delta_ = model.stderr_delta
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "model_")
        t = np.asarray(X, dtype=float).reshape(-1)
        out = self.constant_ * t ** self.gamma_
        if self.with_log:
            out = out * (-np.log(t)) ** self.delta_
        return out

    def score(self, X, y, sample_weight=None):
        """R^2 on the log scale."""
        from sklearn.metrics import r2_score

        return r2_score(np.log(np.asarray(y, dtype=float)), np.log(self.predict(X)), sample_weight=sample_weight)
