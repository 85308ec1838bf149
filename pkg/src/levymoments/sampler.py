"""Path simulation for catalog processes.

Two schemes are offered:

* ``ExactIncrement`` sums exact draws of ``X_dt`` on a time grid (Gamma,
  Stable, inverse Gaussian, tempered stable, NIG).
* ``CompoundPoisson`` keeps every jump larger than ``eps`` and replaces the
  small ones either by their mean (drift) or by a Brownian motion with the
  same variance rate.  Between events such a path is linear, so its running
  supremum is read off exactly at the event times.

All randomness flows through explicit ``numpy.random.Generator`` objects.
Streams are counter-based (Philox keyed by ``(seed, index)``), which makes
results independent of how work is split across processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.interpolate import PchipInterpolator

from .exceptions import DomainError, UnsupportedOperationError
from .levy_core import (
    DriftConvention,
    Family,
    LevyMeasure,
    PowerLawMeasure,
    ProcessSpec,
    StableMeasure,
    drift_rate,
)

__all__ = [
    "SchemeKind",
    "SmallJumpMode",
    "Scheme",
    "PathSample",
    "path_stream",
    "block_stream",
    "sample_increment",
    "sample_increments",
    "sample_path",
    "path_sup",
    "default_epsilon",
    "jump_table",
    "simulate_block",
    "block_sups",
]

TABLE_POINTS = 4096
TABLE_TOL = 1e-6
_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)
_BLOCK_DOMAIN = 1 << 62
_EULER_GAMMA = 0.5772156649015329


class SchemeKind(str, Enum):
    EXACT = "ExactIncrement"
    COMPOUND_POISSON = "CompoundPoisson"


class SmallJumpMode(str, Enum):
    DROP = "DropAndCompensate"
    GAUSSIAN = "GaussianSubstitute"


@dataclass(frozen=True)
class Scheme:
    """Simulation scheme.

    Parameters
    ----------
    kind : SchemeKind
    epsilon : float, optional
        Jump cutoff for CompoundPoisson; defaults to ``min(0.01, c/10)``.
    small_jump_mode : SmallJumpMode
        Treatment of jumps below ``epsilon``.
    grid_step : float, optional
        Step of the uniform evaluation grid.  For ExactIncrement it defaults
        to ``T/1024``; for GaussianSubstitute it is the Brownian grid.
    horizon_steps : int, optional
        Extra uniform grid of this many steps on ``[0, t]`` for every
        requested horizon ``t`` (ExactIncrement only).  On a geometric
        horizon grid this makes the grid bias of the running supremum the
        same at every scale.  When given without ``grid_step`` the uniform
        ``T/1024`` grid is not added.
    """

    kind: SchemeKind = SchemeKind.EXACT
    epsilon: float | None = None
    small_jump_mode: SmallJumpMode = SmallJumpMode.DROP
    grid_step: float | None = None
    horizon_steps: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", SchemeKind(self.kind))
        object.__setattr__(self, "small_jump_mode", SmallJumpMode(self.small_jump_mode))
        if self.epsilon is not None and not self.epsilon > 0:
            raise DomainError(f"epsilon must be > 0, got {self.epsilon}")
        if self.grid_step is not None and not self.grid_step > 0:
            raise DomainError(f"grid_step must be > 0, got {self.grid_step}")
        if self.horizon_steps is not None and int(self.horizon_steps) < 1:
            raise DomainError("horizon_steps must be a positive integer")

    @classmethod
    def exact(cls, grid_step=None, horizon_steps=None):
        return cls(SchemeKind.EXACT, grid_step=grid_step, horizon_steps=horizon_steps)

    @classmethod
    def compound_poisson(cls, epsilon=None, mode=SmallJumpMode.DROP, grid_step=None):
        return cls(SchemeKind.COMPOUND_POISSON, epsilon=epsilon, small_jump_mode=mode, grid_step=grid_step)

    def eps_for(self, measure: LevyMeasure) -> float:
        return default_epsilon(measure) if self.epsilon is None else float(self.epsilon)

    def validate(self, spec: ProcessSpec, T: float):
        if not T > 0:
            raise DomainError(f"T must be > 0, got {T}")
        if self.kind is SchemeKind.EXACT:
            if spec.family not in _EXACT_FAMILIES:
                raise UnsupportedOperationError(
                    f"no exact increment sampler for {spec.family.value}; use CompoundPoisson")
            if self.grid_step is not None and self.grid_step > T:
                raise DomainError(f"grid_step {self.grid_step} exceeds T={T}")
        else:
            if spec.family is Family.HYPERBOLIC:
                raise UnsupportedOperationError("hyperbolic motion has no sampler")
            eps = self.eps_for(spec.measure)
            if eps >= spec.measure.cutoff:
                raise DomainError(f"epsilon={eps} must be below the cutoff c={spec.measure.cutoff}")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "epsilon": self.epsilon,
            "small_jump_mode": self.small_jump_mode.value,
            "grid_step": self.grid_step,
            "horizon_steps": self.horizon_steps,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Scheme":
        return cls(
            SchemeKind(d.get("kind", SchemeKind.EXACT.value)),
            epsilon=d.get("epsilon"),
            small_jump_mode=SmallJumpMode(d.get("small_jump_mode", SmallJumpMode.DROP.value)),
            grid_step=d.get("grid_step"),
            horizon_steps=d.get("horizon_steps"),
        )

    @property
    def label(self) -> str:
        if self.kind is SchemeKind.EXACT:
            return "ExactIncrement"
        return f"CompoundPoisson(eps={self.epsilon},{self.small_jump_mode.value})"


def default_epsilon(measure: LevyMeasure) -> float:
    return min(0.01, measure.cutoff / 10.0)


# -- random streams ----------------------------------------------------------

def _check_seed(seed):
    seed = int(seed)
    if not 0 <= seed < 2 ** 64:
        raise DomainError(f"seed must lie in [0, 2**64), got {seed}")
    return seed


def path_stream(seed: int, index: int) -> np.random.Generator:
    """Independent stream for path ``index`` under master ``seed``."""
    return np.random.Generator(np.random.Philox(key=[_check_seed(seed), int(index)]))


def block_stream(seed: int, block: int) -> np.random.Generator:
    """Stream for a block of paths used by the Monte Carlo engine."""
    return np.random.Generator(np.random.Philox(key=[_check_seed(seed), _BLOCK_DOMAIN + int(block)]))


# -- exact increment samplers -------------------------------------------------

_EXACT_FAMILIES = {Family.GAMMA, Family.STABLE, Family.INVERSE_GAUSSIAN, Family.TEMPERED_STABLE, Family.NIG}
_natural_cache: dict = {}


def _drift_offset(spec: ProcessSpec) -> float:
    """Difference between the spec drift and the drift the samplers assume."""
    if spec.family is Family.STABLE:
        return 0.0  # location handled inside the stable mapping
    if spec.family is Family.GAMMA:
        return spec.drift - (1.0 - math.exp(-1.0))
    key = spec.measure.key
    if key not in _natural_cache:
        _natural_cache[key] = spec.measure.small_jump_mean()
    return spec.drift - _natural_cache[key]


def _cms(rng, alpha, skew, size):
    """Standard stable variates S_alpha(1, skew, 0) (Chambers-Mallows-Stuck)."""
    v = rng.uniform(-0.5 * math.pi, 0.5 * math.pi, size)
    w = rng.standard_exponential(size)
    if alpha == 1.0:
        hp = 0.5 * math.pi + skew * v
        return (2.0 / math.pi) * (hp * np.tan(v) - skew * np.log(0.5 * math.pi * w * np.cos(v) / hp))
    tq = skew * math.tan(0.5 * math.pi * alpha)
    b = math.atan(tq) / alpha
    s = (1.0 + tq * tq) ** (0.5 / alpha)
    return (s * np.sin(alpha * (v + b)) / np.cos(v) ** (1.0 / alpha)
            * (np.cos(v - alpha * (v + b)) / w) ** ((1.0 - alpha) / alpha))


def _stable_params(spec):
    alpha, c1, c2 = spec.params["alpha"], spec.params["C1"], spec.params["C2"]
    skew = (c1 - c2) / (c1 + c2)
    if alpha == 1.0:
        sigma = (c1 + c2) * math.pi / 2.0
        mu = spec.drift + (c1 - c2) * (1.0 - _EULER_GAMMA)
    else:
        sigma = ((c1 + c2) * math.gamma(1.0 - alpha) * math.cos(0.5 * math.pi * alpha) / alpha) ** (1.0 / alpha)
        mu = spec.drift - (c1 - c2) / (1.0 - alpha)
    return alpha, skew, sigma, mu


def _stable_increments(rng, spec, dt, size):
    alpha, skew, sigma, mu = _stable_params(spec)
    scale = sigma * dt ** (1.0 / alpha)
    z = _cms(rng, alpha, skew, size)
    out = scale * z + mu * dt
    if alpha == 1.0:
        out = out + (2.0 / math.pi) * skew * scale * np.log(scale)
    return out


def _ig_draw(rng, mean, shape, size):
    """Inverse Gaussian IG(mean, shape) by Michael-Schucany-Haas.

    The smaller root is computed as ``2 shape mean / (2 shape + mean y + R)``,
    which avoids the cancellation of the textbook form when ``shape << mean``.
    """
    y = rng.standard_normal(size) ** 2
    my = mean * y
    r = np.sqrt(my * my + 4.0 * mean * shape * y)
    x = 2.0 * shape * mean / (2.0 * shape + my + r)
    u = rng.uniform(size=size)
    return np.where(u <= mean / (mean + x), x, mean * mean / x)


def _kanter(rng, alpha, size):
    """Positive stable variates with Laplace transform exp(-u**alpha)."""
    u = rng.uniform(0.0, math.pi, size)
    e = rng.standard_exponential(size)
    return (np.sin(alpha * u) / np.sin(u) ** (1.0 / alpha)
            * (np.sin((1.0 - alpha) * u) / e) ** ((1.0 - alpha) / alpha))


def _ts_increments(rng, alpha, tilt, dt, size):
    """Tempered stable increments by rejection from the stable subordinator."""
    dt = np.broadcast_to(np.asarray(dt, dtype=float), size).ravel()
    out = np.empty(dt.size)
    todo = np.arange(dt.size)
    while todo.size:
        s = 2.0 * dt[todo] ** (1.0 / alpha) * _kanter(rng, alpha, todo.size)
        keep = rng.uniform(size=todo.size) < np.exp(-tilt * s)
        out[todo[keep]] = s[keep]
        todo = todo[~keep]
    return out.reshape(size)


def sample_increments(spec: ProcessSpec, dt, rng: np.random.Generator, size=None) -> np.ndarray:
    """Draws of ``X_dt`` (``dt`` may be an array broadcast against ``size``)."""
    dt = np.asarray(dt, dtype=float)
    if size is None:
        size = dt.shape
    if np.any(dt <= 0):
        raise DomainError("dt must be > 0")
    fam = spec.family
    if fam not in _EXACT_FAMILIES:
        raise UnsupportedOperationError(
            f"no exact increment sampler for {fam.value}; use the CompoundPoisson scheme")
    dt = np.broadcast_to(dt, size)
    if fam is Family.GAMMA:
        x = rng.standard_gamma(dt, size)
    elif fam is Family.STABLE:
        x = _stable_increments(rng, spec, dt, size)
    elif fam is Family.INVERSE_GAUSSIAN:
        g = spec.params["gamma"]
        x = _ig_draw(rng, dt / g, dt * dt, size)
    elif fam is Family.TEMPERED_STABLE:
        m = spec.measure
        x = _ts_increments(rng, m.alpha, m.tilt, dt, size)
    else:  # NIG by Brownian subordination
        a, g, d = spec.params["alpha"], spec.params["gamma"], spec.params["delta"]
        v = _ig_draw(rng, dt * d / math.sqrt(a * a - g * g), (dt * d) ** 2, size)
        x = g * v + np.sqrt(v) * rng.standard_normal(size)
    off = _drift_offset(spec)
    return x + off * dt if off else x


def sample_increment(spec: ProcessSpec, dt: float, rng: np.random.Generator) -> float:
    """One draw from the law of ``X_dt``."""
    if not dt > 0:
        raise DomainError(f"dt must be > 0, got {dt}")
    return float(sample_increments(spec, np.array([float(dt)]), rng)[0])


# -- jump-size tables -----------------------------------------------------------

class _JumpTable:
    """Inverse CDF of ``|J|`` for jumps on one side with ``|J| > eps``."""

    def __init__(self, mass, inverse=None, pareto=None):
        self.mass = mass
        self._inv = inverse
        self._pareto = pareto  # (eps, beta, upper) for power laws

    def __call__(self, u):
        if self._pareto is not None:
            eps, b, upper = self._pareto
            # truncated Pareto on (eps, upper]
            lo = 0.0 if math.isinf(upper) else (upper / eps) ** -b
            return eps * (1.0 - u * (1.0 - lo)) ** (-1.0 / b)
        return np.exp(self._inv(u))


_table_cache: dict = {}


def jump_table(measure: LevyMeasure, eps: float, sign: int) -> _JumpTable:
    """Cached jump-size table for one side of the measure restricted to ``|x| > eps``."""
    key = (measure.key, float(eps), int(sign))
    tab = _table_cache.get(key)
    if tab is None:
        tab = _build_table(measure, eps, sign)
        _table_cache[key] = tab
    return tab


def _build_table(measure, eps, sign):
    masses = measure.tail_mass(eps)
    mass = masses[0] if sign > 0 else masses[1]
    if mass <= 0:
        return _JumpTable(0.0)
    if isinstance(measure, StableMeasure):
        return _JumpTable(mass, pareto=(eps, measure.alpha, math.inf))
    if isinstance(measure, PowerLawMeasure) and measure.pure:
        return _JumpTable(mass, pareto=(eps, measure.beta, measure.cutoff))

    def g(v):
        return measure.x2_density(sign * np.exp(v)) * np.exp(-v)

    v0 = math.log(eps)
    if math.isfinite(measure.support_radius):
        v1 = math.log(measure.support_radius)
    else:
        v1 = _table_upper(g, v0, mass)
    v = np.linspace(v0, v1, TABLE_POINTS)
    h = v[1] - v[0]
    # cumulative mass per interval by Gauss-Legendre
    nodes = v[:-1, None] + 0.5 * h * (_GL_X[None, :] + 1.0)
    pieces = 0.5 * h * (g(nodes) * _GL_W[None, :]).sum(axis=1)
    cdf = np.concatenate([[0.0], np.cumsum(pieces)])
    total = cdf[-1]
    cdf /= total
    keep = np.concatenate([[True], np.diff(cdf) > 0])
    inv = PchipInterpolator(cdf[keep], v[keep], extrapolate=True)
    # midpoint check, expressed as a CDF error
    mids = v[:-1] + 0.5 * h
    half = 0.5 * (0.5 * h) * (g(v[:-1, None] + 0.25 * h * (_GL_X[None, :] + 1.0)) * _GL_W[None, :]).sum(axis=1)
    f_mid = cdf[:-1] + half / total
    v_hat = inv(np.clip(f_mid, 0.0, 1.0))
    err = np.max(np.abs(v_hat - mids) * g(mids) / total)
    if not err < TABLE_TOL:
        raise DomainError(f"jump-size table inaccurate: CDF error {err:.2e} >= {TABLE_TOL:g}")

    def inverse(u):
        return inv(np.clip(u, 0.0, 1.0))

    return _JumpTable(mass, inverse=inverse)


def _table_upper(g, v0, mass):
    """Log-size beyond which the remaining tail mass is below 1e-12 of ``mass``."""
    v, step = v0, 0.25
    while v < 700.0:
        v += step
        # tail beyond v bounded by a few times g(v) for the catalog's exponential tails
        if float(g(np.array(v))) * 10.0 < 1e-12 * mass:
            return v
    raise DomainError("jump-size distribution has no usable upper limit for tabulation")


# -- paths ----------------------------------------------------------------------

@dataclass(frozen=True)
class PathSample:
    """A simulated trajectory.

    Attributes
    ----------
    grid : ndarray
        Event times, increasing, starting at 0 and ending at T.
    values : ndarray
        Path value at each grid time (right-continuous).
    left_values : ndarray
        Left limits at each grid time; differ from ``values`` at jumps.
    jumps : ndarray
        ``(k, 2)`` array of (time, size) for recorded jumps.
    convention : DriftConvention
    T : float
    """

    grid: np.ndarray
    values: np.ndarray
    left_values: np.ndarray
    jumps: np.ndarray
    convention: DriftConvention
    T: float
    scheme: Scheme = field(default_factory=Scheme)

    def sup_abs_at(self, t: float) -> float:
        return path_sup(self, t)


def path_sup(path: PathSample, t: float) -> float:
    """``sup_{s<=t} |X_s|`` from grid values, left limits and the value at t.

    Between grid points the path is taken to be linear, which is exact for
    compound Poisson paths with drift.
    """
    if t < 0 or t > path.T * (1 + 1e-12):
        raise DomainError(f"t must lie in [0, T={path.T}], got {t}")
    grid = path.grid
    k = int(np.searchsorted(grid, t, side="right"))
    m = max(float(np.max(np.abs(path.values[:k]))), float(np.max(np.abs(path.left_values[:k]))))
    if k < grid.size and t > grid[k - 1]:
        w = (t - grid[k - 1]) / (grid[k] - grid[k - 1])
        m = max(m, abs((1.0 - w) * path.values[k - 1] + w * path.left_values[k]))
    return m


def _exact_times(T, scheme, horizons, subordinator_shortcut=False):
    """Evaluation grid (without 0) for ExactIncrement."""
    parts = [np.asarray(horizons, dtype=float), [T]]
    if not subordinator_shortcut:
        if scheme.grid_step is not None or scheme.horizon_steps is None:
            step = scheme.grid_step if scheme.grid_step is not None else T / 1024.0
            n = max(1, int(round(T / step)))
            parts.append(np.linspace(0.0, T, n + 1)[1:])
        if scheme.horizon_steps is not None:
            m = int(scheme.horizon_steps)
            for h in horizons:
                parts.append(h * np.arange(1, m + 1) / m)
    times = np.unique(np.concatenate([np.asarray(p, dtype=float) for p in parts]))
    return times[times > 0]


_setup_cache: dict = {}


def _cp_setup(spec, scheme, convention):
    key = (spec.measure.key, spec.drift, convention, scheme.eps_for(spec.measure), scheme.small_jump_mode)
    if key not in _setup_cache:
        _setup_cache[key] = _cp_setup_uncached(spec, scheme, convention)
    return _setup_cache[key]


def _cp_setup_uncached(spec, scheme, convention):
    m = spec.measure
    eps = scheme.eps_for(m)
    pos = jump_table(m, eps, 1) if m.positive else _JumpTable(0.0)
    neg = jump_table(m, eps, -1) if m.negative else _JumpTable(0.0)
    rate = spec.drift - drift_rate(spec, convention)
    if eps < 1.0:
        rate -= m.truncated_first_moment(eps, 1.0)
    sigma = 0.0
    if scheme.small_jump_mode is SmallJumpMode.GAUSSIAN:
        sigma = math.sqrt(m.small_jump_variance(eps))
    return eps, pos, neg, rate, sigma


def simulate_block(spec: ProcessSpec, T: float, convention, scheme: Scheme, rng, n: int,
                   horizons=(), subordinator_shortcut=False):
    """Simulate ``n`` paths on ``[0, T]`` as padded event arrays.

    Returns
    -------
    dict with
        ``times`` (n, K) event times, ``inf`` for padding;
        ``left``, ``right`` (n, K) values before/after each event (0 on padding);
        ``is_jump`` (n, K) bool and ``jump`` (n, K) jump sizes;
        ``horizon_index`` (n, H) column of each horizon event.
    """
    convention = DriftConvention(convention)
    scheme.validate(spec, T)
    horizons = np.asarray(horizons, dtype=float)
    if np.any(horizons <= 0) or np.any(horizons > T * (1 + 1e-12)):
        raise DomainError("horizons must lie in (0, T]")
    b = drift_rate(spec, convention)

    if scheme.kind is SchemeKind.EXACT:
        times = _exact_times(T, scheme, horizons, subordinator_shortcut)
        dts = np.diff(np.concatenate([[0.0], times]))
        inc = sample_increments(spec, dts[None, :], rng, (n, times.size))
        vals = np.cumsum(inc, axis=1) - b * times[None, :]
        hidx = np.searchsorted(times, horizons)
        return {
            "times": np.broadcast_to(times, (n, times.size)),
            "left": vals,
            "right": vals,
            "is_jump": np.zeros((n, times.size), dtype=bool),
            "jump": np.zeros((n, times.size)),
            "horizon_index": np.broadcast_to(hidx, (n, hidx.size)),
        }

    eps, pos, neg, rate, sigma = _cp_setup(spec, scheme, convention)
    lam = pos.mass + neg.mass
    counts = rng.poisson(lam * T, n)
    kmax = int(counts.max()) if n else 0
    jt = rng.uniform(0.0, T, (n, kmax))
    col = np.arange(kmax)[None, :]
    live = col < counts[:, None]
    jt = np.where(live, jt, np.inf)
    side = rng.uniform(size=(n, kmax)) < (pos.mass / lam if lam > 0 else 1.0)
    u = rng.uniform(size=(n, kmax))
    size = np.zeros((n, kmax))
    if pos.mass > 0:
        size = np.where(side & live, pos(u), size)
    if neg.mass > 0:
        size = np.where(~side & live, -neg(u), size)
    size = np.where(live, np.sign(size) * np.maximum(np.abs(size), np.nextafter(eps, np.inf)), 0.0)

    fixed = [horizons, [T]]
    if sigma > 0:
        step = scheme.grid_step if scheme.grid_step is not None else T / 1024.0
        fixed.append(np.linspace(0.0, T, max(1, int(round(T / step))) + 1)[1:])
    fixed = np.unique(np.concatenate([np.asarray(f, dtype=float) for f in fixed]))
    nf = fixed.size
    all_t = np.concatenate([np.broadcast_to(fixed, (n, nf)), jt], axis=1)
    all_j = np.concatenate([np.zeros((n, nf)), size], axis=1)
    order = np.argsort(all_t, axis=1, kind="stable")
    times = np.take_along_axis(all_t, order, axis=1)
    jumps = np.take_along_axis(all_j, order, axis=1)
    valid = np.isfinite(times)
    tf = np.where(valid, times, T)
    dt = np.diff(tf, axis=1, prepend=0.0)
    step_inc = rate * dt
    if sigma > 0:
        step_inc = step_inc + sigma * np.sqrt(dt) * rng.standard_normal(dt.shape)
    right = np.cumsum(step_inc + jumps, axis=1)
    left = right - jumps
    left = np.where(valid, left, 0.0)
    right = np.where(valid, right, 0.0)
    # column of each fixed time after sorting
    inv = np.argsort(order, axis=1, kind="stable")
    hpos = np.searchsorted(fixed, horizons)
    return {
        "times": times,
        "left": left,
        "right": right,
        "is_jump": np.take_along_axis(np.concatenate([np.zeros((n, nf), bool), live], axis=1), order, axis=1),
        "jump": jumps,
        "horizon_index": inv[:, hpos],
    }


def block_sups(block: dict, horizons_only_values=False):
    """Running ``sup |X|`` and ``|X|`` at each horizon, both shaped (n, H)."""
    cand = np.maximum(np.abs(block["left"]), np.abs(block["right"]))
    runmax = np.maximum.accumulate(cand, axis=1)
    hidx = block["horizon_index"]
    sups = np.take_along_axis(runmax, hidx, axis=1)
    terminal = np.abs(np.take_along_axis(block["right"], hidx, axis=1))
    return sups, terminal


def sample_path(spec: ProcessSpec, T: float, convention=DriftConvention.RAW, scheme: Scheme | None = None,
                rng: np.random.Generator | None = None) -> PathSample:
    """Simulate one path on ``[0, T]``.

    Parameters
    ----------
    rng : numpy.random.Generator
        Random stream; use :func:`path_stream` for reproducible per-path streams.
    """
    scheme = Scheme() if scheme is None else scheme
    rng = path_stream(0, 0) if rng is None else rng
    convention = DriftConvention(convention)
    blk = simulate_block(spec, T, convention, scheme, rng, 1)
    valid = np.isfinite(blk["times"][0])
    times = np.asarray(blk["times"][0][valid])
    left = blk["left"][0][valid]
    right = blk["right"][0][valid]
    isj = blk["is_jump"][0][valid]
    jumps = np.column_stack([times[isj], blk["jump"][0][valid][isj]]) if isj.any() else np.zeros((0, 2))
    return PathSample(
        grid=np.concatenate([[0.0], times]),
        values=np.concatenate([[0.0], right]),
        left_values=np.concatenate([[0.0], left]),
        jumps=jumps,
        convention=convention,
        T=float(T),
        scheme=scheme,
    )
