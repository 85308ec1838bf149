"""Monte Carlo estimation of running-supremum and marginal moments.

For a horizon grid ``t_1 > t_2 > ...`` one set of paths is simulated on
``[0, max t]`` and every horizon is evaluated on the same paths, so the
estimated curve ``t -> E sup_{s<=t} |X_s|**p`` is nondecreasing exactly.

Paths are generated in fixed-size blocks, each with its own counter-based
random stream.  Block size depends only on the problem, never on the number
of workers, and partial sums are merged in block order, so results are
bit-identical for any ``n_jobs``.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError, MomentNotFiniteError
from .levy_core import DriftConvention, Family, ProcessSpec, StableMeasure, drift_rate
from .sampler import Scheme, SchemeKind, _cp_setup, _exact_times, block_stream, block_sups, simulate_block

__all__ = [
    "MomentEstimate",
    "MomentCurve",
    "estimate_sup_moment",
    "estimate_marginal_moment",
    "moment_curve",
    "moment_curves",
    "default_t_grid",
    "Z_SCORE",
    "MOM_GROUPS",
]

Z_SCORE = 3.0
MOM_GROUPS = 16
MIN_PATHS = 100
_BLOCK_BUDGET = 1 << 21


def default_t_grid(k_min=4, k_max=16):
    """Geometric grid ``2**-k`` for k = k_min..k_max, decreasing."""
    return 2.0 ** -np.arange(k_min, k_max + 1, dtype=float)


@dataclass(frozen=True)
class MomentEstimate:
    """Monte Carlo estimate of ``E sup_{s<=t}|X_s|**p`` (or ``E|X_t|**p``).

    ``std_error`` is the sample standard deviation over ``sqrt(n_paths)``.
    ``median_of_means`` uses 16 contiguous groups of paths and is the
    robust companion reported for heavy-tailed cases.
    """

    t: float
    p: float
    estimate: float
    std_error: float
    n_paths: int
    convention: DriftConvention
    scheme: Scheme
    seed: int
    median_of_means: float = math.nan
    warnings: tuple = ()
    kind: str = "sup"

    def ci(self, z: float = Z_SCORE):
        return self.estimate - z * self.std_error, self.estimate + z * self.std_error

    def contains(self, value: float, z: float = Z_SCORE) -> bool:
        lo, hi = self.ci(z)
        return lo <= value <= hi

    def to_row(self) -> dict:
        return {
            "t": repr(self.t),
            "p": repr(self.p),
            "estimate": repr(self.estimate),
            "std_error": repr(self.std_error),
            "n_paths": self.n_paths,
            "convention": self.convention.value,
            "scheme": self.scheme.label,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class MomentCurve:
    """Estimates on a decreasing geometric grid, all from shared paths."""

    t_grid: np.ndarray
    estimates: tuple
    p: float
    kind: str = "sup"
    meta: dict = field(default_factory=dict)

    @property
    def values(self) -> np.ndarray:
        return np.array([e.estimate for e in self.estimates])

    @property
    def std_errors(self) -> np.ndarray:
        return np.array([e.std_error for e in self.estimates])

    def to_rows(self):
        return [e.to_row() for e in self.estimates]


CSV_COLUMNS = ["t", "p", "estimate", "std_error", "n_paths", "convention", "scheme", "seed"]


def write_curves_csv(path, curves):
    """Write curves as RFC-4180 CSV with full float precision."""
    try:
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\r\n")
            w.writeheader()
            for c in curves:
                w.writerows(c.to_rows())
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _moment_boundary(spec: ProcessSpec) -> float:
    if isinstance(spec.measure, StableMeasure):
        return spec.measure.alpha
    return math.inf


def _check_moment(spec, p):
    if not p > 0:
        raise DomainError(f"p must be > 0, got {p}")
    if not spec.measure.moment_exists(p):
        bound = _moment_boundary(spec)
        extra = f" (moments exist only for p < {bound})" if math.isfinite(bound) else ""
        raise MomentNotFiniteError(
            f"E|X_1|^{p} is infinite for {spec.family.value}{extra}; the sup moment is infinite too")


def _heavy_tail_warnings(spec, p):
    bound = _moment_boundary(spec)
    out = []
    if p >= bound - 0.2:
        out.append(f"p={p} is within 0.2 of the moment boundary {bound}; the mean is unstable")
    if 2 * p >= bound:
        out.append(f"E|X|^{2 * p} is infinite: the reported standard error is not reliable")
    return tuple(out)


def _monotone(spec, convention, scheme) -> bool:
    """Paths nondecreasing, so sup |X_s| over [0,t] equals X_t."""
    if scheme.kind is not SchemeKind.EXACT or spec.measure.negative:
        return False
    try:
        slack = drift_rate(spec, DriftConvention.COMPENSATED) - drift_rate(spec, convention)
    except Exception:
        return False
    return slack >= -1e-14


def _block_size(spec, T, convention, scheme, horizons, shortcut) -> int:
    if scheme.kind is SchemeKind.EXACT:
        cost = _exact_times(T, scheme, horizons, shortcut).size
    else:
        _, pos, neg, _, sigma = _cp_setup(spec, scheme, convention)
        cost = (pos.mass + neg.mass) * T + len(horizons) + 4
        if sigma > 0:
            step = scheme.grid_step if scheme.grid_step is not None else T / 1024.0
            cost += T / step
    b = 1 << max(0, int(math.floor(math.log2(max(1.0, _BLOCK_BUDGET / (3.0 * cost))))))
    return int(min(4096, max(16, b)))


def _run_blocks(job, blocks):
    return [_run_block(job, b) for b in blocks]


def _run_block(job, block):
    spec, T, convention, scheme, seed, bsize, n_paths, horizons, p_list, shortcut = job
    start = block * bsize
    n = min(bsize, n_paths - start)
    rng = block_stream(seed, block)
    blk = simulate_block(spec, T, convention, scheme, rng, n, horizons, subordinator_shortcut=shortcut)
    sups, term = block_sups(blk)
    groups = (np.arange(start, start + n) * MOM_GROUPS) // n_paths
    gid = np.unique(groups)
    out = {}
    for kind, base in (("sup", sups), ("marginal", term)):
        for p in p_list:
            vals = base ** p
            stats = []
            for g in gid:
                sel = vals[groups == g]
                s = sel.sum(axis=0)
                mean = s / sel.shape[0]
                m2 = ((sel - mean) ** 2).sum(axis=0)
                stats.append((int(g), sel.shape[0], s, m2))
            out[(kind, p)] = stats
    return out


def _merge(acc, stats):
    # Chan et al. pairwise update of (count, sum, M2)
    for g, n_b, s_b, m2_b in stats:
        if g not in acc:
            acc[g] = [n_b, s_b.copy(), m2_b.copy()]
            continue
        n_a, s_a, m2_a = acc[g]
        delta = s_b / n_b - s_a / n_a
        acc[g] = [n_a + n_b, s_a + s_b, m2_a + m2_b + delta * delta * (n_a * n_b / (n_a + n_b))]


def moment_curves(spec: ProcessSpec, p_list, t_grid=None, convention=DriftConvention.RAW, scheme=None,
                  n_paths=10_000, seed=0, n_jobs=1):
    """Sup and marginal moment curves for several ``p`` from one path set.

    Returns
    -------
    dict
        ``{("sup", p): MomentCurve, ("marginal", p): MomentCurve}``.
    """
    convention = DriftConvention(convention)
    scheme = Scheme() if scheme is None else scheme
    p_list = [float(p) for p in np.atleast_1d(p_list)]
    n_paths = int(n_paths)
    if n_paths < MIN_PATHS:
        raise DomainError(f"n_paths must be >= {MIN_PATHS}, got {n_paths}")
    for p in p_list:
        _check_moment(spec, p)
    t_grid = default_t_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size == 0 or np.any(t_grid < 0):
        raise DomainError("t_grid must be a nonempty sequence of nonnegative times")
    order = np.argsort(-t_grid, kind="stable")
    t_sorted = t_grid[order]
    pos_t = t_sorted[t_sorted > 0]
    results = {}
    if pos_t.size == 0:
        sums = {}
    else:
        T = float(pos_t[0])
        horizons = np.unique(pos_t)
        scheme.validate(spec, T)
        shortcut = _monotone(spec, convention, scheme)
        bsize = _block_size(spec, T, convention, scheme, horizons, shortcut)
        n_blocks = -(-n_paths // bsize)
        job = (spec, T, convention, scheme, int(seed), bsize, n_paths, horizons, p_list, shortcut)
        chunks = _chunk(n_blocks, n_jobs)
        if n_jobs == 1 or len(chunks) == 1:
            parts = [_run_blocks(job, c) for c in chunks]
        else:
            from joblib import Parallel, delayed

            parts = Parallel(n_jobs=n_jobs)(delayed(_run_blocks)(job, c) for c in chunks)
        sums = {}
        for part in parts:
            for res in part:
                for key, stats in res.items():
                    _merge(sums.setdefault(key, {}), stats)
    for kind in ("sup", "marginal"):
        for p in p_list:
            warns = _heavy_tail_warnings(spec, p)
            for w in warns:
                warnings.warn(w, RuntimeWarning, stacklevel=2)
            ests = []
            acc = sums.get((kind, p))
            if acc is not None:
                total = _combine(acc)
            for t in t_grid:
                if t == 0:
                    ests.append(MomentEstimate(0.0, p, 0.0, 0.0, n_paths, convention, scheme, int(seed),
                                               0.0, warns, kind))
                    continue
                h = int(np.searchsorted(horizons, t))
                est, se, mom = total[0][h], total[1][h], total[2][h]
                ests.append(MomentEstimate(float(t), p, float(est), float(se), n_paths, convention, scheme,
                                           int(seed), float(mom), warns, kind))
            results[(kind, p)] = MomentCurve(
                t_grid=t_grid.copy(), estimates=tuple(ests), p=p, kind=kind,
                meta={"family": spec.family.value, "params": dict(spec.params),
                      "scheme": scheme.to_dict(), "n_paths": n_paths, "seed": int(seed)})
    return results


def _combine(acc):
    """Overall mean, SE and median-of-means from per-group accumulators."""
    gs = sorted(acc)
    n = sum(acc[g][0] for g in gs)
    s = np.sum([acc[g][1] for g in gs], axis=0)
    merged = {}
    _merge(merged, [(0, acc[g][0], acc[g][1], acc[g][2]) for g in gs])
    m2 = merged[0][2]
    mean = s / n
    se = np.sqrt(np.maximum(m2, 0.0) / (n - 1) / n)
    mom = np.median([acc[g][1] / acc[g][0] for g in gs], axis=0)
    return mean, se, mom


def _chunk(n_blocks, n_jobs):
    n_jobs = max(1, int(n_jobs))
    per = max(1, -(-n_blocks // (4 * n_jobs))) if n_jobs > 1 else n_blocks
    return [list(range(i, min(n_blocks, i + per))) for i in range(0, n_blocks, per)]


def moment_curve(spec: ProcessSpec, p: float, t_grid=None, convention=DriftConvention.RAW, scheme=None,
                 n_paths=10_000, seed=0, n_jobs=1, kind="sup") -> MomentCurve:
    """Curve of ``E sup_{s<=t}|X_s|**p`` over ``t_grid`` from shared paths.

    Parameters
    ----------
    t_grid : array_like, optional
        Horizons; the largest is the simulation horizon.  Defaults to
        ``2**-k``, k = 4..16.
    kind : {"sup", "marginal"}
        ``"marginal"`` estimates ``E|X_t|**p`` instead.
    """
    if kind not in ("sup", "marginal"):
        raise DomainError(f"kind must be 'sup' or 'marginal', got {kind!r}")
    res = moment_curves(spec, [p], t_grid, convention, scheme, n_paths, seed, n_jobs)
    return res[(kind, float(p))]


def estimate_sup_moment(spec: ProcessSpec, p: float, t: float, convention=DriftConvention.RAW, scheme=None,
                        n_paths=10_000, seed=0, n_jobs=1) -> MomentEstimate:
    """Monte Carlo estimate of ``E sup_{s<=t} |X_s|**p``.

    Raises
    ------
    MomentNotFiniteError
        If ``E|X_1|**p`` is infinite (e.g. stable with ``p >= alpha``).
    """
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    return moment_curve(spec, p, [t], convention, scheme, n_paths, seed, n_jobs).estimates[0]


def estimate_marginal_moment(spec: ProcessSpec, p: float, t: float, convention=DriftConvention.RAW, scheme=None,
                             n_paths=10_000, seed=0, n_jobs=1) -> MomentEstimate:
    """Monte Carlo estimate of ``E|X_t|**p``."""
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    return moment_curve(spec, p, [t], convention, scheme, n_paths, seed, n_jobs, kind="marginal").estimates[0]
