"""Lévy measures, the process catalog, drift conventions and Ψ(u).

Processes have characteristics ``(a, 0, nu)``: drift ``a`` under truncation
at size 1, no Gaussian part, and a Lévy measure ``nu`` given by a density.
Measures are described through ``x2_density(x) = x**2 * density(x)``, which
stays bounded near the origin for every measure with index below 2 and is
what all near-zero quadratures integrate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._integrate import quad
from .exceptions import (
    DivergentIntegralError,
    DomainError,
    MomentNotFiniteError,
    QuadratureError,
    UnsupportedOperationError,
)
from .specfun import bessel_k_values, gamma_fn

__all__ = [
    "Family",
    "DriftConvention",
    "LevyMeasure",
    "GammaMeasure",
    "StableMeasure",
    "TemperedStableMeasure",
    "NIGMeasure",
    "MeixnerMeasure",
    "PowerLawMeasure",
    "HyperbolicMeasure",
    "ProcessSpec",
    "gamma_process",
    "stable",
    "tempered_stable",
    "inverse_gaussian",
    "nig",
    "meixner",
    "hyperbolic",
    "make_process",
    "bg_index",
    "moment_exists",
    "drift_for",
    "char_exponent",
    "CATALOG_BG_INDEX",
]

_V_FLOOR = -700.0
_LOG10 = math.log(10.0)


class Family(str, Enum):
    GAMMA = "Gamma"
    STABLE = "Stable"
    TEMPERED_STABLE = "TemperedStable"
    INVERSE_GAUSSIAN = "InverseGaussian"
    NIG = "NIG"
    MEIXNER = "Meixner"
    HYPERBOLIC = "Hyperbolic"


class DriftConvention(str, Enum):
    """Which time-linear shift is removed from X.

    RAW            X itself
    CENTERED       X_t - t E X_1
    COMPENSATED    Y_t = X_t - t (a - int_{|x|<=1} x dnu)
    TRUNC_ADJUSTED Z_t = X_t - t (a - int_{c<|x|<=1} x dnu)
    """

    RAW = "raw"
    CENTERED = "centered"
    COMPENSATED = "compensated"
    TRUNC_ADJUSTED = "trunc_adjusted"


# catalog family -> Blumenthal-Getoor index (None: depends on alpha)
CATALOG_BG_INDEX = {
    Family.GAMMA: 0.0,
    Family.STABLE: None,
    Family.TEMPERED_STABLE: None,
    Family.INVERSE_GAUSSIAN: 0.5,
    Family.NIG: 1.0,
    Family.MEIXNER: 1.0,
    Family.HYPERBOLIC: 1.0,
}


def _decay_limit(g, v_hi, what, rel=1e-14):
    """Lower limit in v below which ``g`` is negligible for ``int_-inf^v_hi g dv``.

    Walks down in steps of 5 and declares divergence when ``g`` stops
    decaying geometrically.
    """
    scale = abs(g(v_hi - 1e-9))
    v, prev, stalls = v_hi, None, 0
    while v > _V_FLOOR:
        v = max(_V_FLOOR, v - 5.0)
        cur = abs(g(v))
        scale = max(scale, cur)
        if cur <= rel * scale:
            return v
        if prev is not None and cur >= 0.9 * prev:
            stalls += 1
            if stalls >= 4:
                raise DivergentIntegralError(f"{what} diverges (integrand not integrable at 0)")
        else:
            stalls = 0
        prev = cur
    if abs(g(_V_FLOOR)) > 1e-10 * scale:
        raise DivergentIntegralError(f"{what} diverges (integrand not integrable at 0)")
    return _V_FLOOR


def _upper_limit(g, v_lo, what, rel=1e-15):
    """Upper limit in v beyond which a decaying ``g`` is negligible."""
    v, scale = v_lo, abs(g(v_lo))
    while v < 700.0:
        v += 0.5
        cur = abs(g(v))
        scale = max(scale, cur)
        if cur <= rel * scale and v > v_lo + 2.0:
            return v
    raise DivergentIntegralError(f"{what} diverges at infinity")


class LevyMeasure:
    """Lévy measure on R \\ {0} with a Lebesgue density.

    Parameters
    ----------
    x2_density : callable, optional
        ``x -> x**2 * density(x)``; vectorised over numpy arrays.  Subclasses
        override :meth:`x2_density` instead.
    beta : float or None
        Declared Blumenthal-Getoor index.  ``None`` means the near-zero
        structure is unknown and :func:`bg_index` refuses the measure.
    cutoff : float
        The constant ``c`` in (0, 1] below which the density is dominated by
        ``l(|x|) |x|**-(beta+1)``.
    symmetric : bool
        Whether ``density(x) == density(-x)``.
    log_power : float
        Exponent ``b`` of the slowly varying part ``l(x) ~ (-log x)**b`` at
        zero; 0 for a bounded part with a positive limit.
    positive, negative : bool
        Which half-lines carry mass.
    support_radius : float
        Density vanishes for ``|x| > support_radius``.
    """

    def __init__(
        self,
        x2_density=None,
        *,
        beta=None,
        cutoff=1.0,
        symmetric=False,
        log_power=0.0,
        positive=True,
        negative=True,
        support_radius=math.inf,
        name="custom",
    ):
        if not 0.0 < cutoff <= 1.0:
            raise DomainError(f"cutoff must lie in (0, 1], got {cutoff}")
        if beta is not None and not 0.0 <= beta <= 2.0:
            raise DomainError(f"beta must lie in [0, 2], got {beta}")
        self._x2 = x2_density
        self.beta = None if beta is None else float(beta)
        self.cutoff = float(cutoff)
        self.symmetric = bool(symmetric)
        self.log_power = float(log_power)
        self.positive = bool(positive)
        self.negative = bool(negative)
        self.support_radius = float(support_radius)
        self.name = name

    # -- densities -----------------------------------------------------
    def x2_density(self, x):
        if self._x2 is None:
            raise UnsupportedOperationError(f"{self.name} measure exposes no density")
        return self._x2(x)

    def density(self, x):
        """Jump intensity per unit length at ``x != 0``."""
        x = np.asarray(x, dtype=float)
        return self.x2_density(x) / (x * x)

    def slowly_varying(self, x):
        """``l(x) = x**(beta+1) * max(density(x), density(-x))`` for x in (0, c]."""
        x = np.asarray(x, dtype=float)
        side = np.maximum(self._side(x, 1), self._side(x, -1))
        return side * x ** (self.beta - 1.0)

    def _side(self, x, sign):
        if (sign > 0 and not self.positive) or (sign < 0 and not self.negative):
            return np.zeros_like(np.asarray(x, dtype=float))
        return self.x2_density(sign * np.asarray(x, dtype=float))

    def _signs(self):
        return [s for s, on in ((1, self.positive), (-1, self.negative)) if on]

    @property
    def key(self):
        """Hashable identity used for caching sampler tables."""
        return (self.name, id(self) if self._x2 is not None else None)

    # -- numeric integrals (log-coordinates, v = log|x|) ------------------
    def _v_low(self, v_hi):
        rate = 2.0 - (self.beta if self.beta is not None else 1.9)
        return max(_V_FLOOR, v_hi - 45.0 / max(rate, 0.05))

    def _v_top(self):
        return math.log(self.support_radius) if math.isfinite(self.support_radius) else math.inf

    def small_jump_variance(self, eps):
        """``int_{|x|<=eps} x**2 dnu``."""
        v_hi = min(math.log(eps), self._v_top())
        total = 0.0
        for s in self._signs():
            val, _ = quad(lambda v: float(self.x2_density(s * math.exp(v))) * math.exp(v),
                          self._v_low(v_hi), v_hi, what="small-jump variance", epsrel=1e-10)
            total += val
        return total

    def tail_mass(self, eps):
        """``(nu((eps, inf)), nu((-inf, -eps)))``."""
        out = []
        for s in (1, -1):
            if s not in self._signs() or eps >= self.support_radius:
                out.append(0.0)
                continue
            val = self._pieces(lambda v, s=s: float(self.x2_density(s * math.exp(v))) * math.exp(-v),
                               math.log(eps), self._v_top(), "tail mass")
            out.append(val)
        return tuple(out)

    def _pieces(self, g, v_lo, v_hi, what):
        # split long/infinite ranges so QUADPACK sees the peak
        if math.isinf(v_hi):
            v_hi = _upper_limit(g, v_lo, what)
        edges = np.linspace(v_lo, v_hi, max(2, int(math.ceil((v_hi - v_lo) / 4.0)) + 1))
        return sum(quad(g, lo, hi, what=what, epsrel=1e-10)[0] for lo, hi in zip(edges[:-1], edges[1:]))

    def truncated_first_moment(self, lo, hi):
        """``int_{lo < |x| <= hi} x dnu`` for ``0 < lo < hi``."""
        if not 0 < lo < hi:
            raise DomainError("need 0 < lo < hi")
        hi = min(hi, self.support_radius)
        if lo >= hi:
            return 0.0
        total = 0.0
        for s in self._signs():
            total += s * self._pieces(lambda v, s=s: float(self.x2_density(s * math.exp(v))),
                                      math.log(lo), math.log(hi), "first moment")
        return total

    def small_jump_mean(self):
        """Principal value ``int_{|x|<=1} x dnu``.

        Raises :class:`DivergentIntegralError` when the odd part of the
        measure is not integrable against ``x`` near zero.
        """
        if self.symmetric:
            return 0.0
        signs = self._signs()

        def odd(v):
            x = math.exp(v)
            pos = float(self.x2_density(x)) if 1 in signs else 0.0
            neg = float(self.x2_density(-x)) if -1 in signs else 0.0
            return pos - neg

        v_hi = min(0.0, self._v_top())
        v_lo = _decay_limit(odd, v_hi, "int_{|x|<=1} x dnu")
        return self._pieces(odd, v_lo, v_hi, "small-jump mean")

    def big_jump_mean(self):
        """``int_{|x|>1} x dnu``; requires a finite first moment."""
        if not self.moment_exists(1.0):
            raise MomentNotFiniteError("int_{|x|>1} |x| dnu = inf, E|X_1| is infinite")
        if self.support_radius <= 1.0:
            return 0.0
        total = 0.0
        for s in self._signs():
            total += s * self._pieces(lambda v, s=s: float(self.x2_density(s * math.exp(v))),
                                      0.0, self._v_top(), "big-jump mean")
        return total

    def _tail_decades(self, p, n=30):
        """Increments of ``int_{|x|>1} |x|**p dnu`` over successive decades."""
        incs = []
        for k in range(n):
            lo, hi = k * _LOG10, (k + 1) * _LOG10
            if lo >= self._v_top():
                incs.append(0.0)
                continue
            hi = min(hi, self._v_top())
            val = 0.0
            for s in self._signs():
                val += quad(lambda v, s=s: float(self.x2_density(s * math.exp(v))) * math.exp((p - 1.0) * v),
                            lo, hi, what="tail moment", epsrel=1e-10)[0]
            incs.append(val)
        return np.array(incs)

    def moment_exists(self, p):
        """Whether ``int_{|x|>1} |x|**p dnu < inf`` (numeric divergence test)."""
        if not p > 0:
            raise DomainError(f"p must be > 0, got {p}")
        incs = self._tail_decades(p)
        tail = incs[-6:]
        if np.all(tail <= 1e-300 + 1e-16 * incs.sum()):
            return True
        ratios = tail[1:] / np.maximum(tail[:-1], 1e-300)
        if np.all(ratios >= 0.99):
            return False
        if np.all(ratios <= 0.9):
            return True
        raise QuadratureError(f"cannot decide convergence of the order-{p} tail moment",
                              float(tail[-1]))

    def tail_moment(self, p):
        """``int_{|x|>1} |x|**p dnu`` (``inf`` when divergent)."""
        if not self.moment_exists(p):
            return math.inf
        if self.support_radius <= 1.0:
            return 0.0
        total = 0.0
        for s in self._signs():
            total += self._pieces(lambda v, s=s: float(self.x2_density(s * math.exp(v))) * math.exp((p - 1.0) * v),
                                  0.0, self._v_top(), "tail moment")
        return total

    def __repr__(self):
        return f"{type(self).__name__}(beta={self.beta}, symmetric={self.symmetric})"


class GammaMeasure(LevyMeasure):
    """``nu(dx) = exp(-x) / x dx`` on (0, inf)."""

    def __init__(self):
        super().__init__(beta=0.0, symmetric=False, positive=True, negative=False, name="Gamma")

    def x2_density(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x > 0, x * np.exp(-np.abs(x)), 0.0)

    @property
    def key(self):
        return ("Gamma",)

    def moment_exists(self, p):
        if not p > 0:
            raise DomainError(f"p must be > 0, got {p}")
        return True

    def small_jump_mean(self):
        return 1.0 - math.exp(-1.0)

    def big_jump_mean(self):
        return math.exp(-1.0)


class StableMeasure(LevyMeasure):
    """``C1 x**-(alpha+1)`` on x > 0 and ``C2 |x|**-(alpha+1)`` on x < 0."""

    def __init__(self, alpha, C1, C2):
        if not 0.0 < alpha < 2.0:
            raise DomainError(f"Stable alpha must lie in (0, 2), got {alpha}")
        if C1 < 0 or C2 < 0 or C1 + C2 <= 0:
            raise DomainError("Stable requires C1, C2 >= 0 and C1 + C2 > 0")
        super().__init__(beta=alpha, symmetric=(C1 == C2), positive=C1 > 0, negative=C2 > 0, name="Stable")
        self.alpha, self.C1, self.C2 = float(alpha), float(C1), float(C2)

    def x2_density(self, x):
        x = np.asarray(x, dtype=float)
        c = np.where(x > 0, self.C1, self.C2)
        return c * np.abs(x) ** (1.0 - self.alpha)

    @property
    def key(self):
        return ("Stable", self.alpha, self.C1, self.C2)

    def tail_mass(self, eps):
        return (self.C1 * eps ** -self.alpha / self.alpha, self.C2 * eps ** -self.alpha / self.alpha)

    def small_jump_variance(self, eps):
        return (self.C1 + self.C2) * eps ** (2.0 - self.alpha) / (2.0 - self.alpha)

    def truncated_first_moment(self, lo, hi):
        if not 0 < lo < hi:
            raise DomainError("need 0 < lo < hi")
        a = self.alpha
        base = math.log(hi / lo) if a == 1.0 else (hi ** (1 - a) - lo ** (1 - a)) / (1 - a)
        return (self.C1 - self.C2) * base

    def small_jump_mean(self):
        if self.symmetric:
            return 0.0
        if self.alpha < 1.0:
            return (self.C1 - self.C2) / (1.0 - self.alpha)
        raise DivergentIntegralError(
            f"int_{{|x|<=1}} x dnu diverges for asymmetric stable with alpha={self.alpha} >= 1")

    def big_jump_mean(self):
        if self.alpha <= 1.0:
            raise MomentNotFiniteError(f"E|X_1| = inf for stable alpha={self.alpha} <= 1")
        return (self.C1 - self.C2) / (self.alpha - 1.0)

    def moment_exists(self, p):
        if not p > 0:
            raise DomainError(f"p must be > 0, got {p}")
        return p < self.alpha

    def tail_moment(self, p):
        return (self.C1 + self.C2) / (self.alpha - p) if p < self.alpha else math.inf


class TemperedStableMeasure(LevyMeasure):
    """Tempered stable subordinator.

    ``nu(dx) = 2**alpha alpha / Gamma(1-alpha) x**-(alpha+1) exp(-gamma**(1/alpha) x / 2)``
    on (0, inf); ``alpha = 1/2`` is the inverse Gaussian process.
    """

    def __init__(self, alpha, gamma):
        if not 0.0 < alpha < 1.0:
            raise DomainError(f"TemperedStable alpha must lie in (0, 1), got {alpha}")
        if not gamma > 0:
            raise DomainError(f"TemperedStable gamma must be > 0, got {gamma}")
        super().__init__(beta=alpha, symmetric=False, positive=True, negative=False, name="TemperedStable")
        self.alpha, self.gamma = float(alpha), float(gamma)
        self.scale = 2.0 ** alpha * alpha / gamma_fn(1.0 - alpha)
        self.tilt = 0.5 * gamma ** (1.0 / alpha)

    def x2_density(self, x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        return np.where(x > 0, self.scale * ax ** (1.0 - self.alpha) * np.exp(-self.tilt * ax), 0.0)

    @property
    def key(self):
        return ("TemperedStable", self.alpha, self.gamma)

    def moment_exists(self, p):
        if not p > 0:
            raise DomainError(f"p must be > 0, got {p}")
        return True


class NIGMeasure(LevyMeasure):
    """``nu(dx) = (delta alpha / pi) exp(gamma x) K_1(alpha |x|) / |x| dx``."""

    def __init__(self, alpha, gamma, delta):
        if not alpha > 0:
            raise DomainError(f"NIG alpha must be > 0, got {alpha}")
        if not -alpha < gamma < alpha:
            raise DomainError(f"NIG gamma must lie in (-alpha, alpha), got {gamma}")
        if not delta > 0:
            raise DomainError(f"NIG delta must be > 0, got {delta}")
        super().__init__(beta=1.0, symmetric=(gamma == 0), name="NIG")
        self.alpha, self.gamma, self.delta = float(alpha), float(gamma), float(delta)

    def x2_density(self, x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        z = self.alpha * ax
        live = (z > 0) & (z < 740.0)
        k1 = np.zeros_like(z)
        if np.any(live):
            k1[live] = bessel_k_values(1.0, z[live])
        return self.delta * self.alpha / math.pi * ax * k1 * np.exp(self.gamma * x)

    @property
    def key(self):
        return ("NIG", self.alpha, self.gamma, self.delta)

    def moment_exists(self, p):
        if not p > 0:
            raise DomainError(f"p must be > 0, got {p}")
        return True


class MeixnerMeasure(LevyMeasure):
    """``nu(dx) = delta exp(gamma x) / (x sinh(pi x)) dx``."""

    def __init__(self, gamma, delta):
        if not -math.pi < gamma < math.pi:
            raise DomainError(f"Meixner gamma must lie in (-pi, pi), got {gamma}")
        if not delta > 0:
            raise DomainError(f"Meixner delta must be > 0, got {delta}")
        super().__init__(beta=1.0, symmetric=(gamma == 0), name="Meixner")
        self.gamma, self.delta = float(gamma), float(delta)

    def x2_density(self, x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        # x / sinh(pi x) written without overflow
        ratio = 2.0 * ax * np.exp(-math.pi * ax) / -np.expm1(-2.0 * math.pi * np.maximum(ax, 1e-300))
        return self.delta * np.exp(self.gamma * x) * ratio

    @property
    def key(self):
        return ("Meixner", self.gamma, self.delta)

    def moment_exists(self, p):
        if not p > 0:
            raise DomainError(f"p must be > 0, got {p}")
        return True


class PowerLawMeasure(LevyMeasure):
    """Synthetic measure ``C_i |x|**-(beta+1) l(|x|)`` on ``0 < |x| <= c``.

    Used to exercise the compensator integrals and the rate predictor on
    measures whose slowly varying part is not constant.  With
    ``slowly_varying=None`` the part is identically 1 and closed forms exist.
    """

    def __init__(self, beta, C1=1.0, C2=None, cutoff=1.0, slowly_varying=None, log_power=0.0):
        if not 0.0 < beta < 2.0:
            raise DomainError(f"beta must lie in (0, 2), got {beta}")
        C2 = C1 if C2 is None else C2
        if C1 < 0 or C2 < 0 or C1 + C2 <= 0:
            raise DomainError("need C1, C2 >= 0 and C1 + C2 > 0")
        super().__init__(beta=beta, cutoff=cutoff, symmetric=(C1 == C2), log_power=log_power,
                         positive=C1 > 0, negative=C2 > 0, support_radius=cutoff, name="PowerLaw")
        self.C1, self.C2 = float(C1), float(C2)
        self.l = slowly_varying

    @property
    def pure(self):
        return self.l is None

    def x2_density(self, x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        c = np.where(x > 0, self.C1, self.C2)
        lv = 1.0 if self.l is None else self.l(np.minimum(ax, self.cutoff))
        return np.where(ax <= self.cutoff, c * lv * ax ** (1.0 - self.beta), 0.0)

    @property
    def key(self):
        return ("PowerLaw", self.beta, self.C1, self.C2, self.cutoff, id(self.l) if self.l else None)

    def moment_exists(self, p):
        if not p > 0:
            raise DomainError(f"p must be > 0, got {p}")
        return True

    def tail_moment(self, p):
        return 0.0

    def big_jump_mean(self):
        return 0.0

    def tail_mass(self, eps):
        if not self.pure:
            return super().tail_mass(eps)
        if eps >= self.cutoff:
            return (0.0, 0.0)
        b = self.beta
        base = (eps ** -b - self.cutoff ** -b) / b
        return (self.C1 * base, self.C2 * base)


class HyperbolicMeasure(LevyMeasure):
    """Metadata-only entry: symmetric, index 1, all moments finite."""

    def __init__(self):
        super().__init__(beta=1.0, symmetric=True, name="Hyperbolic")

    def x2_density(self, x):
        raise UnsupportedOperationError("the hyperbolic Lévy density is not available in closed form")

    @property
    def key(self):
        return ("Hyperbolic",)

    def moment_exists(self, p):
        if not p > 0:
            raise DomainError(f"p must be > 0, got {p}")
        return True

    def small_jump_mean(self):
        return 0.0

    def big_jump_mean(self):
        return 0.0


@dataclass(frozen=True)
class ProcessSpec:
    """A catalog process: family, parameters and characteristics (a, 0, nu).

    There is deliberately no Gaussian coefficient.
    """

    family: Family
    params: dict
    drift: float
    measure: LevyMeasure = field(repr=False, compare=False)
    bg_index: float
    strictly_stable: bool = False

    @property
    def symmetric(self) -> bool:
        return self.measure.symmetric

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "params": dict(self.params),
            "beta": self.bg_index,
            "symmetric": self.symmetric,
            "drift_a": self.drift,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ProcessSpec":
        spec = make_process(data["family"], drift=data.get("drift_a"), **data.get("params", {}))
        if "beta" in data and data["beta"] is not None and not math.isclose(data["beta"], spec.bg_index):
            raise DomainError(f"beta {data['beta']} inconsistent with {spec.family.value} ({spec.bg_index})")
        if "symmetric" in data and data["symmetric"] is not None and bool(data["symmetric"]) != spec.symmetric:
            raise DomainError(f"symmetric flag inconsistent with {spec.family.value} parameters")
        return spec


def gamma_process(drift=None) -> ProcessSpec:
    """Gamma process with Gamma(t, 1) marginals; ``a = 1 - e**-1``."""
    a = 1.0 - math.exp(-1.0) if drift is None else float(drift)
    return ProcessSpec(Family.GAMMA, {}, a, GammaMeasure(), 0.0)


def stable(alpha, C1=1.0, C2=None, drift=None) -> ProcessSpec:
    """Alpha-stable process.

    The default drift makes the process strictly stable when alpha != 1
    (``a = (C1 - C2) / (1 - alpha)``) and is 0 when alpha == 1.
    """
    C2 = C1 if C2 is None else C2
    m = StableMeasure(alpha, C1, C2)
    strict_a = 0.0 if alpha == 1.0 else (C1 - C2) / (1.0 - alpha)
    a = strict_a if drift is None else float(drift)
    strictly = (C1 == C2) if alpha == 1.0 else math.isclose(a, strict_a, rel_tol=1e-12, abs_tol=1e-12)
    return ProcessSpec(Family.STABLE, {"alpha": float(alpha), "C1": float(C1), "C2": float(C2)},
                       a, m, float(alpha), strictly)


def tempered_stable(alpha, gamma, drift=None) -> ProcessSpec:
    """Tempered stable subordinator; default ``a = int_0^1 x dnu`` (no linear drift)."""
    m = TemperedStableMeasure(alpha, gamma)
    a = m.small_jump_mean() if drift is None else float(drift)
    return ProcessSpec(Family.TEMPERED_STABLE, {"alpha": float(alpha), "gamma": float(gamma)},
                       a, m, float(alpha))


def inverse_gaussian(gamma, drift=None) -> ProcessSpec:
    """Inverse Gaussian process: the tempered stable subordinator with alpha = 1/2."""
    m = TemperedStableMeasure(0.5, gamma)
    a = m.small_jump_mean() if drift is None else float(drift)
    return ProcessSpec(Family.INVERSE_GAUSSIAN, {"gamma": float(gamma)}, a, m, 0.5)


def nig(alpha, gamma, delta, drift=None) -> ProcessSpec:
    """Normal inverse Gaussian process.

    The default ``a = (2 delta alpha / pi) int_0^1 sinh(gamma x) K_1(alpha x) dx``
    is the principal value of ``int_{|x|<=1} x dnu``; with it X_t has the
    NIG(alpha, gamma, delta t, 0) marginal.
    """
    m = NIGMeasure(alpha, gamma, delta)
    a = m.small_jump_mean() if drift is None else float(drift)
    return ProcessSpec(Family.NIG, {"alpha": float(alpha), "gamma": float(gamma), "delta": float(delta)},
                       a, m, 1.0)


def meixner(gamma, delta, drift=None) -> ProcessSpec:
    """Meixner process; the default drift is the principal value of
    ``int_{|x|<=1} x dnu`` (zero when gamma = 0)."""
    m = MeixnerMeasure(gamma, delta)
    a = m.small_jump_mean() if drift is None else float(drift)
    return ProcessSpec(Family.MEIXNER, {"gamma": float(gamma), "delta": float(delta)}, a, m, 1.0)


def hyperbolic(gamma, delta) -> ProcessSpec:
    """Symmetric hyperbolic Lévy motion (metadata only, no density or sampler)."""
    if not (gamma > 0 and delta > 0):
        raise DomainError("Hyperbolic requires gamma > 0 and delta > 0")
    return ProcessSpec(Family.HYPERBOLIC, {"gamma": float(gamma), "delta": float(delta)},
                       0.0, HyperbolicMeasure(), 1.0)


_FACTORIES = {
    Family.GAMMA: gamma_process,
    Family.STABLE: stable,
    Family.TEMPERED_STABLE: tempered_stable,
    Family.INVERSE_GAUSSIAN: inverse_gaussian,
    Family.NIG: nig,
    Family.MEIXNER: meixner,
    Family.HYPERBOLIC: hyperbolic,
}


def make_process(family, drift=None, **params) -> ProcessSpec:
    """Build a catalog entry from its family name and parameters."""
    try:
        fam = Family(family)
    except ValueError:
        raise DomainError(f"unknown family {family!r}; choose from {[f.value for f in Family]}") from None
    factory = _FACTORIES[fam]
    try:
        if fam is Family.HYPERBOLIC:
            if drift not in (None, 0, 0.0):
                raise DomainError("Hyperbolic motion has drift 0")
            return factory(**params)
        return factory(drift=drift, **params)
    except TypeError as exc:
        raise DomainError(f"bad parameters for {fam.value}: {exc}") from None


def bg_index(measure: LevyMeasure) -> float:
    """Blumenthal-Getoor index of a measure with declared near-zero structure."""
    if measure.beta is None:
        raise DomainError("measure has no declared near-zero power-law structure; "
                          "numeric index estimation is not supported")
    return measure.beta


def moment_exists(measure: LevyMeasure, p: float) -> bool:
    """True iff ``int_{|x|>1} |x|**p dnu < inf``, i.e. ``E|X_1|**p < inf``."""
    return measure.moment_exists(p)


def drift_for(spec: ProcessSpec, convention: DriftConvention, t: float = 1.0) -> float:
    """Deterministic shift ``b t`` with ``U_t = X_t - b t`` for the convention.

    At ``t = 1`` this is the drift rate ``b`` itself.

    Raises
    ------
    MomentNotFiniteError
        CENTERED requested while ``E|X_1| = inf``.
    DivergentIntegralError
        COMPENSATED requested while ``int_{|x|<=1} x dnu`` is undefined.
    """
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    return drift_rate(spec, convention) * t


def drift_rate(spec: ProcessSpec, convention: DriftConvention) -> float:
    convention = DriftConvention(convention)
    m = spec.measure
    if convention is DriftConvention.RAW:
        return 0.0
    if convention is DriftConvention.CENTERED:
        if not m.moment_exists(1.0):
            raise MomentNotFiniteError(f"{spec.family.value}: E|X_1| = inf, no centered version")
        return spec.drift + m.big_jump_mean()
    if convention is DriftConvention.COMPENSATED:
        return spec.drift - m.small_jump_mean()
    c = m.cutoff
    if c >= 1.0 or m.symmetric:
        return spec.drift
    return spec.drift - m.truncated_first_moment(c, 1.0)


def _cosm1_sq(y):
    """(cos y - 1) / y**2 with a series below |y| < 1e-4."""
    y = np.asarray(y, dtype=float)
    small = np.abs(y) < 1e-4
    ys = np.where(small, 1.0, y)
    return np.where(small, -0.5 + y * y / 24.0, (np.cos(ys) - 1.0) / (ys * ys))


def _sinm_cube(y):
    """(sin y - y) / y**3 with a series below |y| < 1e-4."""
    y = np.asarray(y, dtype=float)
    small = np.abs(y) < 1e-4
    ys = np.where(small, 1.0, y)
    return np.where(small, -1.0 / 6.0 + y * y / 120.0, (np.sin(ys) - ys) / (ys ** 3))


def _levy_integral(measure: LevyMeasure, w: float) -> complex:
    """``int (e^{iwx} - 1 - iwx 1{|x|<=1}) dnu(x)`` for w > 0."""
    re = im = 0.0
    v_hi = min(0.0, measure._v_top())
    v_lo = measure._v_low(v_hi)
    for s in measure._signs():
        def g_re(v, s=s):
            x = math.exp(v)
            return w * w * float(measure.x2_density(s * x)) * x * float(_cosm1_sq(w * x))

        def g_im(v, s=s):
            x = math.exp(v)
            return s * w ** 3 * float(measure.x2_density(s * x)) * x * x * float(_sinm_cube(w * x))

        # break where oscillation starts
        brk = min(max(-math.log(w), v_lo + 1.0), v_hi - 1e-9)
        for lo, hi in ((v_lo, brk), (brk, v_hi)):
            re += quad(g_re, lo, hi, what="Psi small jumps (real)")[0]
            im += quad(g_im, lo, hi, what="Psi small jumps (imag)")[0]
        if measure.support_radius > 1.0:
            if math.isfinite(measure.support_radius):
                raise UnsupportedOperationError("bounded support beyond 1 is not handled")
            big_re, big_im = _big_jump_part(measure, s, w)
            re += big_re
            im += s * big_im
    return complex(re, im)


def _big_jump_part(measure, s, w):
    """``int_1^inf (cos(wx) - 1, sin(wx)) nu(s dx)``.

    Up to ``A = 100 / w`` (or the point where the density is negligible)
    the integral is done directly in log coordinates; QAWF only sees the
    strongly oscillating remainder beyond ``A``.
    """
    dens = lambda x: float(measure.density(s * x))  # noqa: E731
    split = 100.0 / w
    try:
        v_top = _upper_limit(lambda v: dens(math.exp(v)) * math.exp(v), 0.0, "Psi big jumps")
    except DivergentIntegralError:
        v_top = math.inf
    v_mid = min(math.log(split) if split > 1.0 else 0.0, v_top)
    re = im = 0.0
    if v_mid > 0.0:
        edges = np.linspace(0.0, v_mid, max(2, int(math.ceil(v_mid / 2.0)) + 1))
        for lo, hi in zip(edges[:-1], edges[1:]):
            re += quad(lambda v: dens(math.exp(v)) * math.exp(v) * (math.cos(w * math.exp(v)) - 1.0),
                       lo, hi, what="Psi big jumps (cos)")[0]
            im += quad(lambda v: dens(math.exp(v)) * math.exp(v) * math.sin(w * math.exp(v)),
                       lo, hi, what="Psi big jumps (sin)")[0]
    if v_mid < v_top:
        a = math.exp(v_mid)
        re += quad(dens, a, math.inf, weight="cos", wvar=w, what="Psi big jumps (cos)")[0]
        re -= measure.tail_mass(a)[0 if s > 0 else 1]
        im += quad(dens, a, math.inf, weight="sin", wvar=w, what="Psi big jumps (sin)")[0]
    return re, im


def char_exponent(spec: ProcessSpec, u: float, method: str = "auto") -> complex:
    """Characteristic exponent Ψ with ``E exp(iuX_t) = exp(-t Ψ(u))``.

    ``Ψ(u) = -iua - int (e^{iux} - 1 - iux 1{|x|<=1}) dnu(x)``.

    Parameters
    ----------
    method : {"auto", "quad", "closed"}
        "auto" uses the closed form ``log(1 - iu)`` for the Gamma process and
        quadrature otherwise; "quad" forces quadrature; "closed" requires the
        Gamma family.
    """
    u = float(u)
    if method not in ("auto", "quad", "closed"):
        raise DomainError(f"unknown method {method!r}")
    if u == 0.0:
        return 0j
    if method == "closed" or (method == "auto" and spec.family is Family.GAMMA):
        if spec.family is not Family.GAMMA:
            raise UnsupportedOperationError("closed-form Psi is only provided for the Gamma process")
        shift = spec.drift - (1.0 - math.exp(-1.0))
        return complex(np.log(1.0 - 1j * u)) - 1j * u * shift
    w = abs(u)
    psi = -1j * w * spec.drift - _levy_integral(spec.measure, w)
    return psi if u > 0 else psi.conjugate()
