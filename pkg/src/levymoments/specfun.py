"""Special functions used by the exact-moment oracles.

``bessel_k`` evaluates the modified Bessel function of the third kind from
its integral representation

    K_nu(z) = 1/2 * int_0^inf u^(nu - 1) exp(-(z/2)(u + 1/u)) du.

The substitution ``u = exp(s)`` turns this into
``int_0^inf cosh(nu s) exp(-z cosh s) ds``, whose integrand is smooth, even
and decays double-exponentially, so the trapezoid rule converges
geometrically in the step size.  Using ``cosh(nu s)`` makes
``K_nu = K_{-nu}`` hold by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, QuadratureError

__all__ = [
    "BesselEval",
    "bessel_k",
    "bessel_k_values",
    "bessel_k_small_z_constant",
    "gamma_fn",
]

MAX_ORDER = 50.0
MIN_TOL = 1e-12
_MAX_HALVINGS = 22
_LOG_DBL_MAX = math.log(np.finfo(float).max)

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


@dataclass(frozen=True)
class BesselEval:
    """Result of a K_nu(z) evaluation.

    ``abs_error_estimate`` is the difference between the last two trapezoid
    refinements, which bounds the error of the returned value from above.
    """

    order: float
    argument: float
    value: float
    abs_error_estimate: float


def gamma_fn(x: float) -> float:
    """Gamma function for ``x > 0`` (Lanczos approximation).

    Relative error is below 1e-13 on the positive axis up to the overflow
    point near 171.6.
    """
    x = float(x)
    if not x > 0:
        raise DomainError(f"gamma_fn requires x > 0, got {x!r}")
    if x < 0.5:
        # reflection keeps the series in its accurate range
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1.0 - x))
    if x > 171.6:
        raise OverflowError(f"gamma_fn({x}) overflows double precision")
    x -= 1.0
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (x + i)
    t = x + _LANCZOS_G + 0.5
    # split the power to avoid overflow of t**(x+0.5) before multiplying by exp(-t)
    half = t ** (0.5 * (x + 0.5))
    return math.sqrt(2.0 * math.pi) * half * (half * math.exp(-t)) * acc


def _log_integrand(s, nu, z):
    """log(cosh(nu s) exp(-z cosh s)), stable for large arguments."""
    y = np.abs(nu * s)
    return y + np.log1p(np.exp(-2.0 * y)) - math.log(2.0) - z * np.cosh(s)


def _domain(nu: float, zmin: float, log_tol: float) -> tuple[float, float]:
    """Peak location and truncation point for the smallest argument."""
    nu = abs(nu)
    s_peak = math.asinh(nu / zmin) if nu > 0 else 0.0
    peak = float(_log_integrand(np.array(s_peak), nu, zmin))
    step = 1.0
    s_end = s_peak + step
    while float(_log_integrand(np.array(s_end), nu, zmin)) - peak > log_tol - 12.0:
        step *= 1.5
        s_end = s_peak + step
    return s_peak, s_end


def _trapezoid(nu, z, tol):
    """Refine a trapezoid rule on [0, S] for every entry of ``z``.

    Returns (values, abs_error_estimates).  ``z`` is a 1-D array.
    """
    log_tol = math.log(tol)
    _, s_end = _domain(nu, float(z.min()), log_tol)
    # integrand width shrinks like 1/sqrt(z + |nu|) around its peak
    width = 1.0 / math.sqrt(1.0 + float(z.max()) + abs(nu))
    h = min(0.5, s_end / 16.0, width)
    s_peak = np.arcsinh(abs(nu) / z) if nu != 0 else np.zeros_like(z)
    shift = _log_integrand(s_peak, nu, z)[:, None]

    nodes = np.arange(0.0, s_end + h, h)
    f = np.exp(_log_integrand(nodes[None, :], nu, z[:, None]) - shift)
    total = f.sum(axis=1) - 0.5 * f[:, 0]
    prev = h * total
    for _ in range(_MAX_HALVINGS):
        h *= 0.5
        mids = nodes[:-1] + h
        fm = np.exp(_log_integrand(mids[None, :], nu, z[:, None]) - shift)
        total = total + fm.sum(axis=1)
        nodes = np.sort(np.concatenate([nodes, mids]))
        cur = h * total
        err = np.abs(cur - prev)
        prev = cur
        if np.all(err <= tol * np.abs(cur)):
            break
    log_scale = shift[:, 0]
    if np.any(log_scale + np.log(prev) > _LOG_DBL_MAX):
        raise DomainError(f"K_{nu}(z) overflows double precision for z >= {z.min():g}")
    scale = np.exp(log_scale)
    return prev * scale, err * scale


def _check_args(nu, tol):
    if abs(nu) > MAX_ORDER:
        raise DomainError(f"|nu| must be <= {MAX_ORDER}, got {nu}")
    if tol < MIN_TOL:
        raise DomainError(f"tol must be >= {MIN_TOL}, got {tol}")


def bessel_k(nu: float, z: float, tol: float = 1e-12) -> BesselEval:
    """Modified Bessel function of the third kind K_nu(z) for real z > 0.

    Parameters
    ----------
    nu : float
        Order, ``|nu| <= 50``.
    z : float
        Argument, strictly positive.
    tol : float
        Relative tolerance, at least 1e-12.  The returned
        ``abs_error_estimate`` satisfies ``abs_error_estimate <= tol * value``.

    Raises
    ------
    DomainError
        If ``z <= 0`` or the arguments are out of range.
    QuadratureError
        If the refinement stalls before reaching ``tol``.
    """
    nu, z, tol = float(nu), float(z), float(tol)
    if not z > 0:
        raise DomainError(f"bessel_k requires z > 0, got {z!r}")
    _check_args(nu, tol)
    value, err = _trapezoid(nu, np.array([z]), tol)
    value, err = float(value[0]), float(err[0])
    if not err <= tol * value:
        raise QuadratureError(f"bessel_k({nu}, {z}) did not converge", err)
    return BesselEval(order=nu, argument=z, value=value, abs_error_estimate=err)


def bessel_k_values(nu: float, z, tol: float = 1e-12) -> np.ndarray:
    """Vectorised K_nu over an array of positive arguments."""
    nu, tol = float(nu), float(tol)
    _check_args(nu, tol)
    z = np.asarray(z, dtype=float)
    if np.any(~(z > 0)):
        raise DomainError("bessel_k_values requires all z > 0")
    flat = z.ravel()
    out = np.empty_like(flat)
    order = np.argsort(flat)
    # chunk over sorted arguments so each chunk gets a tight domain
    for chunk in np.array_split(order, max(1, flat.size // 1024)):
        if chunk.size == 0:
            continue
        vals, err = _trapezoid(nu, flat[chunk], tol)
        if np.any(err > tol * vals):
            raise QuadratureError("bessel_k_values did not converge", float(np.max(err / vals)))
        out[chunk] = vals
    return out.reshape(z.shape)


def bessel_k_small_z_constant(p: float) -> float:
    """Constant C_p with K_{p-1/2}(z) ~ C_p * z**(-|p - 1/2|) as z -> 0.

    ``C_p = 2**(p - 3/2) Gamma(p - 1/2)`` for p > 1/2 and
    ``C_p = 2**(-p - 1/2) Gamma(1/2 - p)`` for p < 1/2.  At p = 1/2 the
    behaviour is logarithmic (K_0(z) ~ |log z|) and no constant exists.
    """
    p = float(p)
    if p == 0.5:
        raise DomainError("p = 1/2 gives K_0, which grows like |log z|; no power-law constant")
    if p > 0.5:
        return 2.0 ** (p - 1.5) * gamma_fn(p - 0.5)
    return 2.0 ** (-p - 0.5) * gamma_fn(0.5 - p)
