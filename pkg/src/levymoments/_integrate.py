"""Thin wrapper around QUADPACK that turns warnings into exceptions."""

from __future__ import annotations

import warnings

from scipy import integrate

from .exceptions import QuadratureError

EPSABS = 1e-10
EPSREL = 1e-8


def quad(f, a, b, *, what="integral", epsabs=EPSABS, epsrel=EPSREL, limit=400, **kwargs):
    """``scipy.integrate.quad`` raising :class:`QuadratureError` on failure.

    Returns ``(value, abserr)``.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(f, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit, **kwargs)[:2]
        except integrate.IntegrationWarning as exc:
            # rerun silently to report the achieved error
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                _, err = integrate.quad(f, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit, **kwargs)[:2]
            raise QuadratureError(f"{what}: {exc}".split("\n")[0], err) from None
    return value, err
