import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special

from levymoments.exceptions import DomainError
from levymoments.specfun import bessel_k, bessel_k_small_z_constant, bessel_k_values, gamma_fn


@given(st.floats(0.05, 40.0))
def test_gamma_matches_math(x):
    assert gamma_fn(x) == pytest.approx(math.gamma(x), rel=1e-12)


def test_gamma_small_and_nonpositive():
    assert gamma_fn(1e-6) == pytest.approx(math.gamma(1e-6), rel=1e-12)
    for x in (0.0, -0.5):
        with pytest.raises(DomainError):
            gamma_fn(x)


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 2.3, 7.0, 25.0])
@pytest.mark.parametrize("z", [1e-6, 1e-3, 0.1, 1.0, 10.0, 300.0])
def test_bessel_against_scipy(nu, z):
    ref = special.kv(nu, z)
    if not np.isfinite(ref) or ref == 0.0:
        pytest.skip("outside double range")
    r = bessel_k(nu, z)
    assert r.value == pytest.approx(ref, rel=1e-10)
    assert r.abs_error_estimate <= 1e-12 * r.value


@pytest.mark.parametrize("nu", [0.5, -0.5])
@given(z=st.floats(1e-4, 200.0))
def test_half_order_closed_form(nu, z):
    exact = math.sqrt(math.pi / (2 * z)) * math.exp(-z)
    assert bessel_k(nu, z).value == pytest.approx(exact, rel=1e-10)


@given(nu=st.floats(0.0, 20.0), z=st.floats(0.01, 50.0))
def test_order_symmetry(nu, z):
    assert bessel_k(-nu, z).value == bessel_k(nu, z).value


@given(nu=st.floats(0.0, 10.0), z=st.floats(0.05, 20.0))
def test_recurrence(nu, z):
    # K_{nu+1} = K_{nu-1} + (2 nu / z) K_nu
    lhs = bessel_k(nu + 1, z).value
    rhs = bessel_k(nu - 1, z).value + 2 * nu / z * bessel_k(nu, z).value
    assert lhs == pytest.approx(rhs, rel=1e-9)


def test_vectorised_matches_scalar():
    z = np.geomspace(1e-3, 50, 37)
    v = bessel_k_values(1.3, z)
    assert np.allclose(v, [bessel_k(1.3, x).value for x in z], rtol=1e-12)


@pytest.mark.parametrize("p", [0.1, 0.25, 1.0, 2.0])
def test_small_z_constant(p):
    nu = p - 0.5
    z = 1e-8
    assert bessel_k(nu, z).value * z ** abs(nu) == pytest.approx(bessel_k_small_z_constant(p), rel=1e-4)


def test_log_case_has_no_constant():
    with pytest.raises(DomainError):
        bessel_k_small_z_constant(0.5)
    z = 1e-12
    assert bessel_k(0.0, z).value / abs(math.log(z)) == pytest.approx(1.0, rel=0.01)


@pytest.mark.parametrize("z", [0.0, -1.0, float("nan")])
def test_bad_argument(z):
    with pytest.raises(DomainError):
        bessel_k(1.0, z)


def test_bad_tolerance_and_order():
    with pytest.raises(DomainError):
        bessel_k(1.0, 1.0, tol=1e-15)
    with pytest.raises(DomainError):
        bessel_k(80.0, 1.0)
