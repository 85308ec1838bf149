import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from levymoments.exceptions import DomainError, MomentNotFiniteError
from levymoments.levy_core import DriftConvention, gamma_process, inverse_gaussian, nig, stable
from levymoments.moment_engine import (MomentEstimate, default_t_grid, estimate_marginal_moment,
                                       estimate_sup_moment, moment_curve, moment_curves, write_curves_csv)
from levymoments.sampler import Scheme


def gamma_moment(p, t):
    return math.exp(math.lgamma(p + t) - math.lgamma(t))


def test_default_grid():
    g = default_t_grid()
    assert g[0] == 2.0 ** -4 and g[-1] == 2.0 ** -16 and g.size == 13


@pytest.mark.parametrize("p", [0.5, 1.0, 3.0])
def test_gamma_sup_moments_match_closed_form(p):
    t = 2.0 ** -np.arange(2, 8)
    curve = moment_curve(gamma_process(), p, t, n_paths=20_000, seed=3)
    for e in curve.estimates:
        assert e.contains(gamma_moment(p, e.t), z=4), (e.t, e.estimate, gamma_moment(p, e.t), e.std_error)


def test_subordinator_sup_equals_marginal():
    res = moment_curves(inverse_gaussian(1.0), [0.7], [0.1, 0.01], n_paths=2000, seed=1)
    assert np.array_equal(res[("sup", 0.7)].values, res[("marginal", 0.7)].values)


def test_nig_marginal_against_scipy():
    t, p = 0.5, 1.0
    law = stats.norminvgauss(a=0.5, b=0.0, scale=0.5)
    ref = law.expect(lambda x: abs(x) ** p)
    est = estimate_marginal_moment(nig(1.0, 0.0, 1.0), p, t, n_paths=20_000, seed=4)
    assert est.contains(ref, z=4)


def test_sup_between_marginal_and_doob_bound():
    # symmetric NIG is a martingale: E sup|X|^2 <= 4 E|X|^2 (Doob), and >= E|X|^2
    spec = nig(1.0, 0.0, 1.0)
    res = moment_curves(spec, [2.0], [0.25, 0.05], scheme=Scheme.exact(horizon_steps=64), n_paths=5000, seed=2)
    sup, marg = res[("sup", 2.0)].values, res[("marginal", 2.0)].values
    assert np.all(sup >= marg)
    assert np.all(sup <= 4 * marg)


def test_determinism_across_runs_and_workers(tmp_path):
    spec = nig(2.0, 0.5, 1.0)
    t = [0.1, 0.01, 0.001]
    one = moment_curves(spec, [0.5, 2.0], t, n_paths=3000, seed=8, n_jobs=1)
    again = moment_curves(spec, [0.5, 2.0], t, n_paths=3000, seed=8, n_jobs=1)
    two = moment_curves(spec, [0.5, 2.0], t, n_paths=3000, seed=8, n_jobs=2)
    paths = []
    for i, res in enumerate((one, again, two)):
        f = tmp_path / f"c{i}.csv"
        write_curves_csv(f, [res[("sup", 0.5)], res[("sup", 2.0)]])
        paths.append(f.read_bytes())
    assert paths[0] == paths[1] == paths[2]
    other = moment_curves(spec, [0.5], t, n_paths=3000, seed=9)
    assert not np.array_equal(other[("sup", 0.5)].values, one[("sup", 0.5)].values)


def test_csv_format(tmp_path):
    curve = moment_curve(gamma_process(), 1.0, [0.1, 0.05], n_paths=200, seed=0)
    f = tmp_path / "c.csv"
    write_curves_csv(f, [curve])
    raw = f.read_bytes()
    assert raw.startswith(b"t,p,estimate,std_error,n_paths,convention,scheme,seed\r\n")
    first = raw.split(b"\r\n")[1].split(b",")
    assert float(first[2]) == curve.estimates[0].estimate  # full precision round trip


def test_zero_horizon():
    e = estimate_sup_moment(gamma_process(), 1.0, 0.0, n_paths=100)
    assert e.estimate == 0.0 and e.std_error == 0.0


def test_estimate_fields():
    e = estimate_sup_moment(gamma_process(), 1.0, 0.1, n_paths=1000, seed=5)
    assert isinstance(e, MomentEstimate)
    lo, hi = e.ci()
    assert lo < e.estimate < hi and hi - lo == pytest.approx(6 * e.std_error)
    assert e.median_of_means > 0
    row = e.to_row()
    assert row["convention"] == "raw" and row["scheme"] == "ExactIncrement"


@pytest.mark.parametrize("bad, exc", [
    (lambda: estimate_sup_moment(stable(1.5), 1.5, 0.1), MomentNotFiniteError),
    (lambda: estimate_sup_moment(gamma_process(), 0.0, 0.1), DomainError),
    (lambda: estimate_sup_moment(gamma_process(), 1.0, 0.1, n_paths=10), DomainError),
    (lambda: estimate_sup_moment(gamma_process(), 1.0, -0.1), DomainError),
    (lambda: moment_curve(gamma_process(), 1.0, [0.1], kind="max"), DomainError),
    (lambda: estimate_sup_moment(stable(1.5), 1.0, 0.1, DriftConvention.RAW, Scheme.compound_poisson(2.0)),
     DomainError),
])
def test_errors(bad, exc):
    with pytest.raises(exc):
        bad()


def test_heavy_tail_warning():
    with pytest.warns(RuntimeWarning, match="standard error"):
        estimate_sup_moment(stable(1.5), 1.0, 0.05, n_paths=200)


@settings(max_examples=10)
@given(seed=st.integers(0, 2 ** 40), p=st.floats(0.2, 3.0))
def test_sup_curve_monotone_in_t(seed, p):
    # nested horizons on shared paths: the running sup can only grow
    curve = moment_curve(nig(1.0, 0.3, 1.0), p, [0.2, 0.1, 0.05, 0.01], n_paths=200, seed=seed)
    assert np.all(np.diff(curve.values) <= 0)
