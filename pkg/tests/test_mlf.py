import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import rgamma

from subdiffinv.errors import DomainError
from subdiffinv.mlf import (
    TARGET_ABS_ERROR,
    X_CAP,
    MLQuery,
    asymptotic_threshold,
    mittag_leffler,
    ml,
    ml_classical,
    ml_deficit,
    mp_series,
    mp_series_many,
)

rhos = st.floats(0.1, 1.0)
mus = st.floats(0.2, 3.0)


def erfcx_half(x):
    """E_{1/2}(-x) = exp(x^2) erfc(x), evaluated in extended precision."""
    with mpmath.workdps(50):
        return float(mpmath.exp(mpmath.mpf(x) ** 2) * mpmath.erfc(x))


# {{{ closed forms


def test_half_order_at_one():
    assert abs(ml_classical(0.5, 1.0) - math.e * math.erfc(1.0)) <= 1e-12
    assert abs(ml_classical(0.5, 1.0) - 0.4275835762) <= 1e-9


@pytest.mark.parametrize("x", [0.0, 0.3, 1.0, 2.5, 5.0, 6.0, 6.5, 20.0, 300.0, 1e4, 1e6])
def test_half_order_erfc_oracle(x):
    assert abs(ml_classical(0.5, x) - erfcx_half(x)) <= TARGET_ABS_ERROR


def test_exponential_reduction():
    x = np.concatenate([[0.0], np.geomspace(1e-6, 50.0, 99)])
    assert np.max(np.abs(mittag_leffler(1.0, 1.0, x) - np.exp(-x))) <= 1e-10


def test_rho_one_mu_two():
    # E_{1,2}(-x) = (1 - e^{-x}) / x
    x = np.geomspace(1e-3, 1e3, 200)
    assert np.max(np.abs(mittag_leffler(1.0, 2.0, x) + np.expm1(-x) / x)) <= 1e-12


def test_value_at_zero_is_reciprocal_gamma():
    for rho, mu in [(0.3, 0.7), (0.5, 1.5), (1.0, 2.0)]:
        assert mittag_leffler(rho, mu, 0.0) == pytest.approx(1 / math.gamma(mu), abs=1e-15)


# }}}


# {{{ extended precision oracle


@given(rho=rhos, mu=mus, x=st.floats(0.0, 1e4))
def test_matches_mp_series(rho, mu, x):
    # the mpmath series is only cheap while x**(1/rho) stays moderate
    if x ** (1.0 / rho) > 80.0:
        x = 80.0**rho
    ref = float(mp_series(rho, mu, x))
    assert abs(float(mittag_leffler(rho, mu, x)) - ref) <= TARGET_ABS_ERROR


def test_shared_coefficient_series_matches_pointwise():
    xs = [0.0, 0.5, 3.0, 7.5]
    many = mp_series_many(0.4, 1.3, xs)
    for x, v in zip(xs, many):
        assert v == pytest.approx(float(mp_series(0.4, 1.3, x)), abs=1e-15)


@pytest.mark.parametrize("rho", [0.1, 0.25, 0.5, 0.75, 0.9, 1.0])
@pytest.mark.parametrize("mu", [None, 1.0, "rho+1", "rho+2"])
def test_regime_boundaries(rho, mu):
    mu = {None: rho, "rho+1": rho + 1.0, "rho+2": rho + 2.0}.get(mu, mu)
    for x in (1.0, asymptotic_threshold(rho)):
        for xx in (x * (1 - 1e-9), x, x * (1 + 1e-9)):
            ref = float(mp_series(rho, mu, xx))
            assert abs(float(mittag_leffler(rho, mu, xx)) - ref) <= TARGET_ABS_ERROR


# }}}


# {{{ structural properties


@given(rho=rhos, mu=mus, x=st.floats(0.0, 1e5))
def test_recurrence(rho, mu, x):
    # E_{rho,mu}(-x) = 1/Gamma(mu) - x E_{rho,mu+rho}(-x)
    lhs = float(mittag_leffler(rho, mu, x))
    rhs = rgamma(mu) - x * float(mittag_leffler(rho, mu + rho, x))
    assert abs(lhs - rhs) <= 4 * TARGET_ABS_ERROR * max(1.0, x)


@given(rho=rhos, x=st.floats(0.0, 1e5))
def test_deficit_complements(rho, x):
    assert abs(ml_deficit(rho, x) - (1.0 - ml_classical(rho, x))) <= 2 * TARGET_ABS_ERROR


@given(rho=rhos, data=st.lists(st.floats(0.0, 1e4), min_size=2, max_size=20, unique=True))
def test_classical_decreasing_and_bounded(rho, data):
    x = np.sort(np.array(data))
    e = ml_classical(rho, x)
    assert np.all(e <= 1)
    # exp(-x) underflows for rho = 1; positivity is checked where representable
    assert np.all(e[x ** (1 / rho) < 700] > 0) and np.all(e >= 0)
    assert np.all(np.diff(e) <= 1e-15)


def test_vectorised_matches_scalar():
    x = np.array([[0.0, 0.5], [3.0, 1e3]])
    v = mittag_leffler(0.6, 1.2, x)
    assert v.shape == x.shape
    for i in np.ndindex(x.shape):
        assert v[i] == float(mittag_leffler(0.6, 1.2, x[i]))


def test_regime_labels_and_error_estimate():
    rho = 0.5
    assert ml(MLQuery(rho, 1.0, 0.5)).regime == "series"
    assert ml(MLQuery(rho, 1.0, 3.0)).regime == "midrange"
    hi = ml(MLQuery(rho, 1.0, 100.0))
    assert hi.regime == "asymptotic"
    assert hi.est_abs_error <= TARGET_ABS_ERROR
    assert abs(hi.value - erfcx_half(100.0)) <= hi.est_abs_error + 1e-15


def test_poles_in_asymptotic_series():
    # mu - rho j hits 0, -1, ... : the corresponding terms vanish
    v = float(mittag_leffler(0.5, 1.0, 1e3))
    assert abs(v - erfcx_half(1e3)) <= 1e-12


# }}}


@pytest.mark.parametrize(
    "rho, mu, x",
    [(0.0, 1.0, 1.0), (1.5, 1.0, 1.0), (0.5, 0.0, 1.0), (0.5, -1.0, 1.0),
     (0.5, 1.0, -1e-3), (0.5, 1.0, X_CAP * 1.01), (0.5, 1.0, float("nan"))],
)
def test_domain_errors(rho, mu, x):
    with pytest.raises(DomainError):
        mittag_leffler(rho, mu, x)
    with pytest.raises(DomainError):
        MLQuery(rho, mu, x)
