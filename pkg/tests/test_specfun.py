import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fluxscat.specfun import (
    UNDERFLOW_FLOOR,
    AccuracyError,
    DomainError,
    bessel_j,
    bessel_j_many,
    bessel_j_oracle,
    log_gamma,
    log_tail_bound,
    phase_minus_i_pow,
    tail_bound,
)


def half_integer_closed_form(nu, x):
    s, c = math.sin(x), math.cos(x)
    pre = math.sqrt(2.0 / (math.pi * x))
    if nu == 0.5:
        return pre * s
    if nu == 1.5:
        return pre * (s / x - c)
    if nu == 2.5:
        return pre * ((3.0 / (x * x) - 1.0) * s - 3.0 / x * c)
    raise ValueError(nu)


# --- log_gamma ---------------------------------------------------------------


def test_log_gamma_examples():
    assert log_gamma(1.0) == 0.0
    assert log_gamma(0.5) == pytest.approx(0.5723649429247001, rel=1e-15)
    # ln(100!) from the exact integer factorial at 50 digits
    assert log_gamma(101.0) == pytest.approx(363.73937555556349014408, rel=1e-14)


@pytest.mark.parametrize("x", [0.0, -1.0, math.inf, math.nan])
def test_log_gamma_domain(x):
    with pytest.raises(DomainError):
        log_gamma(x)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.5, 2000.0))
def test_log_gamma_relative_accuracy(x):
    ref = float(mpmath.loggamma(mpmath.mpf(x)))
    assert abs(log_gamma(x) - ref) <= 1e-13 * abs(ref)


@pytest.mark.parametrize("x", [1.0 - 1e-9, 1.0 + 3e-7, 0.99609375, 1.2499, 1.76, 2.0 - 1e-8, 2.0 + 1e-5, 2.2])
def test_log_gamma_near_zeros(x):
    ref = float(mpmath.loggamma(mpmath.mpf(x)))
    assert abs(log_gamma(x) - ref) <= 1e-14 * abs(ref)


# --- bessel_j ----------------------------------------------------------------


def test_bessel_examples():
    assert bessel_j(0.0, 0.0).value == 1.0
    assert bessel_j(0.5, math.pi / 2).value == pytest.approx(2.0 / math.pi, rel=1e-14)
    # frozen from bessel_j_oracle (adaptive quadrature); mpmath agrees to 1e-15
    assert bessel_j(3.56931, 100.0).value == pytest.approx(0.06687512945451024, rel=1e-12)


def test_bessel_underflow_returns_exact_zero():
    # log10 of the first-term bound is about -740.8
    assert log_tail_bound(900.0, 100.0) < math.log(UNDERFLOW_FLOOR)
    ev = bessel_j(900.0, 100.0)
    assert ev.value == 0.0
    assert ev.method == "series"
    assert 0.0 <= ev.abs_error_estimate <= UNDERFLOW_FLOOR


def test_bessel_methods_cover_regimes():
    assert bessel_j(3.0, 5.0).method == "series"
    assert bessel_j(2.0, 150.0).method == "asymptotic"
    assert bessel_j(100.0, 100.0).method == "quadrature"
    assert bessel_j(60.0, 100.0).method == "quadrature"


@pytest.mark.parametrize(
    "nu,x,tol",
    [(-0.1, 1.0, 1e-12), (5001.0, 1.0, 1e-12), (1.0, -1.0, 1e-12), (1.0, 1e5, 1e-12),
     (math.nan, 1.0, 1e-12), (1.0, 1.0, 0.0)],
)
def test_bessel_domain_errors(nu, x, tol):
    with pytest.raises(DomainError):
        bessel_j(nu, x, tol)


@pytest.mark.parametrize(
    "nu,x",
    [(0.3, 7.0), (12.25, 30.0), (49.9, 50.0), (100.0, 100.0), (100.5, 99.5), (130.0, 100.0),
     (400.0, 350.0), (700.0, 100.0), (7.5, 1000.0), (2.0, 5000.0)],
)
def test_bessel_against_mpmath(nu, x):
    ev = bessel_j(nu, x)
    ref = float(mpmath.besselj(nu, x))
    assert abs(ev.value - ref) <= max(1e-11 * abs(ref), 1e-14)
    assert abs(ev.value - ref) <= 3.0 * ev.abs_error_estimate + 1e-300


def test_many_matches_scalar():
    nus = np.array([0.0, 0.5, 3.3, 60.0, 99.0, 101.0, 180.0, 800.0])
    values, errors, methods = bessel_j_many(nus, 100.0)
    for nu, v in zip(nus, values):
        assert v == pytest.approx(bessel_j(nu, 100.0).value, rel=1e-13, abs=1e-16)
    assert np.all(errors >= 0) and np.all(np.isfinite(errors))


def test_accuracy_error_carries_estimate():
    err = AccuracyError("boom", 1.5, 0.1)
    assert err.estimate == 1.5 and err.error == 0.1
    assert isinstance(err, ArithmeticError)


# --- oracle ------------------------------------------------------------------


def test_oracle_examples():
    assert bessel_j_oracle(1.0, 0.0) == pytest.approx(0.0, abs=1e-14)
    closed = half_integer_closed_form(2.5, 2.5)
    assert closed == pytest.approx(0.3280914115344381, rel=1e-14)
    assert bessel_j_oracle(2.5, 2.5) == pytest.approx(closed, rel=1e-10, abs=1e-12)
    assert bessel_j_oracle(0.0, 10.0) == pytest.approx(bessel_j(0.0, 10.0).value, abs=1e-12)


@pytest.mark.parametrize("nu,x", [(2000.5, 1.0), (1.0, 1000.5), (-1.0, 1.0)])
def test_oracle_domain(nu, x):
    with pytest.raises(DomainError):
        bessel_j_oracle(nu, x)


# --- tail bound ----------------------------------------------------------------


def test_tail_bound_examples():
    assert tail_bound(0.0, 0.0) == 1.0
    bound = tail_bound(200.0, 100.0)
    # the oracle is only good to 1e-12 absolute here; mpmath gives ~2e-41
    assert bound >= abs(bessel_j_oracle(200.0, 100.0)) - 1e-12
    assert bound >= abs(float(mpmath.besselj(200, 100)))
    assert tail_bound(896.5, 100.0) < 1e-300
    assert log_tail_bound(896.5, 100.0) == pytest.approx(-1695.5433759824818, rel=1e-14)


@settings(max_examples=150, deadline=None)
@given(st.floats(0.0, 2000.0), st.floats(0.0, 300.0))
def test_bessel_below_tail_bound(nu, x):
    assert abs(bessel_j(nu, x).value) <= tail_bound(nu, x) * (1.0 + 1e-12)


# --- phase -------------------------------------------------------------------


def test_phase_examples():
    assert phase_minus_i_pow(0.0) == 1.0
    assert phase_minus_i_pow(2.0) == pytest.approx(-1.0, abs=1e-15)
    assert phase_minus_i_pow(0.5) == pytest.approx(complex(math.sqrt(0.5), -math.sqrt(0.5)), abs=1e-15)
    with pytest.raises(DomainError):
        phase_minus_i_pow(math.inf)


@given(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3))
def test_phase_is_multiplicative(a, b):
    assert abs(phase_minus_i_pow(a + b) - phase_minus_i_pow(a) * phase_minus_i_pow(b)) <= 1e-12
    assert abs(abs(phase_minus_i_pow(a)) - 1.0) <= 1e-15


@given(st.floats(0.0, 8.0))
def test_phase_small_orders_tight(a):
    assert abs(phase_minus_i_pow(a) - cmath.exp(-0.5j * math.pi * a)) <= 1e-14


# --- invariants -------------------------------------------------------------------


@pytest.mark.parametrize("nu", [0.5, 1.5, 2.5])
def test_half_integer_closed_forms(nu):
    for x in np.linspace(0.1, 200.0, 400):
        got = bessel_j(nu, x).value
        ref = half_integer_closed_form(nu, x)
        assert abs(got - ref) <= 1e-10 * abs(ref) + 1e-15


@settings(max_examples=100, deadline=None)
@given(st.floats(1.0, 150.0), st.floats(1.0, 200.0))
def test_recurrence(nu, x):
    mid = bessel_j(nu, x).value
    if abs(mid) < 1e-250:
        return
    lhs = bessel_j(nu - 1.0, x).value + bessel_j(nu + 1.0, x).value
    rhs = 2.0 * nu / x * mid
    # where both sides are tiny against the envelope the check is rounding-limited
    scale = max(abs(rhs), 1e-4 * math.sqrt(2.0 / (math.pi * x)))
    assert abs(lhs - rhs) <= 1e-8 * scale


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 150.0), st.floats(0.5, 200.0))
def test_method_independence(nu, x):
    ev = bessel_j(nu, x)
    oracle = bessel_j_oracle(nu, x)
    # oracle error budget: 1e-12 absolute
    assert abs(ev.value - oracle) <= ev.abs_error_estimate + 1e-12 + 1e-10 * abs(oracle)


def test_subnormal_argument():
    assert bessel_j(0.0, 5e-324).value == 1.0
    assert bessel_j(1.5, 5e-324).value == 0.0
    assert tail_bound(0.0, 5e-324) == 1.0
    assert bessel_j(0.5, 1e-310).value == pytest.approx(math.sqrt(2e-310 / math.pi), rel=1e-14)
