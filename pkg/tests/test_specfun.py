import cmath
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.special import eval_jacobi, loggamma

from intsoliton.specfun import (
    GammaPoleError,
    JacobiParams,
    _hypergeometric_coefficients,
    jacobi,
    jacobi_deriv,
    jacobi_polynomial,
    log_gamma,
)

params = st.builds(
    JacobiParams,
    n=st.integers(0, 8),
    a=st.floats(-10, 10, allow_nan=False),
    b=st.floats(-10, 10, allow_nan=False),
)
ys = st.floats(-0.999, 0.999)


def recurrence(n, a, b, y):
    """Standard three-term recurrence, run in 40-digit arithmetic."""
    with mpmath.workdps(40):
        a, b, y = mpmath.mpf(a), mpmath.mpf(b), mpmath.mpf(y)
        p0 = mpmath.mpf(1)
        if n == 0:
            return float(p0)
        p1 = (a + 1) + (a + b + 2) * (y - 1) / 2
        for m in range(2, n + 1):
            c1 = 2 * m * (m + a + b) * (2 * m + a + b - 2)
            c2 = (2 * m + a + b - 1) * ((2 * m + a + b) * (2 * m + a + b - 2) * y + a * a - b * b)
            c3 = 2 * (m + a - 1) * (m + b - 1) * (2 * m + a + b)
            p0, p1 = p1, (c2 * p1 - c3 * p0) / c1
        return float(p1)


def condition_sum(p, y):
    """sum_k |c_k| |z|^k for the series actually summed at y: the scale of
    the rounding error of the terminating sum."""
    if y < 0:
        p, y = JacobiParams(p.n, p.b, p.a), -y
    z = (1 - y) / 2
    return sum(abs(c) * z**k for k, c in enumerate(_hypergeometric_coefficients(p)))


def test_degree_zero_is_one():
    assert jacobi(JacobiParams(0, 3.7, -2.2), 0.3) == 1.0


def test_seed_factor_h1_v2():
    p = JacobiParams(2, -4, -4)
    y = np.linspace(-1, 1, 11)
    np.testing.assert_allclose(jacobi(p, y), 0.5 * (1 + 5 * y**2), rtol=1e-14)
    assert jacobi(p, 0.0) == pytest.approx(0.5, rel=1e-15)
    # 3 - 10 z + 10 z^2 at z = 0
    assert jacobi(p, 1.0) == pytest.approx(3.0, rel=1e-15)


def test_derivative_examples():
    assert jacobi_deriv(JacobiParams(0, 1.5, 2.0), 0.2, 1) == 0.0
    p = JacobiParams(2, -4, -4)
    assert jacobi_deriv(p, 0.5, 1) == pytest.approx(2.5, rel=1e-14)
    for y in (-0.7, 0.0, 0.4):
        assert jacobi_deriv(p, y, 2) == pytest.approx(5.0, rel=1e-14)
    assert jacobi_deriv(p, 0.3, 3) == 0.0


def test_matches_scipy_for_positive_parameters():
    y = np.linspace(-1, 1, 17)
    for n, a, b in [(3, 0.5, 1.5), (5, 2.0, 2.0), (7, 0.0, 3.25)]:
        np.testing.assert_allclose(jacobi(JacobiParams(n, a, b), y), eval_jacobi(n, a, b, y), rtol=1e-12, atol=1e-13)


def binomial_sum(n, a, b, y):
    """sum_s C(n+a, n-s) C(n+b, s) ((y-1)/2)^s ((y+1)/2)^(n-s), exact rationals."""

    def gbinom(top, k):
        out = Fraction(1)
        for j in range(k):
            out *= Fraction(top - j, j + 1)
        return out

    y = Fraction(y)
    return float(sum(
        gbinom(n + a, n - s) * gbinom(n + b, s) * ((y - 1) / 2) ** s * ((y + 1) / 2) ** (n - s)
        for s in range(n + 1)
    ))


def test_negative_integer_parameters_exact():
    for h in (0, 1, 2, 3):
        for v in range(0, 13):
            a = -h - 1 - v
            for y in ("-0.9", "-0.3", "0", "0.45", "0.95", "1"):
                ref = binomial_sum(v, a, a, Fraction(y))
                assert jacobi(JacobiParams(v, a, a), float(y)) == pytest.approx(ref, rel=1e-11, abs=1e-11)


@settings(max_examples=300, deadline=None)
@given(params, ys)
def test_three_term_recurrence(p, y):
    a, b, n = p.a, p.b, p.n
    # keep away from vanishing leading recurrence coefficients
    for m in range(2, n + 1):
        assume(abs(2 * m * (m + a + b) * (2 * m + a + b - 2)) > 1e-2)
    ref = recurrence(n, a, b, y)
    got = jacobi(p, y)
    assert abs(got - ref) <= 1e-13 * max(condition_sum(p, y), 1.0)


@settings(max_examples=200, deadline=None)
@given(params, ys)
def test_derivative_vs_finite_differences(p, y):
    h = 1e-5
    fd = (jacobi(p, y + h) - jacobi(p, y - h)) / (2 * h)
    scale = max(1.0, max(abs(c) for c in jacobi_polynomial(p).coef))
    assert abs(jacobi_deriv(p, y, 1) - fd) <= 1e-6 * scale


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10), st.floats(-12, 12), ys)
def test_symmetric_parity(n, a, y):
    p = JacobiParams(n, a, a)
    tol = 1e-13 * max(condition_sum(p, y), 1.0)
    assert abs(jacobi(p, -y) - (-1) ** n * jacobi(p, y)) <= tol


def test_power_basis_agrees_with_sum():
    for n, a, b in [(4, -7, -7), (6, 2.5, -1.5), (12, -15, -15)]:
        p = JacobiParams(n, a, b)
        y = np.linspace(-1, 1, 9)
        np.testing.assert_allclose(jacobi_polynomial(p)(y), jacobi(p, y), rtol=1e-11, atol=1e-9)


def test_invalid_degree():
    with pytest.raises(ValueError):
        JacobiParams(-1, 0, 0)


def test_log_gamma_examples():
    assert abs(log_gamma(1)) < 1e-15
    assert log_gamma(0.5).real == pytest.approx(0.5723649429247001, rel=1e-13)
    with pytest.raises(GammaPoleError):
        log_gamma(-1)
    with pytest.raises(GammaPoleError):
        log_gamma(0)


@settings(max_examples=300, deadline=None)
@given(st.floats(-100, 100), st.floats(-100, 100))
def test_log_gamma_matches_scipy_branch(re, im):
    z = complex(re, im)
    assume(abs(z) <= 100)
    assume(min(abs(z + n) for n in range(0, 101)) > 1e-3)
    ref = complex(loggamma(z))
    got = log_gamma(z)
    assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref))


@settings(max_examples=200, deadline=None)
@given(st.floats(-20, 20), st.floats(-20, 20))
def test_reflection_anchor(re, im):
    z = complex(re, im)
    assume(abs(z) <= 20 and abs(im) > 1e-3 or abs(re - round(re)) > 1e-3)
    assume(abs(z) <= 20)
    lhs = cmath.exp(log_gamma(z) + log_gamma(1 - z))
    rhs = math.pi / cmath.sin(math.pi * z)
    assert abs(lhs - rhs) <= 1e-10 * abs(rhs)


def test_log_gamma_large_argument_against_mpmath():
    for z in (50 + 0j, 99.5 + 3j, 7 - 80j, -60.5 + 0.25j):
        ref = complex(mpmath.loggamma(z))
        assert abs(log_gamma(z) - ref) <= 1e-12 * abs(ref)
