"""Special-function kernels: Jacobi polynomials for arbitrary real parameters
and the complex log-gamma function."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial


class ParameterDegeneracyError(ValueError):
    pass


class GammaPoleError(ValueError):
    pass


@dataclass(frozen=True)
class JacobiParams:
    n: int
    a: float
    b: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"Jacobi degree must be a non-negative integer, got {self.n}")


def _hypergeometric_coefficients(p: JacobiParams) -> list[float]:
    """Coefficients c_k with P_n^{(a,b)}(y) = sum_k c_k ((1-y)/2)^k.

    The ratio (a+1)_n / (a+1)_k is formed as the product of the factors
    (a+1+j), j = k..n-1, so no division by a vanishing Pochhammer occurs and
    the result is the polynomial continuation in (a, b).
    """
    n, a, b = p.n, float(p.a), float(p.b)
    coeffs = []
    for k in range(n + 1):
        c = 1.0
        for j in range(k, n):
            c *= a + 1 + j
        for j in range(k):
            c *= (-n + j) * (n + a + b + 1 + j)
        c /= math.factorial(n) * math.factorial(k)
        coeffs.append(c)
    if not all(math.isfinite(c) for c in coeffs):
        raise ParameterDegeneracyError(f"parameter degeneracy for {p}")
    return coeffs


def _sum_in_z(coeffs, z):
    acc = np.zeros_like(z) + coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * z + c
    return acc


def jacobi(params: JacobiParams, y):
    """Evaluate P_n^{(a,b)}(y) from the terminating hypergeometric sum.

    For y < 0 the reflected form (-1)^n P_n^{(b,a)}(-y) is summed instead, so
    the series variable (1 - y)/2 never exceeds 1/2.
    """
    y = np.asarray(y, dtype=float)
    fwd = _hypergeometric_coefficients(params)
    out = _sum_in_z(fwd, (1.0 - y) / 2.0)
    neg = y < 0
    if np.any(neg):
        rev = _hypergeometric_coefficients(JacobiParams(params.n, params.b, params.a))
        refl = (-1) ** params.n * _sum_in_z(rev, (1.0 + y) / 2.0)
        out = np.where(neg, refl, out)
    return out if out.ndim else float(out)


def jacobi_deriv(params: JacobiParams, y, order: int = 1):
    """order-th derivative in y, via d/dy P_n^{(a,b)} = (n+a+b+1)/2 P_{n-1}^{(a+1,b+1)}."""
    if order < 1:
        raise ValueError("order must be >= 1")
    n, a, b = params.n, params.a, params.b
    if order > n:
        out = np.zeros_like(np.asarray(y, dtype=float))
        return out if out.ndim else 0.0
    scale = 1.0
    for _ in range(order):
        scale *= (n + a + b + 1) / 2.0
        n, a, b = n - 1, a + 1, b + 1
    return scale * jacobi(JacobiParams(n, a, b), y)


def jacobi_polynomial(params: JacobiParams) -> Polynomial:
    """Power-basis polynomial in y equal to P_n^{(a,b)}(y)."""
    z = Polynomial([0.5, -0.5])
    poly = Polynomial([0.0])
    zk = Polynomial([1.0])
    for c in _hypergeometric_coefficients(params):
        poly = poly + c * zk
        zk = zk * z
    return poly


# Bernoulli numbers B_2 .. B_20 for the Stirling series
_BERNOULLI = (
    1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6,
    -3617 / 510, 43867 / 798, -174611 / 330,
)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)
_SHIFT_TO = 15.0


def log_gamma(z: complex) -> complex:
    """Principal branch of log Gamma(z) (the branch continuous off the
    negative real axis, real part log|Gamma(z)|).

    Arguments with Re z < 15 are raised by the recurrence
    Gamma(z) = Gamma(z+m) / (z (z+1) ... (z+m-1)), then the Stirling series
    with ten Bernoulli terms is applied.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise GammaPoleError(f"gamma pole at z={z.real:g}")
    if math.copysign(1.0, z.imag) < 0:
        # lower half-plane (including -0j) by conjugate symmetry
        return log_gamma(z.conjugate()).conjugate()
    shift = 0j
    if z.real < _SHIFT_TO:
        m = int(math.ceil(_SHIFT_TO - z.real))
        for j in range(m):
            shift += cmath.log(z + j)
        z = z + m
    inv = 1.0 / z
    inv2 = inv * inv
    series = 0j
    term = inv
    for k, b2k in enumerate(_BERNOULLI, start=1):
        series += b2k / (2 * k * (2 * k - 1)) * term
        term *= inv2
    result = (z - 0.5) * cmath.log(z) - z + _HALF_LOG_2PI + series - shift
    return result
