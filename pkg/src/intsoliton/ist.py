"""Exact N-soliton KdV solutions from reflectionless scattering data.

u(x, t) = -2 d^2/dx^2 log det A with the symmetrized matrix
A_mn = delta_mn + exp(theta_m + theta_n) / (kappa_m + kappa_n),
theta_n = log c_n(t) - kappa_n x and c_n(t) = c_n(0) exp(4 kappa_n^3 t).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .deform import DeformationSpec
from .scatter import ScatteringData, scattering_data

DIRECT_WINDOW = 600.0
# exp(2 * theta) must stay representable when A is formed literally
_RAW_THETA_MAX = 350.0


class OutOfDirectWindowError(OverflowError):
    pass


class DegenerateSpectrumError(ValueError):
    pass


def evolve_norming(c0: float, kappa: float, t: float) -> float:
    return c0 * math.exp(4.0 * kappa**3 * t)


def log_norming(c0: float, kappa: float, t: float) -> float:
    return math.log(c0) + 4.0 * kappa**3 * t


def _thetas(data: ScatteringData, x, t: float) -> np.ndarray:
    """theta_n(x, t), shape x.shape + (N,)."""
    kap = np.asarray(data.kappas)
    logc = np.array([log_norming(c, k, t) for c, k in zip(data.normings, data.kappas)])
    return logc - np.multiply.outer(np.asarray(x, dtype=float), kap)


@dataclass(frozen=True)
class TauMatrix:
    matrix: np.ndarray
    x: float
    t: float

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    def cholesky(self) -> np.ndarray:
        return np.linalg.cholesky(self.matrix)


def tau_matrix(data: ScatteringData, x: float, t: float) -> TauMatrix:
    theta = _thetas(data, float(x), t)
    if theta.max() > _RAW_THETA_MAX:
        raise OutOfDirectWindowError(
            f"theta_max={theta.max():.1f} at (x={x}, t={t}) overflows the literal tau matrix"
        )
    kap = np.asarray(data.kappas)
    ksum = kap[:, None] + kap[None, :]
    mat = np.eye(data.N) + np.exp(theta[:, None] + theta[None, :]) / ksum
    return TauMatrix(mat, float(x), float(t))


def _scaled_system(data: ScatteringData, theta: np.ndarray):
    """B, B', B'' with A = S B S, S = diag(exp(max(theta, 0))).

    Entries of B are bounded by 1 for every theta, so this never overflows;
    log det A = 2 sum max(theta, 0) + log det B and the first term is linear
    in x on the region where the sign pattern of theta is fixed.
    """
    kap = np.asarray(data.kappas)
    kmat = 1.0 / (kap[:, None] + kap[None, :])
    big = theta > 0
    f = np.exp(np.minimum(theta, 0.0))
    d = np.exp(-2.0 * np.maximum(theta, 0.0))
    f1 = np.where(big, 0.0, -kap * f)
    f2 = np.where(big, 0.0, kap**2 * f)
    d1 = np.where(big, 2.0 * kap * d, 0.0)
    d2 = np.where(big, 4.0 * kap**2 * d, 0.0)

    def outer(a, b):
        return a[..., :, None] * b[..., None, :]

    def diag(a):
        return a[..., :, None] * np.eye(len(kap))

    b0 = diag(d) + outer(f, f) * kmat
    b1 = diag(d1) + (outer(f1, f) + outer(f, f1)) * kmat
    b2 = diag(d2) + (outer(f2, f) + 2.0 * outer(f1, f1) + outer(f, f2)) * kmat
    return b0, b1, b2


def log_det_tau(data: ScatteringData, x, t: float):
    """log det A without forming A (valid for any theta)."""
    theta = _thetas(data, x, t)
    b0, _, _ = _scaled_system(data, theta)
    sign, logdet = np.linalg.slogdet(b0)
    out = 2.0 * np.maximum(theta, 0.0).sum(axis=-1) + logdet
    return out if np.ndim(out) else float(out)


def direct_field(data: ScatteringData, x, t: float):
    """u(x, t) by the trace identities
    (log det B)'' = tr(B^-1 B'') - tr((B^-1 B')^2), solves via Cholesky.
    """
    x = np.asarray(x, dtype=float)
    theta = _thetas(data, x, t)
    b0, b1, b2 = _scaled_system(data, theta)
    chol = np.linalg.cholesky(b0)
    # B^-1 Y = L^-T L^-1 Y
    linv = np.linalg.inv(chol)
    binv = np.swapaxes(linv, -1, -2) @ linv
    x1 = binv @ b1
    x2 = binv @ b2
    second = np.trace(x2, axis1=-2, axis2=-1) - np.einsum("...ij,...ji->...", x1, x1)
    out = -2.0 * second
    return out if out.ndim else float(out)


def phase_shift(data: ScatteringData, n: int) -> float:
    """chi_n = 1/2 sum_{m != n} sgn(k_n - k_m) log|(k_n - k_m)/(k_n + k_m)|."""
    kap = data.kappas
    if len(set(kap)) != len(kap):
        raise DegenerateSpectrumError(f"repeated kappa in {kap}")
    kn = kap[n]
    total = 0.0
    for m, km in enumerate(kap):
        if m != n:
            total += math.copysign(1.0, kn - km) * math.log(abs((kn - km) / (kn + km)))
    return 0.5 * total


def soliton_center(data: ScatteringData, n: int) -> float:
    """Mean asymptotic phase of soliton n (average over t -> +oo and t -> -oo).

    Zero when the collision is centered at the origin at t = 0, which holds
    for data extracted from even initial profiles.
    """
    kap = data.kappas
    kn = kap[n]
    total = math.log(data.normings[n] / math.sqrt(2.0 * kn))
    for m, km in enumerate(kap):
        if m != n:
            total += 0.5 * math.log(abs((kn - km) / (kn + km)))
    return total


def _sech2(a):
    e = np.exp(-2.0 * np.abs(a))
    return 4.0 * e / (1.0 + e) ** 2


def asymptotic_field(data: ScatteringData, x, t: float):
    """Train of separated solitons,
    -2 sum kappa_n^2 sech^2(kappa_n (x - 4 kappa_n^2 t) - center_n + sgn(t) chi_n).

    t = 0 is treated as the t -> +oo branch.
    """
    x = np.asarray(x, dtype=float)
    sgn = 1.0 if t >= 0 else -1.0
    out = np.zeros_like(x)
    for n, kn in enumerate(data.kappas):
        arg = kn * (x - 4.0 * kn**2 * t) - soliton_center(data, n) + sgn * phase_shift(data, n)
        out = out - 2.0 * kn**2 * _sech2(arg)
    return out if out.ndim else float(out)


def field(data: ScatteringData, x, t: float, window: float = DIRECT_WINDOW, fallback: bool = True):
    """u(x, t); points with any |theta_n| > window use asymptotic_field."""
    x = np.asarray(x, dtype=float)
    theta = _thetas(data, x, t)
    outside = np.abs(theta).max(axis=-1) > window
    if not np.any(outside):
        return direct_field(data, x, t)
    if not fallback:
        raise OutOfDirectWindowError(f"t={t} needs evaluation outside the direct window |theta| <= {window}")
    out = np.asarray(asymptotic_field(data, x, t), dtype=float)
    inside = ~outside
    if np.any(inside):
        if out.ndim:
            out[inside] = direct_field(data, x[inside], t)
        else:
            out = np.asarray(direct_field(data, x, t))
    return out if out.ndim else float(out)


class SolitonField:
    """Evaluatable exact solution u(x, t) for reflectionless data."""

    def __init__(self, data: ScatteringData, window: float = DIRECT_WINDOW, fallback: bool = True):
        if not data.reflectionless:
            raise ValueError("SolitonField needs reflectionless scattering data")
        if len(set(data.kappas)) != len(data.kappas):
            raise DegenerateSpectrumError(f"repeated kappa in {data.kappas}")
        self.data = data
        self.window = window
        self.fallback = fallback

    @classmethod
    def from_spec(cls, spec: DeformationSpec, **kwargs) -> "SolitonField":
        return cls(scattering_data(spec), **kwargs)

    def __call__(self, x, t: float = 0.0):
        return field(self.data, x, t, window=self.window, fallback=self.fallback)

    def phase_shifts(self) -> list[float]:
        return [phase_shift(self.data, n) for n in range(self.data.N)]
