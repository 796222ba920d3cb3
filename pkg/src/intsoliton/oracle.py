"""Independent numerical verifiers: finite-difference eigensolver, KdV
residual, pseudo-spectral KdV integrator and a shooting reflection extractor.

None of these use the Wronskian or tau-function machinery; they only see a
potential U(x) or samples of u(x, t).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh_tridiagonal


class MissingBoundStatesError(ArithmeticError):
    pass


class DomainTooSmallError(ValueError):
    pass


class BlowUpError(FloatingPointError):
    pass


class FitDegenerateError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Grid:
    half_width: float
    points: int
    periodic: bool = False

    def __post_init__(self):
        if self.points < 256:
            raise ValueError("grid needs at least 256 points")
        if self.periodic and self.points & (self.points - 1):
            raise ValueError("periodic grids need a power-of-two point count")

    @property
    def x(self) -> np.ndarray:
        L = self.half_width
        if self.periodic:
            return np.linspace(-L, L, self.points, endpoint=False)
        return np.linspace(-L, L, self.points)

    @property
    def dx(self) -> float:
        n = self.points if self.periodic else self.points - 1
        return 2.0 * self.half_width / n

    @property
    def wavenumbers(self) -> np.ndarray:
        """rfft wavenumbers for the periodic grid."""
        return 2.0 * np.pi * np.fft.rfftfreq(self.points, d=self.dx)

    def halved(self) -> "Grid":
        """Same domain, half the spacing."""
        if self.periodic:
            return Grid(self.half_width, 2 * self.points, True)
        return Grid(self.half_width, 2 * self.points - 1, False)


@dataclass
class VerificationReport:
    name: str
    errors: dict
    tolerance: float
    params: dict = field(default_factory=dict)
    note: str = ""

    @property
    def passed(self) -> bool:
        return all(math.isfinite(e) and e <= self.tolerance for e in self.errors.values())

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "tolerance": self.tolerance,
            "errors": {k: float(v) for k, v in self.errors.items()},
            "params": self.params,
            "note": self.note,
        }

    def line(self) -> str:
        worst = max(self.errors.values()) if self.errors else 0.0
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: max error {worst:.3e} (tol {self.tolerance:.1e})"


# ---------------------------------------------------------------- eigenvalues

def _hamiltonian_tridiagonal(potential: Callable, grid: Grid):
    if grid.periodic:
        raise ValueError("fd_spectrum needs a non-periodic grid with Dirichlet walls")
    x = grid.x[1:-1]
    h2 = grid.dx**2
    diag = 2.0 / h2 + np.asarray(potential(x), dtype=float)
    off = np.full(len(x) - 1, -1.0 / h2)
    return diag, off


def bound_state_count(potential: Callable, grid: Grid) -> int:
    diag, off = _hamiltonian_tridiagonal(potential, grid)
    vals = eigh_tridiagonal(diag, off, eigvals_only=True, select="v", select_range=(-np.inf, 0.0))
    return int(len(vals))


def fd_spectrum(potential: Callable, grid: Grid, count: int) -> np.ndarray:
    """Lowest ``count`` eigenvalues of -psi'' + U psi with walls at +-L,
    second-order central differences."""
    diag, off = _hamiltonian_tridiagonal(potential, grid)
    vals = eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(0, count - 1))
    if np.count_nonzero(vals < 0) < count:
        raise MissingBoundStatesError(
            f"asked for {count} bound states, found {np.count_nonzero(vals < 0)} negative eigenvalues"
        )
    return vals


# ---------------------------------------------------------------- PDE checks

def _spectral_derivatives(u: np.ndarray, grid: Grid):
    k = grid.wavenumbers
    uh = np.fft.rfft(u)
    ux = np.fft.irfft(1j * k * uh, n=grid.points)
    uxxx = np.fft.irfft((1j * k) ** 3 * uh, n=grid.points)
    return ux, uxxx


def kdv_residual(u: Callable, grid: Grid, t: float, dt: float = 1e-5) -> float:
    """max |u_t - 6 u u_x + u_xxx| on a periodic grid.

    u_t uses the five-point centered stencil in t; u_x and u_xxx are spectral.
    """
    if not grid.periodic:
        raise ValueError("kdv_residual needs a periodic grid")
    if dt > 1e-4:
        raise ValueError("dt must be <= 1e-4")
    L = grid.half_width
    edge = np.abs(np.asarray(u(np.array([-L, L]), t), dtype=float)).max()
    if edge > 1e-8:
        raise DomainTooSmallError(f"|u(+-L)| = {edge:.2e} is not negligible")
    x = grid.x
    up2, up1, um1, um2 = (np.asarray(u(x, t + s * dt), dtype=float) for s in (2, 1, -1, -2))
    ut = (-up2 + 8.0 * up1 - 8.0 * um1 + um2) / (12.0 * dt)
    u0 = np.asarray(u(x, t), dtype=float)
    ux, uxxx = _spectral_derivatives(u0, grid)
    return float(np.abs(ut - 6.0 * u0 * ux + uxxx).max())


def stable_dt(u0: np.ndarray, grid: Grid) -> float:
    """RK4 bound for the nonlinear advection term 3 (u^2)_x after the linear
    part is absorbed by the integrating factor."""
    kmax = np.pi / grid.dx
    umax = max(np.abs(u0).max(), 1e-12)
    return 2.8 / (6.0 * umax * (2.0 / 3.0) * kmax)


def spectral_evolve(u0: np.ndarray, grid: Grid, t_final: float, dt: Optional[float] = None) -> np.ndarray:
    """Integrate u_t = 6 u u_x - u_xxx on the periodic grid.

    Fourier in x, the dispersive term is removed exactly by the integrating
    factor exp(i k^3 t), classical RK4 on 3 i k FFT(u^2) with 2/3 dealiasing.
    """
    if not grid.periodic:
        raise ValueError("spectral_evolve needs a periodic grid")
    u0 = np.asarray(u0, dtype=float)
    if t_final == 0:
        return u0.copy()
    if dt is None:
        return _evolve_halving(u0, grid, t_final)
    steps = max(1, int(math.ceil(abs(t_final) / dt - 1e-9)))
    h = t_final / steps

    n = grid.points
    k = grid.wavenumbers
    mask = k < (2.0 / 3.0) * k.max()
    g = 3j * k * mask
    e_half = np.exp(1j * k**3 * h / 2)
    e_full = e_half * e_half

    def nonlinear(vh):
        w = np.fft.irfft(vh, n=n)
        return g * np.fft.rfft(w * w)

    uh = np.fft.rfft(u0)
    # overflow is reported as BlowUpError below, not as warnings
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(steps):
            a = h * nonlinear(uh)
            b = h * nonlinear(e_half * (uh + a / 2))
            c = h * nonlinear(e_half * uh + b / 2)
            d = h * nonlinear(e_full * uh + e_half * c)
            uh = e_full * uh + (e_full * a + 2 * e_half * (b + c) + d) / 6
            if step % 64 == 0 and not np.all(np.isfinite(uh)):
                raise BlowUpError("blow-up (reduce dt or increase N_g)")
        out = np.fft.irfft(uh, n=n)
    if not np.all(np.isfinite(out)):
        raise BlowUpError("blow-up (reduce dt or increase N_g)")
    return out


def _evolve_halving(u0, grid, t_final, rtol=1e-6, max_halvings=6):
    dt = stable_dt(u0, grid) / 4
    prev = spectral_evolve(u0, grid, t_final, dt)
    scale = max(np.abs(u0).max(), 1e-300)
    for _ in range(max_halvings):
        dt /= 2
        cur = spectral_evolve(u0, grid, t_final, dt)
        if np.abs(cur - prev).max() <= rtol * scale:
            return cur
        prev = cur
    return prev


# ---------------------------------------------------------------- reflection

def numeric_reflection(potential: Callable, k: float, grid: Grid) -> complex:
    """Shoot a pure transmitted wave e^{ikx} from +L back to -L and fit
    a e^{ikx} + b e^{-ikx} at two stations; returns b / a."""
    if k <= 0:
        raise ValueError("k must be positive")
    L = grid.half_width
    edge = np.abs(np.asarray(potential(np.array([-L, L])), dtype=float)).max()
    if edge >= 1e-12:
        raise DomainTooSmallError(f"|U(+-L)| = {edge:.2e} >= 1e-12")

    def rhs(x, y):
        return [y[1], (float(potential(x)) - k * k) * y[0]]

    y0 = [np.exp(1j * k * L), 1j * k * np.exp(1j * k * L)]
    x1, x2 = -L, -L + np.pi / (2 * k)
    sol = solve_ivp(rhs, (L, -L), y0, method="DOP853", rtol=1e-12, atol=1e-14,
                    t_eval=[x2, x1], max_step=0.25)
    if not sol.success:
        raise FitDegenerateError(sol.message)
    psi2, psi1 = sol.y[0]
    mat = np.array([[np.exp(1j * k * x1), np.exp(-1j * k * x1)],
                    [np.exp(1j * k * x2), np.exp(-1j * k * x2)]])
    a, b = np.linalg.solve(mat, [psi1, psi2])
    if abs(a) < 1e-12:
        raise FitDegenerateError("incoming amplitude vanishes")
    return complex(b / a)
