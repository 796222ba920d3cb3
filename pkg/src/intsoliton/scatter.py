"""Scattering data of deformed soliton potentials: discrete spectrum, bound
states, norming constants and the reflection amplitude."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.integrate import simpson

from .deform import (
    DeformationSpec,
    WronskianZeroError,
    _eigen_chain,
    _seed_chain,
    _wronskian_form,
    check_nodeless,
    seed_wronskian_form,
)
from .specfun import GammaPoleError, log_gamma


class InadmissibleSpecError(ValueError):
    pass


class TailNotAsymptoticError(ArithmeticError):
    pass


class NormalizationDivergesError(ArithmeticError):
    pass


class ThresholdError(ValueError):
    pass


class Level(NamedTuple):
    kappa: int
    origin: str  # "original" | "added"
    index: int  # n for original levels, seed v_j for added ones


@dataclass(frozen=True)
class ScatteringData:
    kappas: tuple[float, ...]
    normings: tuple[float, ...]
    h: float | None = None
    v: tuple[int, ...] = ()
    reflectionless: bool = True

    def __post_init__(self):
        object.__setattr__(self, "kappas", tuple(float(k) for k in self.kappas))
        object.__setattr__(self, "normings", tuple(float(c) for c in self.normings))
        object.__setattr__(self, "v", tuple(int(j) for j in self.v))
        if len(self.kappas) != len(self.normings):
            raise ValueError("kappas and normings differ in length")
        if any(k <= 0 for k in self.kappas) or any(c <= 0 for c in self.normings):
            raise ValueError("kappas and normings must be positive")

    @property
    def N(self) -> int:
        return len(self.kappas)

    def to_dict(self) -> dict:
        return {
            "h": self.h,
            "v": list(self.v),
            "kappas": list(self.kappas),
            "normings": list(self.normings),
            "reflectionless": self.reflectionless,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ScatteringData":
        return cls(
            kappas=tuple(d["kappas"]),
            normings=tuple(d["normings"]),
            h=d.get("h"),
            v=tuple(d.get("v", ())),
            reflectionless=bool(d.get("reflectionless", True)),
        )


def spectrum(spec: DeformationSpec) -> list[Level]:
    """Bound-state wavenumbers, ascending in kappa (deepest level last)."""
    if not spec.integer_h:
        raise ValueError("spectrum requires integer h")
    h = spec.h
    levels = [Level(h - n, "original", n) for n in range(h)]
    levels += [Level(h + 1 + vj, "added", vj) for vj in spec.v]
    levels.sort(key=lambda lv: lv.kappa)
    kappas = [lv.kappa for lv in levels]
    assert len(set(kappas)) == len(kappas), f"duplicate kappa in {kappas}"
    return levels


@dataclass(frozen=True)
class _BoundStateForm:
    kappa: int
    numerator: object  # Polynomial in t
    denominator: object

    def ratio(self, x):
        t = np.tanh(np.asarray(x, dtype=float))
        den = self.denominator(t)
        if np.any(np.abs(den) < 1e-300):
            raise WronskianZeroError("Wronskian zero in bound-state denominator")
        return self.numerator(t) / den

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.cosh(x) ** (-self.kappa) * self.ratio(x)

    def tail(self, x):
        """psi(x) * exp(kappa x), using cosh^-k e^{kx} = (2 / (1 + e^{-2x}))^k."""
        x = np.asarray(x, dtype=float)
        return (2.0 / (1.0 + np.exp(-2.0 * x))) ** self.kappa * self.ratio(x)


def _bound_state_form(spec: DeformationSpec, level: Level) -> _BoundStateForm:
    m = spec.M
    den = seed_wronskian_form(spec.h, spec.v).poly
    if level.origin == "original":
        chains = [_seed_chain(spec.h, j, m) for j in spec.v] + [_eigen_chain(spec.h, level.index, m)]
    else:
        chains = [_seed_chain(spec.h, j, m) for j in spec.v if j != level.index]
    num = _wronskian_form(chains).poly
    return _BoundStateForm(level.kappa, num, den)


def _resolve_level(spec: DeformationSpec, level) -> Level:
    if isinstance(level, Level):
        return level
    levels = spectrum(spec)
    if not 0 <= level < len(levels):
        raise IndexError(f"level {level} out of range for {spec.label()}")
    return levels[level]


def bound_state(spec: DeformationSpec, level, x):
    """Unnormalized bound state of the deformed potential.

    ``level`` is an index into ``spectrum(spec)`` or a Level. Original
    levels use W[seeds, phi_n] / W[seeds]; the level added by seed v_j uses
    the Wronskian with phi_{v_j} deleted over W[seeds].
    """
    form = _bound_state_form(spec, _resolve_level(spec, level))
    out = form(x)
    return out if np.ndim(out) else float(out)


NORM_HALF_WIDTH = 30.0
TAIL_STATIONS = (18.0, 22.0)


def _normalization(form: _BoundStateForm, half_width: float = NORM_HALF_WIDTH, rtol: float = 1e-11) -> float:
    edge = abs(form(np.array([-half_width, half_width]))).max()
    prev = None
    n = 2048
    while n <= 2**21:
        x = np.linspace(-half_width, half_width, n + 1)
        val = float(simpson(form(x) ** 2, x=x))
        if not math.isfinite(val):
            break
        if prev is not None and abs(val - prev) <= rtol * abs(val):
            peak = abs(form(x)).max()
            if edge > 1e-10 * peak:
                break
            return val
        prev = val
        n *= 2
    raise NormalizationDivergesError("normalization integral did not converge")


def norming_constant(spec: DeformationSpec, level) -> float:
    form = _bound_state_form(spec, _resolve_level(spec, level))
    norm = _normalization(form)
    a, b = (abs(float(form.tail(x0))) for x0 in TAIL_STATIONS)
    if abs(a - b) > 1e-6 * max(a, b):
        raise TailNotAsymptoticError(f"tail stations disagree: {a!r} vs {b!r}")
    return b / math.sqrt(norm)


def normalized_bound_state(spec: DeformationSpec, level, x):
    """Unit-norm bound state, sign fixed so the x -> +oo tail is positive."""
    form = _bound_state_form(spec, _resolve_level(spec, level))
    scale = math.copysign(1.0 / math.sqrt(_normalization(form)), float(form.tail(TAIL_STATIONS[-1])))
    out = scale * form(x)
    return out if np.ndim(out) else float(out)


def norming_constants(spec: DeformationSpec) -> ScatteringData:
    """kappa_n and c_n(0) from quadrature normalization and a tail fit."""
    levels = spectrum(spec)
    return ScatteringData(
        kappas=tuple(lv.kappa for lv in levels),
        normings=tuple(norming_constant(spec, lv) for lv in levels),
        h=spec.h,
        v=spec.v,
        reflectionless=True,
    )


def scattering_data(spec: DeformationSpec) -> ScatteringData:
    if not spec.integer_h:
        raise ValueError(f"non-integer h={spec.h}: the potential is not reflectionless")
    report = check_nodeless(spec)
    if not report.admissible:
        raise InadmissibleSpecError(report.describe())
    return norming_constants(spec)


def reflection_amplitude(h: float, v: Sequence[int], k: float) -> complex:
    """Reflection amplitude of the deformed potential at real k != 0.

    Integer h puts a pole of Gamma(-h) in the denominator, so the amplitude
    is returned as exactly zero.
    """
    if k == 0:
        raise ThresholdError("reflection amplitude evaluated at threshold k=0")
    try:
        denom = log_gamma(-h)
    except GammaPoleError:
        return 0j
    lg = log_gamma(1 + h - 1j * k) + log_gamma(-h - 1j * k) + log_gamma(1j * k)
    lg -= denom + log_gamma(1 + h) + log_gamma(-1j * k)
    r = cmath.exp(lg)
    for j, vj in enumerate(v, start=1):
        a = h + vj + 1
        r *= (-1) ** j * (k + 1j * a) / (k - 1j * a)
    return r


# closed forms, used only as cross-checks of the quadrature path

def undeformed_normings(h: int) -> tuple[float, ...]:
    """c_n(0) of -h(h+1)sech^2 x, ordered ascending in kappa = h - n."""
    cs = [
        math.sqrt((h - n) * math.factorial(2 * h - n) / math.factorial(n)) / math.factorial(h - n)
        for n in range(h)
    ]
    return tuple(reversed(cs))


def one_step_v2_normings(h: int) -> tuple[float, ...]:
    """c_n(0) for the (h, v=[2]) deformation, ascending in kappa."""
    cs = [
        math.sqrt((h - n) * (2 * h - n + 3) * math.factorial(2 * h - n) / ((n + 3) * math.factorial(n)))
        / math.factorial(h - n)
        for n in range(h)
    ]
    top = 2 ** (h + 2) / (h + 2) * math.sqrt(2 * math.gamma(h + 2.5) / (math.sqrt(math.pi) * math.gamma(h + 2)))
    return tuple(reversed(cs)) + (top,)


def one_step_norm_squared(h: int, n: int, v: int = 2) -> float:
    """B_n (E_n - E_seed): squared norm of phi_n' - (phi_v'/phi_v) phi_n."""
    b = 2 ** (2 * (h - n)) * math.gamma(h + 1) ** 2 / (math.factorial(n) * (h - n) * math.gamma(2 * h - n + 1))
    return b * (-(h - n) ** 2 + (h + 1 + v) ** 2)
