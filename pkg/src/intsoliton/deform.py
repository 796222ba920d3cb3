"""Soliton potential, its eigenfunctions, pseudo-virtual seed functions and
the multi-step Darboux-Crum deformation built from their Wronskian.

Every function handled here has the form cosh(x)**p * R(tanh x) with R a
polynomial. Differentiation keeps that form:

    d/dx [cosh^p R(t)] = cosh^p [p t R(t) + (1 - t^2) R'(t)],

so all derivatives are exact polynomial manipulations and the Wronskian of M
seeds factors as prod(cosh^p_j) * G(tanh x) with G a polynomial.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .specfun import JacobiParams, jacobi_polynomial

_ONE_MINUS_T2 = Polynomial([1.0, 0.0, -1.0])
_T = Polynomial([0.0, 1.0])


class LevelOutOfRangeError(ValueError):
    pass


class WronskianZeroError(ArithmeticError):
    pass


@dataclass(frozen=True)
class DeformationSpec:
    """Integer data (h; v_1 < ... < v_M) of a multi-indexed deformation.

    ``h`` may be non-integer only for potential/reflection work; the
    scattering and IST layers require an integer.
    """

    h: float
    v: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(int(j) for j in self.v))
        if self.h < 0:
            raise ValueError(f"h must be >= 0, got {self.h}")
        if any(j < 0 for j in self.v):
            raise ValueError(f"seed indices must be >= 0, got {self.v}")
        if any(b <= a for a, b in zip(self.v, self.v[1:])):
            raise ValueError(f"seed indices must be strictly increasing, got {self.v}")
        if float(self.h).is_integer():
            object.__setattr__(self, "h", int(self.h))

    @property
    def M(self) -> int:
        return len(self.v)

    @property
    def integer_h(self) -> bool:
        return isinstance(self.h, int)

    @property
    def N(self) -> int:
        if not self.integer_h:
            raise ValueError("soliton count is defined for integer h only")
        return self.h + self.M

    def label(self) -> str:
        return f"h={self.h}, v=[{','.join(map(str, self.v))}]"


@dataclass(frozen=True)
class CoshPoly:
    """cosh(x)**power * poly(tanh x)."""

    power: float
    poly: Polynomial

    def derivative(self) -> "CoshPoly":
        p = self.power
        return CoshPoly(p, p * _T * self.poly + _ONE_MINUS_T2 * self.poly.deriv())

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.cosh(x) ** self.power * self.poly(np.tanh(x))


@functools.lru_cache(maxsize=None)
def _derivative_chain(power: float, degree: int, a: float, order: int) -> tuple[CoshPoly, ...]:
    f = CoshPoly(power, jacobi_polynomial(JacobiParams(degree, a, a)))
    chain = [f]
    for _ in range(order):
        chain.append(chain[-1].derivative())
    return tuple(chain)


def _seed_chain(h: float, v: int, order: int) -> tuple[CoshPoly, ...]:
    alpha = h + 1 + v
    return _derivative_chain(float(alpha), int(v), float(-alpha), int(order))


def _eigen_chain(h: float, n: int, order: int) -> tuple[CoshPoly, ...]:
    kappa = h - n
    return _derivative_chain(float(-kappa), int(n), float(kappa), int(order))


def _check_level(h, n):
    if n < 0 or n >= h:
        raise LevelOutOfRangeError(f"level {n} out of range for h={h}")


def soliton_potential(h: float, x):
    """-h(h+1) sech^2 x."""
    x = np.asarray(x, dtype=float)
    out = -h * (h + 1) / np.cosh(x) ** 2
    return out if out.ndim else float(out)


def eigenfunction(h: float, n: int, x, deriv_order: int = 0):
    """Unnormalized bound state cosh^{-(h-n)} P_n^{(h-n,h-n)}(tanh x) or its derivative."""
    _check_level(h, n)
    if deriv_order not in (0, 1, 2):
        raise ValueError("deriv_order must be 0, 1 or 2")
    out = _eigen_chain(h, n, deriv_order)[deriv_order](x)
    return out if np.ndim(out) else float(out)


def eigen_energy(h: float, n: int) -> float:
    _check_level(h, n)
    return -float(h - n) ** 2


def seed_function(h: float, v: int, x, deriv_order: int = 0):
    """Pseudo-virtual seed cosh^{h+1+v} P_v^{(-h-1-v,-h-1-v)}(tanh x) or a derivative."""
    if v < 0:
        raise ValueError("v must be >= 0")
    out = _seed_chain(h, v, deriv_order)[deriv_order](x)
    return out if np.ndim(out) else float(out)


def seed_energy(h: float, v: int) -> float:
    return -float(h + 1 + v) ** 2


def _poly_det(rows: Sequence[Sequence[Polynomial]]) -> Polynomial:
    m = len(rows)
    total = Polynomial([0.0])
    for perm in itertools.permutations(range(m)):
        inversions = sum(1 for i, j in itertools.combinations(range(m), 2) if perm[i] > perm[j])
        term = Polynomial([-1.0 if inversions % 2 else 1.0])
        for r, c in enumerate(perm):
            term = term * rows[r][c]
        total = total + term
    return total.trim()


@dataclass(frozen=True)
class WronskianForm:
    """W[f_1..f_M](x) = cosh(x)**power * poly(tanh x), exact."""

    power: float
    poly: Polynomial

    def __call__(self, x):
        return CoshPoly(self.power, self.poly)(x)


def _wronskian_form(chains: Sequence[tuple[CoshPoly, ...]]) -> WronskianForm:
    m = len(chains)
    # derivatives of cosh^p R keep the same power, so column scaling factors out
    rows = [[chains[j][k].poly for j in range(m)] for k in range(m)]
    return WronskianForm(sum(ch[0].power for ch in chains), _poly_det(rows) if m else Polynomial([1.0]))


@functools.lru_cache(maxsize=None)
def seed_wronskian_form(h: float, v: tuple[int, ...]) -> WronskianForm:
    m = len(v)
    return _wronskian_form([_seed_chain(h, j, m) for j in v])


def wronskian(h: float, v: Sequence[int], x, extra_derivs: int = 0):
    """W[phi_v1, ..., phi_vM](x), or its first/second x-derivative.

    Derivatives follow the row-replacement rule: raising the derivative order
    of the last row gives W', and W'' is the sum of the two determinants with
    orders (0..M-3, M-1, M) and (0..M-2, M+1).
    """
    v = tuple(int(j) for j in v)
    if not v:
        raise ValueError("at least one seed index is required")
    if extra_derivs not in (0, 1, 2):
        raise ValueError("extra_derivs must be 0, 1 or 2")
    m = len(v)
    chains = [_seed_chain(h, j, m + 1) for j in v]
    x = np.asarray(x, dtype=float)

    base = list(range(m))
    if extra_derivs == 0:
        order_sets = [base]
    elif extra_derivs == 1:
        order_sets = [base[:-1] + [m]]
    else:
        order_sets = [base[:-1] + [m + 1]]
        if m >= 2:
            order_sets.append(base[:-2] + [m - 1, m])

    total = np.zeros_like(x)
    for orders in order_sets:
        mat = np.empty(x.shape + (m, m))
        for r, k in enumerate(orders):
            for c, ch in enumerate(chains):
                mat[..., r, c] = ch[k](x)
        total = total + np.linalg.det(mat)
    return total if total.ndim else float(total)


def deformed_potential(spec: DeformationSpec, x):
    """U(x) - 2 (log|W|)'' evaluated in the tanh variable.

    With s = sech^2 x, t = tanh x and W = cosh^A G(t):
        -2 (log W)'' = s [-2A + 4 t G'/G - 2 s (G''/G - (G'/G)^2)],
    which keeps the |x| -> oo decay explicit instead of cancelling O(A^2) terms.
    """
    x = np.asarray(x, dtype=float)
    if not spec.v:
        return soliton_potential(spec.h, x)
    form = seed_wronskian_form(spec.h, spec.v)
    t = np.tanh(x)
    s = 1.0 / np.cosh(x) ** 2
    g = form.poly(t)
    if np.any(np.abs(g) < 1e-300):
        bad = np.atleast_1d(x)[np.abs(np.atleast_1d(g)) < 1e-300][0]
        raise WronskianZeroError(f"Wronskian zero at x={bad:g} for {spec.label()}")
    g1 = form.poly.deriv()(t) / g
    g2 = form.poly.deriv(2)(t) / g
    h = spec.h
    out = s * (-h * (h + 1) - 2 * form.power + 4 * t * g1 - 2 * s * (g2 - g1 * g1))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class PotentialModel:
    """Evaluatable potential U(x) with provenance."""

    h: float
    v: tuple[int, ...] = ()
    closed_form: Optional[Callable] = field(default=None, compare=False, repr=False)

    @property
    def spec(self) -> DeformationSpec:
        return DeformationSpec(self.h, self.v)

    @property
    def provenance(self) -> str:
        return "deformed" if self.v else "undeformed"

    def __call__(self, x):
        return deformed_potential(self.spec, x)


def potential_model(spec: DeformationSpec) -> PotentialModel:
    return PotentialModel(spec.h, spec.v)


@dataclass(frozen=True)
class NodelessReport:
    spec: DeformationSpec
    admissible: bool
    node_bracket: Optional[tuple[float, float]]
    min_ratio: float
    half_width: float
    samples: int

    def to_dict(self) -> dict:
        return {
            "h": self.spec.h,
            "v": list(self.spec.v),
            "admissible": self.admissible,
            "node_bracket": list(self.node_bracket) if self.node_bracket else None,
            "min_ratio": self.min_ratio,
            "half_width": self.half_width,
            "samples": self.samples,
        }

    def describe(self) -> str:
        if self.admissible:
            return f"{self.spec.label()}: admissible (nodeless Wronskian)"
        lo, hi = self.node_bracket
        return f"{self.spec.label()}: inadmissible, node bracketing x in [{lo:.6g}, {hi:.6g}]"


def _nearest_peak(a: np.ndarray, i: int) -> float:
    lo = i
    while lo > 0 and a[lo - 1] >= a[lo]:
        lo -= 1
    hi = i
    while hi < len(a) - 1 and a[hi + 1] >= a[hi]:
        hi += 1
    return max(a[lo], a[hi])


def check_nodeless(spec: DeformationSpec, half_width: float = 25.0, samples: int = 20001) -> NodelessReport:
    """Scan the seed Wronskian for real zeros.

    The scaled Wronskian G(tanh x) shares the sign of W and stays O(1) as
    |x| grows, so it is what gets sampled.
    """
    if half_width < 20 or samples < 4001:
        raise ValueError("check_nodeless needs half_width >= 20 and samples >= 4001")
    if not spec.v:
        return NodelessReport(spec, True, None, 1.0, half_width, samples)
    x = np.linspace(-half_width, half_width, samples)
    if samples % 2 == 0:
        x = np.sort(np.append(x, 0.0))
    form = seed_wronskian_form(spec.h, spec.v)
    g = form.poly(np.tanh(x))
    absg = np.abs(g)
    bracket = None

    zero = np.flatnonzero(g == 0.0)
    change = np.flatnonzero(g[:-1] * g[1:] < 0)
    candidates = []
    if zero.size:
        i = zero[0]
        candidates.append((x[max(i - 1, 0)], x[min(i + 1, len(x) - 1)]))
    if change.size:
        i = change[0]
        candidates.append((x[i], x[i + 1]))
    if candidates:
        bracket = min(candidates)

    i_min = int(np.argmin(absg))
    ratio = float(absg[i_min] / max(1.0, _nearest_peak(absg, i_min)))
    admissible = bracket is None and ratio > 1e-8
    if bracket is None and not admissible:
        bracket = (x[max(i_min - 1, 0)], x[min(i_min + 1, len(x) - 1)])
    if bracket is not None:
        bracket = (float(bracket[0]), float(bracket[1]))
    return NodelessReport(spec, admissible, bracket, ratio, half_width, samples)
