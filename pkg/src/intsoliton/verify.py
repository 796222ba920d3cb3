"""Verification suite over the fixture deformations.

Each check returns a list of VerificationReport; ``run_suite`` drives them.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from scipy.optimize import minimize_scalar

from . import closed_forms
from .deform import DeformationSpec, check_nodeless, deformed_potential, potential_model, soliton_potential
from .ist import SolitonField, asymptotic_field, direct_field, phase_shift
from .oracle import (
    Grid,
    VerificationReport,
    bound_state_count,
    fd_spectrum,
    kdv_residual,
    numeric_reflection,
    spectral_evolve,
)
from .scatter import ScatteringData, one_step_v2_normings, reflection_amplitude, scattering_data

FIXTURES = (
    DeformationSpec(1, (2,)),
    DeformationSpec(2, (2,)),
    DeformationSpec(1, (2, 5)),
    DeformationSpec(0, (2, 5)),
)
UNDEFORMED = (DeformationSpec(1), DeformationSpec(2))


def _spec_params(spec: DeformationSpec) -> dict:
    return {"h": spec.h, "v": list(spec.v)}


def check_profile(tol_scale: float = 1.0) -> list[VerificationReport]:
    spec = DeformationSpec(1, (2,))
    x = np.linspace(-10, 10, 4001)
    err = float(np.abs(deformed_potential(spec, x) - closed_forms.u2_h1(x)).max())
    gap = deformed_potential(spec, 0.0) - soliton_potential(1, 0.0)
    return [
        VerificationReport("profile: (1,[2]) matches the closed rational form on [-10,10]",
                           {"max_abs": err}, 1e-10 * tol_scale, _spec_params(spec)),
        VerificationReport("profile: U2(0) - U(0) = -28",
                           {"abs": abs(gap + 28.0)}, 1e-10 * tol_scale, _spec_params(spec)),
    ]


def check_scattering(tol_scale: float = 1.0) -> list[VerificationReport]:
    tol = 1e-7 * tol_scale
    d = scattering_data(DeformationSpec(1, (2,)))
    ref_c = (math.sqrt(10 / 3), math.sqrt(40 / 3))
    reports = [
        VerificationReport("scatter: (1,[2]) kappas = (1,4)",
                           {"max_abs": max(abs(a - b) for a, b in zip(d.kappas, (1, 4)))}, tol, {"h": 1, "v": [2]}),
        VerificationReport("scatter: (1,[2]) norming constants sqrt(10/3), sqrt(40/3)",
                           {f"c{n}_rel": abs(c / r - 1) for n, (c, r) in enumerate(zip(d.normings, ref_c))},
                           tol, {"h": 1, "v": [2]}),
    ]
    for h in (1, 2, 3, 4):
        d = scattering_data(DeformationSpec(h, (2,)))
        ref = one_step_v2_normings(h)
        errs = {f"c{n}_rel": abs(c / r - 1) for n, (c, r) in enumerate(zip(d.normings, ref))}
        errs["kappa_abs"] = max(abs(a - b) for a, b in zip(d.kappas, list(range(1, h + 1)) + [h + 3]))
        reports.append(VerificationReport(f"scatter: closed-form c_n(0) for (h={h}, v=[2])", errs, tol, {"h": h, "v": [2]}))
    return reports


def check_solution(tol_scale: float = 1.0) -> list[VerificationReport]:
    x = np.linspace(-6, 6, 241)
    ts = np.linspace(-0.05, 0.05, 41)
    reports = []
    for spec, gold, centre in (
        (DeformationSpec(1, (2,)), closed_forms.u_14, -30.0),
        (DeformationSpec(2, (2,)), closed_forms.u_125, -44.0),
    ):
        f = SolitonField.from_spec(spec)
        rel = max(float(np.abs(f(x, t) / gold(x, t) - 1).max()) for t in ts)
        reports.append(VerificationReport(
            f"solution: kappa={tuple(int(k) for k in f.data.kappas)} matches closed-form u(x,t) on [-6,6]x[-0.05,0.05]",
            {"max_rel": rel}, 1e-9 * tol_scale, _spec_params(spec)))
        reports.append(VerificationReport(
            f"solution: u(0,0) = {centre:g}", {"abs": abs(f(0.0, 0.0) - centre)}, 1e-9 * tol_scale, _spec_params(spec)))
    return reports


def check_initial_profile(tol_scale: float = 1.0) -> list[VerificationReport]:
    x = np.linspace(-12, 12, 4801)
    reports = []
    for spec in FIXTURES:
        f = SolitonField.from_spec(spec)
        err = float(np.abs(f(x, 0.0) - deformed_potential(spec, x)).max())
        reports.append(VerificationReport(f"initial profile: u(x,0) = deformed potential for {spec.label()}",
                                          {"max_abs": err}, 1e-8 * tol_scale, _spec_params(spec)))
    return reports


def check_eigen(tol_scale: float = 1.0) -> list[VerificationReport]:
    grid = Grid(20.0, 8000)
    reports = []
    for spec in FIXTURES + UNDEFORMED:
        pot = potential_model(spec)
        kappas = sorted(scattering_data(spec).kappas, reverse=True)
        count = bound_state_count(pot, grid)
        errs = {"count_mismatch": float(abs(count - spec.N))}
        if count >= spec.N:
            vals = fd_spectrum(pot, grid, spec.N)
            errs.update({f"E{n}_abs": abs(e + k * k) for n, (e, k) in enumerate(zip(vals, kappas))})
        reports.append(VerificationReport(f"eigen: finite-difference spectrum of {spec.label()}", errs,
                                          5e-3 * tol_scale, {**_spec_params(spec), "L": 20, "points": 8000}))
    # grid halving on the h=1 fixture
    pot = potential_model(DeformationSpec(1))
    coarse = Grid(20.0, 4000)
    e_coarse = abs(fd_spectrum(pot, coarse, 1)[0] + 1.0)
    e_fine = abs(fd_spectrum(pot, coarse.halved(), 1)[0] + 1.0)
    ratio = e_coarse / e_fine
    reports.append(VerificationReport("eigen: second-order convergence under grid halving (ratio ~ 4)",
                                      {"ratio_minus_4": abs(ratio - 4.0)}, 0.5 * tol_scale,
                                      {"h": 1, "ratio": ratio}))
    return reports


def check_reflection(tol_scale: float = 1.0) -> list[VerificationReport]:
    grid = Grid(20.0, 8000)
    ks = (0.5, 1.0, 2.0)
    reports = []
    for spec in FIXTURES + UNDEFORMED:
        pot = potential_model(spec)
        errs = {f"|r({k})|": abs(numeric_reflection(pot, k, grid)) for k in ks}
        reports.append(VerificationReport(f"reflection: {spec.label()} is reflectionless", errs,
                                          1e-4 * tol_scale, _spec_params(spec)))
    half = DeformationSpec(0.5)
    half_def = DeformationSpec(0.5, (2,))
    r_num = numeric_reflection(potential_model(half), 1.0, grid)
    r_cf = reflection_amplitude(0.5, (), 1.0)
    reports.append(VerificationReport("reflection: h=0.5 numeric |r(1)| matches Gamma-function form",
                                      {"abs": abs(abs(r_num) - abs(r_cf))}, 1e-4 * tol_scale,
                                      {"h": 0.5, "numeric": abs(r_num), "closed_form": abs(r_cf)}))
    r_def_cf = reflection_amplitude(0.5, (2,), 1.0)
    r_def_num = numeric_reflection(potential_model(half_def), 1.0, grid)
    reports.append(VerificationReport("reflection: deformation factors are unimodular (h=0.5, v=[2])",
                                      {"closed_form": abs(abs(r_def_cf) - abs(r_cf)),
                                       "numeric": abs(abs(r_def_num) - abs(r_num))},
                                      1e-6 * tol_scale, {"h": 0.5, "v": [2], "k": 1.0}))
    return reports


def check_pde(tol_scale: float = 1.0) -> list[VerificationReport]:
    spec = DeformationSpec(1, (2,))
    f = SolitonField.from_spec(spec)
    grid = Grid(30.0, 4096, periodic=True)
    u0 = f(grid.x, 0.0)
    u = spectral_evolve(u0, grid, 0.05)
    ref = f(grid.x, 0.05)
    rel = float(np.abs(u - ref).max() / np.abs(ref).max())
    reports = [VerificationReport("pde: pseudo-spectral evolution of (1,[2]) to t=0.05 matches u(x,0.05)",
                                  {"max_rel": rel}, 1e-3 * tol_scale, {**_spec_params(spec), "L": 30, "points": 4096})]
    res = {f"t={t}": kdv_residual(f, grid, t) for t in (0.0, 0.02)}
    reports.append(VerificationReport("pde: KdV residual of u(x,t) for (1,[2])", res, 1e-5 * tol_scale,
                                      _spec_params(spec)))
    return reports


def crest(data: ScatteringData, n: int, t: float, guess: float | None = None, width: float = 1.0) -> tuple[float, float]:
    """Location and height of soliton n's crest, from direct evaluation."""
    k = data.kappas[n]
    if guess is None:
        guess = 4 * k * k * t
    res = minimize_scalar(lambda x: float(direct_field(data, x, t)), bounds=(guess - width, guess + width),
                          method="bounded", options={"xatol": 1e-11})
    return float(res.x), float(res.fun)


def check_asymptotics(tol_scale: float = 1.0) -> list[VerificationReport]:
    data = scattering_data(DeformationSpec(1, (2,)))
    reports = []
    agree = {}
    for t in (-3.0, 3.0):
        for n, k in enumerate(data.kappas):
            xc, _ = crest(data, n, t)
            agree[f"t={t:g},kappa={k:g}"] = abs(direct_field(data, xc, t) - asymptotic_field(data, xc, t))
    reports.append(VerificationReport("asymptotics: direct and asymptotic field agree at crests, |t|=3",
                                      agree, 1e-6 * tol_scale, {"kappas": list(data.kappas)}))
    k0 = data.kappas[0]
    xp, _ = crest(data, 0, 3.0)
    xm, _ = crest(data, 0, -3.0)
    shift = abs((xp - 4 * k0**2 * 3.0) - (xm + 4 * k0**2 * 3.0))
    reports.append(VerificationReport("asymptotics: slow-soliton displacement equals 2 chi_0 / kappa_0 = ln(5/3)",
                                      {"abs": abs(shift - math.log(5 / 3)),
                                       "formula_abs": abs(2 * phase_shift(data, 0) / k0 - math.log(5 / 3))},
                                      1e-4 * tol_scale, {"measured": shift}))

    scaled = ScatteringData(data.kappas, (10 * data.normings[0],) + data.normings[1:], data.h, data.v)
    errs = {}
    for n, k in enumerate(data.kappas):
        for label, d in (("orig", data), ("scaled", scaled)):
            guess = 4 * k * k * 2.0 + (math.log(10) / k if (label == "scaled" and n == 0) else 0.0)
            x2, h2 = crest(d, n, 2.0, guess)
            x3, h3 = crest(d, n, 3.0, guess + 4 * k * k)
            errs[f"{label}_height_{n}"] = max(abs(h2 + 2 * k * k), abs(h3 + 2 * k * k))
            errs[f"{label}_speed_{n}"] = abs((x3 - x2) - 4 * k * k)
    reports.append(VerificationReport("asymptotics: heights and speeds independent of c_0(0) (x10 scaling)",
                                      errs, 1e-6 * tol_scale, {"kappas": list(data.kappas)}))
    return reports


def check_admissibility(tol_scale: float = 1.0) -> list[VerificationReport]:
    cases = [
        (DeformationSpec(1, (1,)), False),
        (DeformationSpec(2, (2,)), True),
        (DeformationSpec(2, (4,)), True),
        (DeformationSpec(2, (6,)), True),
        (DeformationSpec(1, (2, 5)), True),
        (DeformationSpec(1, (2, 7)), True),
        (DeformationSpec(1, (2, 4)), False),
    ]
    errs = {}
    for spec, expected in cases:
        rep = check_nodeless(spec)
        errs[spec.label()] = 0.0 if rep.admissible == expected else 1.0
    node = check_nodeless(DeformationSpec(1, (1,))).node_bracket
    errs["v=1 node brackets x=0"] = 0.0 if node and node[0] <= 0.0 <= node[1] else 1.0
    return [VerificationReport("admissibility: fixture verdicts", errs, 0.0)]


CHECKS = {
    "profile": check_profile,
    "scatter": check_scattering,
    "solution": check_solution,
    "initial": check_initial_profile,
    "eigen": check_eigen,
    "reflection": check_reflection,
    "pde": check_pde,
    "asymptotics": check_asymptotics,
    "admissibility": check_admissibility,
}


def _run_one(name: str, tol_scale: float) -> list[VerificationReport]:
    return CHECKS[name](tol_scale)


def run_suite(only=None, tol_scale: float = 1.0, jobs: int = 1) -> list[VerificationReport]:
    names = list(CHECKS) if not only else list(only)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {unknown}; choose from {list(CHECKS)}")
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_one, names, [tol_scale] * len(names)))
    else:
        chunks = [_run_one(n, tol_scale) for n in names]
    return [r for chunk in chunks for r in chunk]
