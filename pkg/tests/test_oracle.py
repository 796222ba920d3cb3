import math

import numpy as np
import pytest

from intsoliton.deform import DeformationSpec, potential_model, soliton_potential
from intsoliton.ist import field
from intsoliton.oracle import (
    BlowUpError,
    DomainTooSmallError,
    Grid,
    MissingBoundStatesError,
    VerificationReport,
    bound_state_count,
    fd_spectrum,
    kdv_residual,
    numeric_reflection,
    spectral_evolve,
    stable_dt,
)
from intsoliton.scatter import ScatteringData, reflection_amplitude

D14 = ScatteringData((1, 4), (math.sqrt(10 / 3), math.sqrt(40 / 3)))
EIG = Grid(20, 8001)


def one_soliton(x, t):
    return -2 / np.cosh(x - 4 * t) ** 2


def test_grid():
    g = Grid(30, 4096, True)
    assert len(g.x) == 4096 and g.x[0] == -30 and g.x[-1] < 30
    assert g.dx == pytest.approx(60 / 4096)
    assert g.halved().points == 8192
    assert Grid(20, 8001).dx == pytest.approx(40 / 8000)
    assert Grid(20, 8001).halved().dx == pytest.approx(Grid(20, 8001).dx / 2)
    with pytest.raises(ValueError):
        Grid(10, 100)
    with pytest.raises(ValueError):
        Grid(10, 1000, True)


def test_report():
    r = VerificationReport("x", {"a": 1e-9, "b": 2e-9}, 1e-8)
    assert r.passed
    assert "PASS" in r.line() and "2.000e-09" in r.line()
    assert not VerificationReport("x", {"a": float("nan")}, 1.0).passed
    bad = VerificationReport("y", {"a": 2.0}, 1.0, params={"h": 1})
    assert not bad.passed and "FAIL" in bad.line()
    d = bad.to_dict()
    assert d["passed"] is False and d["params"] == {"h": 1} and d["errors"] == {"a": 2.0}


@pytest.mark.parametrize(
    "h,v,expected,tol",
    [(1, (2,), (-16, -1), 2e-3), (1, (), (-1,), 2e-3), (2, (2,), (-25, -4, -1), 5e-3)],
)
def test_fd_spectrum_examples(h, v, expected, tol):
    pot = potential_model(DeformationSpec(h, v))
    vals = fd_spectrum(pot, EIG, len(expected))
    np.testing.assert_allclose(vals, expected, atol=tol)
    assert bound_state_count(pot, EIG) == len(expected)


def test_fd_spectrum_second_order():
    pot = lambda x: soliton_potential(1, x)
    e1 = abs(fd_spectrum(pot, Grid(20, 2001), 1)[0] + 1)
    e2 = abs(fd_spectrum(pot, Grid(20, 2001).halved(), 1)[0] + 1)
    assert e1 / e2 == pytest.approx(4.0, abs=0.05)


def test_fd_spectrum_errors():
    with pytest.raises(MissingBoundStatesError):
        fd_spectrum(lambda x: soliton_potential(1, x), EIG, 2)
    with pytest.raises(ValueError):
        fd_spectrum(lambda x: soliton_potential(1, x), Grid(20, 1024, True), 1)


def test_kdv_residual_examples():
    g = Grid(30, 4096, True)
    assert kdv_residual(lambda x, t: np.zeros_like(x), g, 0.0) == 0.0
    assert kdv_residual(one_soliton, g, 0.0) < 1e-6
    assert kdv_residual(one_soliton, g, 0.3) < 1e-6
    for t in (0.0, 0.02):
        assert kdv_residual(lambda x, s: field(D14, x, s), g, t) < 1e-5


def test_kdv_residual_detects_non_solutions():
    g = Grid(30, 4096, True)
    # a soliton travelling at the wrong speed
    assert kdv_residual(lambda x, t: -2 / np.cosh(x - 3 * t) ** 2, g, 0.0) > 0.1


def test_kdv_residual_errors():
    with pytest.raises(DomainTooSmallError):
        kdv_residual(one_soliton, Grid(5, 512, True), 0.0)
    with pytest.raises(ValueError):
        kdv_residual(one_soliton, Grid(30, 4097), 0.0)
    with pytest.raises(ValueError):
        kdv_residual(one_soliton, Grid(30, 4096, True), 0.0, dt=1e-3)


def test_evolve_zero():
    g = Grid(30, 1024, True)
    assert np.all(spectral_evolve(np.zeros(1024), g, 0.3) == 0)
    u0 = one_soliton(g.x, 0.0)
    np.testing.assert_array_equal(spectral_evolve(u0, g, 0.0), u0)


def test_evolve_single_soliton():
    g = Grid(30, 2048, True)
    u = spectral_evolve(one_soliton(g.x, 0.0), g, 0.5)
    assert np.abs(u - one_soliton(g.x, 0.5)).max() < 1e-4


def test_evolve_two_soliton_and_invariants():
    g = Grid(30, 4096, True)
    u0 = field(D14, g.x, 0.0)
    u = spectral_evolve(u0, g, 0.05)
    exact = field(D14, g.x, 0.05)
    assert np.abs(u - exact).max() / np.abs(exact).max() < 1e-3
    mass0, mass = u0.sum() * g.dx, u.sum() * g.dx
    energy0, energy = (u0**2).sum() * g.dx, (u**2).sum() * g.dx
    assert abs(mass - mass0) <= 1e-10 * abs(mass0)
    assert abs(energy - energy0) <= 1e-8 * energy0


def test_evolve_blow_up():
    g = Grid(30, 1024, True)
    u0 = -200 / np.cosh(g.x) ** 2
    with pytest.raises(BlowUpError):
        spectral_evolve(u0, g, 0.5, dt=50 * stable_dt(u0, g))


def test_evolve_needs_periodic_grid():
    with pytest.raises(ValueError):
        spectral_evolve(np.zeros(1001), Grid(30, 1001), 0.1)


@pytest.mark.parametrize("h,v", [(1, (2,)), (2, (2,)), (1, (2, 5)), (0, (2, 5)), (1, ())])
def test_reflectionless_fixtures(h, v):
    pot = potential_model(DeformationSpec(h, v))
    g = Grid(25, 1001)
    for k in (0.5, 1.0, 2.0):
        assert abs(numeric_reflection(pot, k, g)) < 1e-4


def test_reflection_half_integer_h():
    g = Grid(25, 1001)
    u = lambda x: soliton_potential(0.5, x)
    r = numeric_reflection(u, 1.0, g)
    assert abs(abs(r) - abs(reflection_amplitude(0.5, [], 1.0))) < 1e-4
    assert abs(r) <= 1 + 1e-6
    deformed = potential_model(DeformationSpec(0.5, (2,)))
    assert abs(abs(numeric_reflection(deformed, 1.0, g)) - abs(r)) < 1e-6


def test_reflection_free_particle_and_errors():
    g = Grid(25, 1001)
    assert abs(numeric_reflection(lambda x: 0.0 * np.asarray(x), 1.3, g)) < 1e-10
    with pytest.raises(ValueError):
        numeric_reflection(lambda x: 0.0 * np.asarray(x), 0.0, g)
    with pytest.raises(DomainTooSmallError):
        numeric_reflection(lambda x: soliton_potential(1, x), 1.0, Grid(5, 1001))


@pytest.mark.parametrize("k", [0.3, 1.0, 3.0])
def test_reflection_unitarity_bound(k):
    g = Grid(25, 1001)
    for h in (0.3, 0.5, 1.7, 2.5):
        assert abs(numeric_reflection(lambda x: soliton_potential(h, x), k, g)) <= 1 + 1e-6
