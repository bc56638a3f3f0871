"""Smoke tests for the compiled python module."""

import json
import math
import os

import pytest

import fharmonic as fh


def test_profile_degrees():
    p3 = fh.FProfile.p_harmonic(3.0)
    assert p3.degrees.upper == pytest.approx(1.5)
    mg = fh.FProfile.minimal_graph()
    est = fh.estimate_degrees(mg, fh.default_degree_grid())
    assert est.upper == pytest.approx(1.0, abs=1e-6)
    assert est.lower == pytest.approx(0.5, abs=1e-6)
    assert fh.degree_gate(mg, 3)
    assert not fh.degree_gate(p3, 3)


def test_profile_errors_map_to_python():
    with pytest.raises(fh.FharmError):
        fh.FProfile.p_harmonic(0.5)
    with pytest.raises(fh.FharmError):
        fh.FProfile.harmonic().value(-1.0)


def test_flux_solver_against_closed_form():
    mg = fh.FProfile.minimal_graph()
    flat = fh.ModelManifold.euclidean(3)
    one = fh.ConformalFactor.one()
    cat = fh.solve_flux(mg, flat, one, 1.0, 1e-8, 50.0)
    assert cat.domain.lo == pytest.approx(1.0, abs=1e-9)
    for r in (1.5, 2.0, 10.0):
        exact = 1.0 / math.sqrt(r**4 - 1.0)
        assert cat.u_prime(r) == pytest.approx(exact, rel=1e-10)
    assert cat.flux_residual(2.0) < 1e-10

    lim = fh.limit_at_infinity(cat)
    assert lim.status == fh.LimitStatus.finite


def test_sigma_and_area_conditions():
    one = fh.ConformalFactor.one()
    grid = fh.default_sigma_grid()
    s = fh.compute_sigma(fh.FProfile.harmonic(), fh.ModelManifold.euclidean(5),
                         one, grid)
    assert s.holds
    assert s.sigma == 3.0

    probes = [2.0 * 1.5**k for k in range(10)]
    f2 = fh.check_f2(fh.ModelManifold.euclidean(5), one, 3.0, probes)
    assert f2.verdict.holds
    assert f2.C == pytest.approx(3.0 * fh.unit_sphere_area(5), rel=1e-9)

    hy = fh.check_f2(fh.ModelManifold.hyperbolic(3, 1.0), one, 3.0, probes)
    assert not hy.verdict.holds


def test_stress_energy_identity():
    h = fh.solve_flux(fh.FProfile.harmonic(), fh.ModelManifold.euclidean(3),
                      fh.ConformalFactor.one(), 2.0, 1.0, 60.0)
    # R * boundary term is the constant -4 pi for this closed form.
    for R in (2.0, 5.0, 30.0):
        assert R * fh.boundary_flux(h, R) == pytest.approx(-4.0 * math.pi,
                                                           abs=1e-10)
    assert fh.annulus_identity_residual(h, 2.0, 10.0) < 1e-10


def test_envelope():
    assert fh.right_monotone_envelope([0.5, 0.3, 0.4, 0.2]) == [0.5, 0.4, 0.4, 0.2]


def test_suite_runner(tmp_path):
    suite_path = os.environ.get("FHARM_SUITE")
    if not suite_path:
        pytest.skip("FHARM_SUITE not set")
    out = tmp_path / "out"
    status = fh.run_suite_file(suite_path, out_dir=str(out),
                               scenario="cor62_minimal_graph_m3")
    assert status == 0
    report = json.loads((out / "cor62_minimal_graph_m3" / "report.json").read_text())
    assert report["verdict"] == "CONSTANT_FORCED"
    assert report["expectation_met"] is True
