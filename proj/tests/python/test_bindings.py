"""Smoke tests for the pybind11 module."""

import json
import math

import pytest

import saext


def test_deficiency_indices():
    n_plus, n_minus, kind, residual = saext.deficiency_indices("momentum", 0.0, 1.0)
    assert (n_plus, n_minus) == (1, 1)
    assert kind == "has_extensions"
    assert residual <= 1e-4
    assert saext.deficiency_indices("momentum", 0.0, math.inf)[:2] == (1, 0)


def test_extension_maps():
    assert saext.robin_alpha(0.0) == pytest.approx(-1 / math.sqrt(2))
    assert abs(saext.robin_alpha(math.pi / 2)) <= 1e-14
    assert math.isinf(saext.robin_alpha(math.pi))
    theta = saext.momentum_theta(1.2)
    assert -math.pi < theta <= math.pi


def test_spectra():
    vals = saext.momentum_eigenvalues(math.pi / 3, -2, 2)
    assert vals == pytest.approx([2 * math.pi * n + math.pi / 3 for n in range(-2, 3)])
    well = saext.well_eigenvalues(1.0, 3)
    assert well == pytest.approx([(n * math.pi) ** 2 for n in (1, 2, 3)])
    eigs = saext.discretized_momentum_eigs(0.0, 64)
    assert len(eigs) == 64
    assert all(isinstance(e, complex) for e in eigs)


def test_bound_state_and_scattering():
    assert saext.bound_state_energy(-1.5) == pytest.approx(-2.25, rel=1e-12)
    assert saext.bound_state_energy(1.0) is None
    assert saext.bound_state_shooting(-2.0) == pytest.approx(-4.0, rel=1e-8)
    assert abs(saext.reflection_coefficient(2.0, -1.0)) == pytest.approx(1.0, abs=1e-14)


def test_anomaly():
    r = saext.anomaly(-1.0)
    assert r["anomaly"] == pytest.approx(-1.0, abs=1e-6)
    assert r["bound_energy"] == pytest.approx(-1.0)


def test_paradox_reports():
    r = saext.trace_commutator_check(8, 10, 1)
    assert r["id"] == 2
    assert isinstance(r["quantities"], dict)
    assert saext.commuting_observables_demo(1.0, 5)["id"] == 3


def test_classical_and_geometry():
    assert saext.poisson_bracket_string("q,p") == "1"
    d = saext.dilatation_drift(s="-2")
    assert d["max_drift"] <= 1e-6
    assert abs(saext.radial_defect("polar")) <= 1e-8


def test_errors_carry_code():
    with pytest.raises(saext.Error) as info:
        saext.anomaly(1.0)
    assert info.value.args[0] == "no_bound_state"


def test_cli_in_process():
    code, out, err = saext.cli(["boundstate", "--alpha", "-1"])
    assert code == 0
    assert json.loads(out)["E"] == -1.0
    assert saext.cli(["frobnicate"])[0] == 2
