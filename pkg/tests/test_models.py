import json

import numpy as np
import pytest

import quasiherm.errors as errors_module
from quasiherm import (ParityViolation, QuasihermError, SchemaError,
                       parse_model, pt_symmetry_residual, parity_matrix,
                       run_battery, run_scenario)

MODEL_2X2 = {"kind": "matrix", "data": [[[0, 0.6], [1, 0]], [[1, 0], [0, -0.6]]]}
MODEL_BROKEN = {"kind": "matrix", "data": [[[0, 1.2], [1, 0]], [[1, 0], [0, -1.2]]]}
MODEL_FAMILY = {"kind": "family", "grid": {"L": 4, "N": 201},
                "sigma": "1+0.5*exp(-x^2)", "alpha": "x*exp(-x^2)",
                "omega": 0.7}


def rows_by_name(report):
    return {r.name: r for r in report.rows}


def test_parse_matrix_model():
    spec = parse_model(json.dumps(MODEL_2X2))
    h = spec.payload["matrix"]
    assert np.array_equal(h, np.array([[0.6j, 1.0], [1.0, -0.6j]]))
    assert spec.kind == "matrix"
    assert len(spec.digest) == 64


def test_parse_schroedinger_model():
    spec = parse_model({"kind": "schroedinger", "grid": {"L": 8, "N": 401},
                        "V_real": "x^2", "V_imag": "0"})
    grid = spec.payload["grid"]
    assert grid.npoints == 401
    assert grid.spacing == pytest.approx(0.04)
    v = spec.payload["potential"]
    assert np.abs(v - grid.points ** 2).max() <= 1e-12


def test_parse_family_model():
    spec = parse_model(MODEL_FAMILY)
    ansatz = spec.payload["ansatz"]
    assert np.array_equal(ansatz.sigma, ansatz.sigma[::-1])
    assert np.array_equal(ansatz.alpha, -ansatz.alpha[::-1])
    assert ansatz.omega == 0.7


def test_parse_lattice_model():
    spec = parse_model({"kind": "lattice", "n": 5, "gamma": 0.5})
    h = spec.payload["matrix"]
    assert h[0, 0] == 0.5j and h[4, 4] == -0.5j
    assert h[0, 1] == 1.0
    _, rel = pt_symmetry_residual(h, parity_matrix(5))
    assert rel <= 1e-14


def test_lattice_alternating_parity():
    spec = parse_model({"kind": "lattice", "n": 4, "gamma": 0.3,
                        "pattern": "alternating"})
    h = spec.payload["matrix"]
    _, rel = pt_symmetry_residual(h, parity_matrix(4))
    assert rel <= 1e-14
    with pytest.raises(SchemaError):
        parse_model({"kind": "lattice", "n": 5, "gamma": 0.3,
                     "pattern": "alternating"})


@pytest.mark.parametrize("doc,path", [
    ({}, "kind"),
    ({"kind": "sphere"}, "kind"),
    ({"kind": "matrix"}, "data"),
    ({"kind": "matrix", "data": [[1, 2], [3]]}, "data[1]"),
    ({"kind": "matrix", "data": [[[0, 0], "x"], [[0, 0], [0, 0]]]},
     "data[0][1]"),
    ({"kind": "schroedinger", "grid": {"L": 0, "N": 11}}, "grid.L"),
    ({"kind": "schroedinger", "grid": {"L": 1, "N": 10}}, "grid.N"),
    ({"kind": "schroedinger", "grid": {"L": 1, "N": 11, "h": 3}}, "grid"),
    ({"kind": "family", "grid": {"L": 1, "N": 11}, "alpha": "x"}, "sigma"),
])
def test_schema_errors_name_paths(doc, path):
    with pytest.raises(SchemaError) as err:
        parse_model(doc)
    assert err.value.path == path


def test_parity_violation_on_tagged_functions():
    with pytest.raises(ParityViolation):
        parse_model({"kind": "family", "grid": {"L": 1, "N": 11},
                     "sigma": "x", "alpha": "x"})


def test_digest_and_byte_identical_reports():
    spec = parse_model(json.dumps(MODEL_2X2))
    r1 = run_scenario(spec, "factorize")
    r2 = run_scenario(parse_model(json.dumps(MODEL_2X2)), "factorize")
    assert r1.to_json() == r2.to_json()
    assert r1.digest == r2.digest
    other = parse_model(json.dumps(MODEL_BROKEN))
    assert other.digest != spec.digest


def test_factorize_scenario_golden_rows():
    spec = parse_model(MODEL_2X2)
    report = run_scenario(spec, "factorize")
    assert report.all_passed
    rows = rows_by_name(report)
    charge = np.array([[complex(re, im) for re, im in row]
                       for row in rows["charge"].value])
    assert np.abs(charge - np.array([[0.75j, 1.25], [1.25, -0.75j]])
                  ).max() <= 1e-12
    eigs = np.array(rows["theta_eigenvalues"].value)
    assert np.abs(eigs - np.array([0.5, 2.0])).max() <= 1e-12


def test_metric_scenario_broken_phase_row():
    spec = parse_model(MODEL_BROKEN)
    report = run_scenario(spec, "metric")
    assert not report.all_passed
    assert len(report.rows) == 1
    row = report.rows[0]
    assert row.name == "BrokenPhase"
    assert row.passed is False
    assert row.value == pytest.approx(np.sqrt(0.44), abs=1e-9)


def test_spectrum_scenario_on_schroedinger():
    spec = parse_model({"kind": "schroedinger", "grid": {"L": 8, "N": 201},
                        "V_real": "x^2"})
    report = run_scenario(spec, "spectrum")
    assert report.all_passed
    rows = rows_by_name(report)
    lowest = [complex(re, im) for re, im in rows["eigenvalues"].value[:3]]
    # harmonic ladder 1, 3, 5 up to O(h^2) truncation
    assert np.abs(np.array(lowest).real - np.array([1.0, 3.0, 5.0])
                  ).max() <= 0.01
    assert rows["spectrum_real"].value is True


def test_family_scenarios_pass():
    spec = parse_model(MODEL_FAMILY)
    forward = run_scenario(spec, "family-forward")
    assert forward.all_passed
    assert forward.series  # sampled functions for CSV output
    inverse = run_scenario(spec, "family-inverse")
    rows = rows_by_name(inverse)
    assert rows["omega_sign_convention"].value == "S_minus_omega"
    assert rows["sigma_roundtrip_max"].passed
    check = run_scenario(spec, "family-check", {"refine": 1})
    rows = rows_by_name(check)
    assert rows["d3_sup"].value == 0.0
    assert rows["d2_sup"].value == 0.0
    assert rows["pg_hermiticity"].passed
    assert 3.5 <= rows["ode_ratio_S_level1"].value <= 4.5


def test_battery_report_prefixes_rows():
    spec = parse_model(MODEL_2X2)
    report = run_battery(spec)
    assert report.all_passed
    names = [r.name for r in report.rows]
    assert any(n.startswith("spectrum.") for n in names)
    assert any(n.startswith("table.") for n in names)
    assert any(n.startswith("evolve.") for n in names)


def test_error_codes_are_unique_per_type():
    codes = {}
    for name in dir(errors_module):
        obj = getattr(errors_module, name)
        if (isinstance(obj, type) and issubclass(obj, QuasihermError)
                and obj is not QuasihermError):
            try:
                instance = obj.__new__(obj)
                code = type(instance).__name__
            except TypeError:
                code = obj.__name__
            assert code not in codes.values()
            codes[name] = code
    assert len(codes) >= 19


def test_unknown_task_rejected():
    spec = parse_model(MODEL_2X2)
    with pytest.raises(ValueError):
        run_scenario(spec, "frobnicate")


def test_float_rendering_17_digits():
    from quasiherm.models import format_float
    x = 1.0 / 3.0
    assert float(format_float(x)) == x
    assert format_float(0.5) == "0.5"


def test_family_inverse_sigma_vanishes_row():
    spec = parse_model({"kind": "family", "grid": {"L": 1, "N": 11},
                        "sigma": "0", "alpha": "0",
                        "S": "-1", "Lambda": "1e-9*x"})
    report = run_scenario(spec, "family-inverse")
    assert not report.all_passed
    row = report.rows[0]
    assert row.name == "SigmaVanishes"
    assert row.passed is False
    assert isinstance(row.value, list) and len(row.value) > 0


def test_lattice_battery_passes_end_to_end():
    spec = parse_model({"kind": "lattice", "n": 5, "gamma": 0.5})
    report = run_battery(spec)
    assert report.all_passed
    rows = {r.name: r for r in report.rows}
    assert rows["table.mode"].value == "krein"
    assert rows["evolve.theta_drift_rel"].passed is True


def test_family_check_constant_ansatz_compose_row():
    spec = parse_model({"kind": "family", "grid": {"L": 2, "N": 101},
                        "sigma": "0.8", "alpha": "0", "omega": 0.3})
    report = run_scenario(spec, "family-check")
    assert report.all_passed
    rows = {r.name: r for r in report.rows}
    assert rows["compose_residual_full_split"].value <= 1e-12
