import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncbeurling import FinVNAlgebra, NestSpec
from ncbeurling.harness import (
    InstanceSpec,
    SpecFormatError,
    UsageError,
    random_spec,
    run_suite,
)
from ncbeurling.harness.cli import main

from conftest import e

FIXTURES = Path(__file__).parent / "fixtures"
seeds = st.integers(0, 2**32 - 1)


# --- serialisation ----------------------------------------------------------

@given(seeds)
def test_round_trip_is_exact(seed):
    spec = random_spec(seed)
    again = InstanceSpec.loads(spec.dumps())
    assert again == spec
    assert again.dumps() == spec.dumps()


def test_round_trip_preserves_awkward_floats():
    M = FinVNAlgebra((1, 2), (0.1, 0.45))
    x = M.element([np.array([[np.nextafter(1 / 3, 1) + 1e-300j]]),
                   np.array([[np.pi, -0.0], [5e-324, 1e308 - 2.5j]])])
    spec = InstanceSpec(M.dims, M.weights, generators=[x], elements={"x": x})
    again = InstanceSpec.loads(spec.dumps())
    assert np.array_equal(again.elements["x"], x)
    assert again == spec


def test_generator_and_random_modes_round_trip(m2):
    spec = InstanceSpec((2,), (0.5,), generators=[e(m2, 1, 2)], seed=3, tolerance=1e-10)
    assert InstanceSpec.loads(spec.dumps()) == spec
    spec = InstanceSpec((1,), (1.0,), random_nest={"max_dim": 3})
    assert InstanceSpec.loads(spec.dumps()) == spec


@pytest.mark.parametrize("mutate, where", [
    (lambda d: d["algebra"]["blocks"][0].pop("weight"), "algebra.blocks"),
    (lambda d: d["algebra"]["blocks"][0].update(weight=0.3), "algebra"),
    (lambda d: d.pop("subalgebra"), "subalgebra"),
    (lambda d: d["subalgebra"].update(nest=[[[1], [3]]]), "subalgebra"),
    (lambda d: d["subspaces"]["K"][0][0].pop(), "subspaces.K[0]"),
    (lambda d: d["elements"].update(f=[[[["a", 0], [0, 0]], [[0, 0], [0, 0]]]]), "elements.f"),
])
def test_malformed_fields_are_named(mutate, where):
    data = json.loads((FIXTURES / "upper_m2.json").read_text())
    mutate(data)
    with pytest.raises(SpecFormatError) as info:
        InstanceSpec.from_dict(data)
    assert where in str(info.value)


def test_malformed_json_reports_line():
    with pytest.raises(SpecFormatError, match="line 3"):
        InstanceSpec.loads('{\n "algebra":\n')


# --- suites -----------------------------------------------------------------

def test_empty_suite_list_passes():
    report = run_suite(InstanceSpec.load(FIXTURES / "upper_m4.json"), [])
    assert report.passed and report.summary == {"checks": 0, "passed": 0, "failed": 0}


def test_unknown_suite_is_a_usage_error():
    with pytest.raises(UsageError):
        run_suite(InstanceSpec.load(FIXTURES / "upper_m4.json"), ["nope"])


def test_upper_triangular_m4_has_no_type2_part():
    report = run_suite(InstanceSpec.load(FIXTURES / "upper_m4.json"), ["upper-triangular-purity"], trials=100)
    (rec,) = report.records
    assert rec.passed and rec.trials == 100 and rec.residual == 0.0


def test_negative_control_reports_gram_witness():
    report = run_suite(InstanceSpec.load(FIXTURES / "control_m2.json"), ["negative-control"])
    rec = {r.name: r for r in report.records}["control-gram-violation"]
    assert rec.passed
    a, b = rec.witness["pair"]
    # the witness pair has a product outside span(D) = C 1
    prod = a.conj().T @ b
    assert np.linalg.norm(prod - np.trace(prod) / 2 * np.eye(2)) > 1e-3


def test_reports_are_seed_deterministic():
    spec = InstanceSpec((1,), (1.0,), random_nest={"max_dim": 4, "max_blocks": 2}, seed=5)
    suites = ["decomposition", "theta", "istr"]
    a = run_suite(spec, suites, trials=10)
    b = run_suite(spec, suites, trials=10)
    assert [r.residual for r in a.records] == [r.residual for r in b.records]
    c = run_suite(spec, suites, trials=10, seed=6)
    assert [r.residual for r in a.records] != [r.residual for r in c.records]


def test_failed_checks_carry_witnesses():
    # the control algebra is not maximal subdiagonal, so decomposition suites must fail
    report = run_suite(InstanceSpec.load(FIXTURES / "control_m2.json"), ["decomposition"], trials=3)
    assert not report.passed
    assert all(r.witness is not None for r in report.records if not r.passed)
    json.loads(report.to_json())


# --- command line -----------------------------------------------------------

def test_cli_decompose_span_of_a(tmp_path, capsys):
    out = tmp_path / "dec.json"
    assert main(["decompose", str(FIXTURES / "upper_m2.json"), "--subspace", "K", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["info"]["type"] == "Type1" and data["info"]["dim_Z"] == 0
    assert "Type1" in capsys.readouterr().out


def test_cli_check_subdiagonal(tmp_path):
    out = tmp_path / "check.json"
    assert main(["check-subdiagonal", str(FIXTURES / "upper_m2.json"), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["info"]["maximal-subdiagonal"] is True
    assert main(["check-subdiagonal", str(FIXTURES / "control_m2.json"), "--out", str(out)]) == 1
    data = json.loads(out.read_text())
    assert data["info"]["maximal-subdiagonal"] is False
    assert all(c["witness"] is not None for c in data["checks"] if c["status"] == "fail")


def test_cli_factorize_identity(tmp_path):
    out = tmp_path / "fac.json"
    assert main(["factorize", str(FIXTURES / "upper_m2.json"), "--element", "one", "--out", str(out)]) == 0
    info = json.loads(out.read_text())["info"]
    assert info["kind"] == "Unitary"
    u = np.array(info["u"][0])
    h = np.array(info["h"][0])
    eye = np.stack([np.eye(2), np.zeros((2, 2))], axis=-1)
    assert np.allclose(u, eye, atol=1e-12) and np.allclose(h, eye, atol=1e-12)


def test_cli_decompose_refuses_non_subdiagonal(tmp_path):
    out = tmp_path / "dec.json"
    assert main(["decompose", str(FIXTURES / "control_m2.json"), "--out", str(out)]) == 1
    (check,) = json.loads(out.read_text())["checks"]
    assert check["status"] == "fail" and check["witness"]["error"]


def test_cli_usage_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"algebra": {"blocks": [{"dim": 2}]}}')
    assert main(["check-subdiagonal", str(bad)]) == 2
    assert "algebra.blocks" in capsys.readouterr().err
    assert main(["property-suite", str(FIXTURES / "upper_m4.json"), "--suite", "bogus"]) == 2
    assert main(["decompose", str(tmp_path / "missing.json")]) == 2
    with pytest.raises(SystemExit) as info:
        main(["property-suite", "--p", "x"])
    assert info.value.code == 2


def test_cli_property_suite_and_gen(tmp_path):
    inst = tmp_path / "inst.json"
    assert main(["gen", "--seed", "4", "--out", str(inst)]) == 0
    assert InstanceSpec.load(inst) == random_spec(4)
    out = tmp_path / "rep.json"
    code = main(["property-suite", str(inst), "--suite", "decomposition,column-norm", "--trials", "5",
                 "--p", "1,2,inf", "--out", str(out)])
    data = json.loads(out.read_text())
    assert code == 0 and data["passed"]
    assert {c["name"] for c in data["checks"]} >= {"column-sum-norm[p=inf]", "decomposition-invariants"}


def test_cli_tol_override_applies(tmp_path):
    out = tmp_path / "check.json"
    assert main(["check-subdiagonal", str(FIXTURES / "upper_m2.json"), "--tol", "1e-11", "--out", str(out)]) == 0
