import json

import pytest

from trialgebra import cli
from trialgebra import verify as vf
from trialgebra.algebra import Element, mul
from trialgebra.fibration import pi1


def test_registry_covers_every_module():
    prefixes = {name.split(".")[0] for name in vf.suite_names()}
    assert prefixes == {"algebra", "fibration", "adapted", "conformal", "projective", "numeric"}


@pytest.mark.parametrize(
    "name, seed, trials",
    [("algebra.associativity", 42, 1000), ("fibration.h1_preserves", 7, 500)],
)
def test_examples_pass(name, seed, trials):
    r = vf.run_suite(name, seed, trials)
    assert r.failures == 0 and r.status == "pass"


def test_negative_control_witness():
    r = vf.run_suite("fibration.h1_nonmember_breaks", 7, 500)
    (check,) = r.checks
    assert check.status == "pass"
    w = check.witness
    assert w["violation"] > 1e-6
    assert abs(w["a"][2]) >= 0.1
    # the witness replays
    a, x = Element(*w["a"]), Element(*w["x"])
    assert abs(pi1(mul(a, x)) - pi1(x)) == pytest.approx(w["violation"])


def test_unknown_suite():
    with pytest.raises(vf.UnknownSuiteError):
        vf.run_suite("bogus.suite")


def test_bad_trials():
    with pytest.raises(ValueError):
        vf.run_suite("algebra.norm", 1, 0)


@pytest.mark.parametrize("name", ["algebra.inverse", "conformal.factor", "fibration.rotations"])
def test_deterministic(name):
    assert vf.run_suite(name, 3, 200).to_json() == vf.run_suite(name, 3, 200).to_json()


def test_seed_changes_report():
    assert vf.run_suite("algebra.norm", 1, 50).to_json() != vf.run_suite("algebra.norm", 2, 50).to_json()


def test_schema():
    d = json.loads(vf.run_suite("algebra.conjugation", 5, 20).to_json())
    assert {"suite", "seed", "trials", "failures", "max_abs_err", "checks"} <= d.keys()
    ids = [c["id"] for c in d["checks"]]
    assert ids == sorted(ids)
    for c in d["checks"]:
        assert {"id", "paper_ref", "status", "witness"} <= c.keys()
        assert c["paper_ref"]


def test_failing_check_records_witness():
    c = vf.Check("demo", "ref", 1e-3)
    c.observe(1e-4, x=1.0)
    c.observe(1.0, x=2.0)
    c.observe(float("nan"), x=3.0)
    rec = c.record()
    assert (rec.status, rec.failures, rec.trials) == ("fail", 2, 3)
    assert rec.witness == {"x": 2.0, "err": 1.0}


def test_negative_control_without_witness_fails():
    n = vf.NegativeControl("demo", "ref", 1.0)
    n.observe(0.5, x=1)
    rec = n.record()
    assert rec.status == "fail" and rec.failures == 1


def test_report_status_tracks_failures():
    r = vf.SuiteReport("s", 0, 1, [vf.CheckRecord("a", "r", "fail", 1, 1, 2.0)])
    assert r.status == "fail" and not r.passed and r.max_abs_err == 2.0


@pytest.mark.parametrize("name", vf.suite_names())
def test_every_suite_passes(name):
    r = vf.run_suite(name, 2024, 300)
    assert r.passed, [c.to_dict() for c in r.checks if c.status != "pass"]


def test_cli_example_all_2000(capsys):
    code = cli.main(["verify", "--all", "--seed", "42", "--trials", "2000"])
    data = json.loads(capsys.readouterr().out)
    assert code == 0
    assert data["failures"] == 0 and all(s["failures"] == 0 for s in data["suites"])
