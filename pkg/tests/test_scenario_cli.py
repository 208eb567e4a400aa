import json
import os
import subprocess
import sys

import pytest

from coarsemon.cli import main
from coarsemon.errors import ScenarioError, HullNotEntourage, NotInvertible
from coarsemon.scenario import load_scenario, load_scenario_file
from coarsemon.suites import planted_case

HERE = os.path.dirname(os.path.abspath(__file__))
DEMO = os.path.join(os.path.dirname(HERE), "demos", "scenarios")
BASIC = os.path.join(DEMO, "basic.json")
BROKEN = os.path.join(DEMO, "broken.json")


def basic_doc():
    with open(BASIC) as fh:
        return json.load(fh)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# -- scenario ingestion

def test_basic_scenario_loads():
    sc = load_scenario_file(BASIC)
    assert sorted(sc.morphisms) == ["phi", "psi", "push"]
    assert sc.objects["M"].obj.fiber("a") == 1
    assert sc.morphisms["push"].f(("c")) == "p"


def test_generated_declarations_follow_the_seed():
    a, b = load_scenario(basic_doc()), load_scenario(basic_doc())
    assert a.objects["N"] == b.objects["N"] and a.morphisms["psi"] == b.morphisms["psi"]


def test_dangling_reference():
    with pytest.raises(ScenarioError, match="Nowhere"):
        load_scenario_file(BROKEN)


@pytest.mark.parametrize("ring, name", [({"kind": "mod", "n": 3}, "MatCat(Z/3)"),
                                        ({"kind": "rat"}, "MatCat(Q)"), ("Z/5", "MatCat(Z/5)")])
def test_ring_forms(ring, name):
    doc = basic_doc()
    doc["instances"][0]["ring"] = ring
    doc["objects"][0]["rho"] = [r for r in doc["objects"][0]["rho"] if r[0] == 0]
    doc["morphisms"][0]["entries"] = []
    doc["objects"][0]["rho"] += [[1, "a", [[1]]], [1, "b", [[1]]]]
    assert load_scenario(doc).instances["A"].name == name


def test_ring_object_form_is_schema_checked():
    doc = basic_doc()
    doc["instances"][0]["ring"] = {"kind": "mod"}
    with pytest.raises(ScenarioError, match="schema"):
        load_scenario(doc)


def test_duplicate_ids_and_schema_errors():
    doc = basic_doc()
    doc["maps"][0]["id"] = "X"
    with pytest.raises(ScenarioError, match="duplicate"):
        load_scenario(doc)
    doc = basic_doc()
    doc["groups"][0]["name"] = "S5"
    with pytest.raises(ScenarioError, match="schema"):
        load_scenario(doc)
    doc = basic_doc()
    doc["objects"][1]["generate"] = {"colour": 1}
    with pytest.raises(ScenarioError):
        load_scenario(doc)


def test_declared_values_are_validated():
    doc = basic_doc()
    doc["objects"][0]["rho"][2][2] = [[2]]
    with pytest.raises(NotInvertible):
        load_scenario(doc)
    doc = basic_doc()
    doc["spaces"][0]["fixture"] = "twoclass6"
    doc["maps"] = []
    doc["objects"] = [doc["objects"][0] | {"fibers": [[0, 1], [3, 1]],
                                           "rho": [[0, 0, [[1]]], [0, 3, [[1]]], [1, 0, [[1]]], [1, 3, [[1]]]]}]
    doc["morphisms"] = [{"id": "bad", "src": "M", "dst": "M",
                         "entries": [[0, 3, [[1]]], [3, 0, [[1]]]]}]
    with pytest.raises(HullNotEntourage):
        load_scenario(doc)


# -- command line

def test_check(capsys):
    code, out, _ = run(["check", BASIC], capsys)
    assert code == 0 and "OK" in out
    code, _, err = run(["check", BROKEN], capsys)
    assert code == 2 and "Nowhere" in err


def test_check_reports_validator_failures_as_violations(tmp_path, capsys):
    doc = basic_doc()
    doc["objects"][0]["rho"][2][2] = [[2]]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    code, _, err = run(["check", str(p)], capsys)
    assert code == 1 and "NotInvertible" in err


def test_usage_errors(capsys):
    assert run([], capsys)[0] == 2
    assert run(["suite", "nosuchsuite"], capsys)[0] == 2
    assert run(["suite", "coherence", "--report", "xml"], capsys)[0] == 2
    assert run(["replay", "/nonexistent.json"], capsys)[0] == 2


def test_suite_json_report(capsys):
    code, out, _ = run(["suite", "strictness", "negative", "--seed", "4", "--instances", "3",
                        "--report", "json"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "pass" and rep["seed"] == 4
    assert rep["seed_source"] == "argument"
    negative = rep["suites"][1]
    assert [law["pass"] for law in negative["laws"]] == [3] * 6


def test_environment_seed_is_echoed(monkeypatch, capsys):
    monkeypatch.setenv("COARSEMON_SEED", "12")
    code, out, _ = run(["suite", "strictness", "--instances", "2", "--report", "json"], capsys)
    rep = json.loads(out)
    assert rep["seed"] == 12 and rep["seed_source"] == "env:COARSEMON_SEED"
    code, out, _ = run(["suite", "strictness", "--instances", "2"], capsys)
    assert "seed 12 (env:COARSEMON_SEED)" in out
    # an explicit flag still wins
    rep = json.loads(run(["suite", "strictness", "--instances", "2", "--seed", "1", "--report", "json"],
                         capsys)[1])
    assert rep["seed"] == 1


def test_fake_sigma_run_fails_and_replays(tmp_path, capsys):
    out = tmp_path / "cex"
    code, text, _ = run(["suite", "coherence", "--fake-sigma", "--instances", "6",
                         "--cex-dir", str(out)], capsys)
    assert code == 1 and "FAIL" in text
    files = sorted(os.listdir(out))
    assert files
    code, text, _ = run(["replay", str(out / files[0])], capsys)
    assert code == 1 and "reproduced: yes" in text


@pytest.mark.parametrize("law", ["non_proper_projection", "off_entourage_entry", "broken_cocycle",
                                 "non_equivariant_matrix", "fake_sigma", "incompatible_bornology"])
def test_planted_violations_replay(law, tmp_path, capsys):
    cex = planted_case(law, seed=0, index=1)
    p = tmp_path / "cex.json"
    p.write_text(json.dumps(cex))
    code, out, _ = run(["replay", str(p), "--report", "json"], capsys)
    res = json.loads(out)
    assert code == 0 and res["reproduced"] and res["code"] == cex["error"]["code"]


def test_tampered_counterexample_does_not_reproduce(tmp_path, capsys):
    cex = planted_case("off_entourage_entry", seed=0, index=0)
    cex["error"]["code"] = "NotProper"
    p = tmp_path / "cex.json"
    p.write_text(json.dumps(cex))
    code, out, _ = run(["replay", str(p)], capsys)
    assert "reproduced: no" in out


def test_oracle_command(capsys):
    code, out, _ = run(["oracle", BASIC], capsys)
    assert code == 0 and "pushforward:push: pass" in out
    code, out, _ = run(["oracle", "random", "--instances", "3", "--report", "json"], capsys)
    assert code == 0 and json.loads(out)["suites"][0]["suite"] == "oracle"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "coarsemon", "check", BROKEN],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    proc = subprocess.run([sys.executable, "-m", "coarsemon", "suite", "strictness",
                           "--instances", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and "verdict: PASS" in proc.stdout


def test_full_size_coherence_and_fibration_run(capsys):
    code, out, _ = run(["suite", "coherence", "fibration", "--seed", "7", "--instances", "200"], capsys)
    assert code == 0, out
    assert "verdict: PASS" in out
