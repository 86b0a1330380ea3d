import io
import json
from pathlib import Path

from cosetra.cli import REPORT_FORMAT, run

SPECS = Path(__file__).resolve().parent.parent / "specs"


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    lines = [json.loads(line) for line in out.getvalue().splitlines()]
    return code, lines, err.getvalue()


def test_validate_b1_reports_composition_subset():
    code, lines, _ = cli("validate", SPECS / "B1.yaml")
    assert code == 1
    assert lines[0] == {"format": REPORT_FORMAT, "command": "validate"}
    failures = lines[1]["failures"]
    assert {"condition": "composition-subset", "where": [0, 1, 2]}.items() <= failures[0].items()


def test_measure_t1():
    code, lines, _ = cli("measure", SPECS / "T1.yaml")
    assert code == 0
    rec = lines[1]
    assert rec["measurable"] is True
    assert [a["measure"] for a in rec["atoms"]] == [4, 4, 4]


def test_lyndon_3_then_axioms(tmp_path):
    code, lines, _ = cli("lyndon", 3)
    assert code == 0
    path = tmp_path / "l3.json"
    path.write_text(json.dumps(lines[0]))
    code, lines, _ = cli("axioms", path)
    assert code == 0, lines[1]["failures"]


def test_lyndon_4_then_axioms(tmp_path):
    code, lines, _ = cli("lyndon", 4)
    path = tmp_path / "l4.json"
    path.write_text(json.dumps(lines[0]))
    assert cli("axioms", path)[0] == 0
    assert cli("axioms", "lyndon:4")[0] == 0


def test_build_record_roundtrip(tmp_path):
    code, lines, _ = cli("build", SPECS / "T1.yaml")
    assert code == 0 and lines[0]["format"] == "cosetra-atoms/1"
    assert len(lines[0]["atoms"]) == 28
    path = tmp_path / "t1.json"
    path.write_text(json.dumps(lines[0]))
    assert cli("axioms", path)[0] == 0
    assert cli("measure", path)[0] == 0


def test_validate_passing_iff_build_succeeds(tmp_path):
    specs = sorted(p for p in SPECS.glob("*.yaml") if p.name != "bad_shift.yaml")
    for p in specs:
        v, b = cli("validate", p)[0], cli("build", p)[0]
        assert (v == 0) == (b == 0), p.name


def test_determinism():
    for args in (["validate", "--relations", SPECS / "T1.yaml"], ["analyze", SPECS / "T1.yaml"],
                 ["embed", "lyndon:4", SPECS / "Z3_cube.yaml"], ["search-shifts", SPECS / "T1.yaml"]):
        first = io.StringIO()
        second = io.StringIO()
        run([str(a) for a in args], first, io.StringIO())
        run([str(a) for a in args], second, io.StringIO())
        assert first.getvalue() == second.getvalue()


def test_axioms_f1_shifted_fails():
    code, lines, _ = cli("axioms", SPECS / "F1_shifted.yaml")
    assert code == 1
    assert {f["condition"] for f in lines[1]["failures"]} >= {"identity-left", "identity-right"}


def test_simple_and_non_simple():
    assert cli("simple", SPECS / "T1.yaml")[0] == 0
    code, lines, _ = cli("simple", SPECS / "two_classes.yaml")
    assert code == 1 and lines[1] == {"record": "simplicity", "simple": False, "simple_triple": False}


def test_embed_commands():
    code, lines, _ = cli("embed", "lyndon:4", SPECS / "Z3_cube.yaml")
    assert code == 0
    assert [l["record"] for l in lines[1:]] == ["embedding", "verification", "lyndon-invariants"]
    assert all(l.get("ok", True) for l in lines[1:])
    code, lines, _ = cli("embed", "lyndon:2", "group:cyclic:4")
    assert code == 1 and lines[1]["found"] is False and lines[1]["exhausted"] is True
    assert cli("embed", "identity", SPECS / "T1.yaml")[0] == 1
    assert cli("embed", "--partial", "identity", SPECS / "T1.yaml")[0] == 0
    code, lines, _ = cli("embed", "--budget", 2, "lyndon:4", SPECS / "Z3_cube.yaml")
    assert code == 1 and lines[1]["exhausted"] is False


def test_compare_and_search():
    code, lines, _ = cli("compare-comp", SPECS / "T1_one_shift.yaml")
    assert code == 0 and lines[1]["count"] == 4
    code, lines, _ = cli("compare-comp", SPECS / "T1_shifted.yaml")
    assert code == 0 and lines[1]["count"] == 40
    code, lines, _ = cli("search-shifts", SPECS / "F1.yaml")
    assert code == 0
    assert lines[1]["passing"] == [{"trivial": True, "shifts": [[0, 0, 0, [0]]]}]


def test_analyze():
    code, lines, _ = cli("analyze", SPECS / "T1.yaml")
    assert code == 0
    kinds = [l["record"] for l in lines[1:]]
    assert kinds == ["triviality", "axioms", "cra1", "cra2", "coset-consequences",
                     "measurability", "simplicity"]


def test_usage_errors():
    assert cli()[0] == 2
    assert cli("frobnicate")[0] == 2
    assert cli("axioms", "missing.yaml")[0] == 2
    assert cli("axioms", "lyndon:zero")[0] == 2
    assert cli("lyndon", 0)[0] == 2
    code, _, err = cli("validate", SPECS / "bad_shift.yaml")
    assert code == 2 and "line 6, column 29" in err
    assert cli("--max-order", 3, "validate", SPECS / "T1.yaml")[0] == 2
    assert cli("--max-atoms", 10, "validate", SPECS / "T1.yaml")[0] == 2
    assert cli("axioms", "group:cyclic:65")[0] == 2


def test_seed_flag_accepted():
    assert cli("--seed", 11, "validate", "--relations", SPECS / "Z3_cube.yaml")[0] == 0
