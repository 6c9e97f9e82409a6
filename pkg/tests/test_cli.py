import json
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from cayley_abels import cli
from cayley_abels.specs import load_spec
from cayley_abels.errors import SpecError

SPECS = Path(__file__).resolve().parent.parent / "specs"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--json")
    report = json.loads(out)
    jsonschema.validate(report, cli.REPORT_SCHEMA)
    assert report["exit_code"] == code
    return code, report


def test_modular_on_end_stabilizer(capsys):
    code, rep = run_json(capsys, "modular", SPECS / "end_stabilizer_t3.json")
    assert code == 0
    assert rep["result"]["image"]["generator"] == "2/1"
    assert rep["result"]["valency_bound"] == 3


def test_validate_reports_condition_witness(capsys):
    code, rep = run_json(capsys, "validate", SPECS / "sym4_bad_s.json")
    assert code == 1 and rep["status"] == "failed"
    cond = {c["name"]: c for c in rep["result"]["conditions"]}
    assert not cond["double_coset"]["holds"] and cond["double_coset"]["witness"]
    code, out = run(capsys, "validate", SPECS / "sym4_bad_s.json")
    assert code == 1 and "double_coset: fails (" in out


def test_ends_on_finite_model_is_zero(capsys):
    code, rep = run_json(capsys, "ends", SPECS / "triangle.json")
    assert code == 0 and rep["result"]["classification"] == "zero"


def test_ends_budget_is_reported(capsys):
    code, rep = run_json(capsys, "ends", SPECS / "tree3.json", "--r-max", "4")
    assert code == 0 and rep["result"]["r_checked"] == 4 and rep["result"]["r_max"] == 4


def test_inconclusive_exit_code(capsys):
    code, rep = run_json(capsys, "lpc", SPECS / "aut_t3.json", "--depth", "2")
    assert code == 2 and rep["status"] == "inconclusive"
    code, rep = run_json(capsys, "growth", SPECS / "grid.json", "--n-max", "2")
    assert code == 2


def test_hypothesis_failure_exit_code(capsys):
    code, rep = run_json(capsys, "scale", SPECS / "aut_t3.json")
    assert code == 1 and "coprime" in rep["message"]
    assert rep["result"]["tidy"]["status"] == "refuted"


def test_scale_on_oriented_tree(capsys):
    code, rep = run_json(capsys, "scale", SPECS / "oriented_3_2.json")
    assert code == 0 and rep["result"]["scale"] == 3
    assert rep["result"]["tidy"]["indices"] == [str(3 ** n) for n in range(1, 6)]


@pytest.mark.parametrize("text", [
    "{not json",
    '{"kind": "perm", "degree": 4}',
    '{"kind": "perm", "degree": 40, "generators": []}',
    '{"kind": "perm", "degree": 4, "generators": ["(1 5)"], "S": []}',
    '{"kind": "perm", "degree": 4, "generators": ["(1 2)"], "S": ["(1 2)"]}',
    '{"kind": "teapot"}',
])
def test_malformed_input_exit_code(tmp_path, capsys, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    code, rep = run_json(capsys, "validate", path)
    assert code == 3 and rep["status"] == "malformed" and rep["message"]


def test_missing_file_exit_code(tmp_path, capsys):
    code, _ = run(capsys, "modular", tmp_path / "absent.json")
    assert code == 3


def test_wrong_kind_for_command(capsys):
    code, rep = run_json(capsys, "scale", SPECS / "sym4_k4.json")
    assert code == 3


@pytest.mark.parametrize("command,spec", [
    ("build-ca", "sym4_k4.json"), ("local-action", "sym4_k4.json"), ("local-action", "oriented_3_2.json"),
    ("quotient", "sym4_k4.json"), ("quotient", "dihedral8_k.json"), ("modular", "aut_t3.json"),
    ("classify", "u_c3.json"), ("cover", "k4.json"), ("cover", "sym4_k4.json"),
    ("growth", "grid.json"), ("lpc", "u_c3.json"), ("ends", "line.json"),
])
def test_reports_are_deterministic_and_valid(capsys, command, spec):
    code1, out1 = run(capsys, command, SPECS / spec, "--json")
    code2, out2 = run(capsys, command, SPECS / spec, "--json")
    assert code1 == code2 == 0 and out1 == out2
    jsonschema.validate(json.loads(out1), cli.REPORT_SCHEMA)
    t1 = run(capsys, command, SPECS / spec)[1]
    t2 = run(capsys, command, SPECS / spec)[1]
    assert t1 == t2


def test_quotient_override(capsys):
    code, rep = run_json(capsys, "quotient", SPECS / "sym4_k4.json", "--normal", "(1 2 3);(1 2)(3 4)")
    assert code == 0 and rep["result"]["normal_order"] == 12
    assert rep["result"]["chain"]["criterion_agrees"] == [True]
    assert rep["result"]["chain"]["valencies"] == [0, 0]


def test_cover_report(capsys):
    code, rep = run_json(capsys, "cover", SPECS / "triangle.json", "--depth", "3")
    r = rep["result"]
    assert code == 0 and r["cover_vertices"] == 7 and r["deck_rank"] == r["cycle_rank"] == 1
    assert all(x["commutes"] for x in r["lifts"])


def test_classify_portrait_file(tmp_path, capsys):
    (tmp_path / "swap.txt").write_text("depth 2\n- -> -\n1 -> 2\n2 -> 1\n3 -> 3\n"
                                       "1.2 -> 2.1\n1.3 -> 2.3\n2.1 -> 1.2\n2.3 -> 1.3\n3.1 -> 3.2\n3.2 -> 3.1\n")
    (tmp_path / "spec.json").write_text(json.dumps({"kind": "uf", "degree": 3, "portrait": "swap.txt"}))
    code, rep = run_json(capsys, "classify", tmp_path / "spec.json")
    assert code == 0 and rep["result"]["type"] == "elliptic" and rep["result"]["fixed_vertex"] == "-"


def test_dot_output(tmp_path, capsys):
    out = tmp_path / "g.dot"
    code, _ = run(capsys, "build-ca", SPECS / "sym4_k4.json", "--dot", out)
    assert code == 0 and out.read_text().count("--") == 6


def test_batch_directory_with_jobs(tmp_path, capsys):
    for name in ("line.json", "grid.json", "triangle.json"):
        shutil.copy(SPECS / name, tmp_path / name)
    code_serial, serial = run(capsys, "ends", tmp_path)
    code_par, parallel = run(capsys, "ends", tmp_path, "--jobs", "3")
    assert code_serial == code_par == 0 and serial == parallel
    (tmp_path / "zz_bad.json").write_text("{}")
    code, rep = run(capsys, "ends", tmp_path, "--json")
    assert code == 3 and len(json.loads(rep)["reports"]) == 4


def test_all_shipped_specs_load():
    for path in sorted(SPECS.glob("*.json")):
        load_spec(path)
    with pytest.raises(SpecError):
        load_spec({"kind": "uf"})


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cayley_abels", "modular", str(SPECS / "end_stabilizer_t3.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "valency bound: 3" in proc.stdout
