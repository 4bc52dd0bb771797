import json
import subprocess
import sys

import pytest

from nambukit.cli import main, parse_matrix, parse_sparse, run_command
from nambukit.documents import parse_document
from nambukit.nambu import replay_witness


def run(argv):
    text, status = run_command(argv)
    return json.loads(text) if text.startswith("{") else text, status


def test_check_nambu_poincare_passes():
    report, status = run(["check", "nambu", "poincare.mv"])
    assert status == 0
    assert report["verdict"] == "pass" and report["schema"] == 1 and report["kind"] == "report"
    assert report["config"] == {"seed": 0, "trials": 20, "degree_bound": 2, "parallelism": 1}


@pytest.mark.parametrize("name", ["so4_example1.mv", "example1_so4_k1.mv"])
def test_check_nambu_example1_fails_with_replayable_witness(name):
    report, status = run(["check", "nambu", name])
    assert status == 1 and report["witness"]["kind"] == "plucker"
    lam = parse_document(open(f"src/nambukit/fixtures/{name}").read()).payload
    assert replay_witness(lam, report["witness"]).terms


def test_generator_verifier_loop(tmp_path):
    out = tmp_path / "c.mv"
    _, status = run(["gen", "normal-form", "--family", "C", "--n", "3", "--m", "3", "--a", "1", "--out", str(out)])
    assert status == 0
    report, status = run(["check", "nambu", str(out)])
    assert status == 0 and report["verdict"] == "pass"


def test_input_errors_exit_2(tmp_path, capsys):
    assert main(["check", "nambu", "no-such-fixture.mv"]) == 2
    bad = tmp_path / "bad.mv"
    bad.write_text('{"schema": 1, "kind": "multivector", "payload": {"m": 2, "degree": 2, '
                   '"terms": [{"index": [1, 0], "coeff": []}]}}')
    assert main(["check", "nambu", str(bad)]) == 2
    assert "not strictly increasing" in capsys.readouterr().err
    # constant coefficients are not linear: shape error
    assert main(["check", "filippov-linear", "det3.mv", "--format", "text"]) == 2
    assert main(["check", "unknown-verb"]) == 2
    assert main(["gen", "normal-form", "--family", "B2", "--n", "3", "--m", "5", "--a", "2=1"]) == 2


def test_fixture_dir_override(tmp_path, monkeypatch):
    (tmp_path / "mine.mv").write_text(open("src/nambukit/fixtures/det3.mv").read())
    monkeypatch.setenv("NAMBU_FIXTURE_DIR", str(tmp_path))
    report, status = run(["check", "nambu", "--fixture", "mine.mv"])
    assert status == 0


def test_other_verbs():
    assert run(["check", "filippov-linear", "so4.sc"])[1] == 0
    assert run(["check", "algebroid", "example4_n2_m3.abx", "--trials", "5"])[1] == 0
    assert run(["check", "lemma1", "lemma1_branch_a.fam"])[0]["branches"] == ["a"]
    assert run(["check", "lemma1", "lemma1_branch_b.fam"])[0]["branches"] == ["b"]
    assert run(["check", "cocycle", "so3.sc", "--delta", "0,0,0;0,0,0;1,0,0", "--power", "2"])[1] == 1
    assert run(["check", "fi-random", "nonintegrable.mv", "--trials", "3"])[1] == 1
    report, _ = run(["bracket", "nambu", "det3.mv", "--f", "x0", "--f", "x1", "--f", "x2^2"])
    assert report["result"] == "2*x2"
    doc, status = run(["lift", "tangent", "det3.mv"])
    assert status == 0 and doc["payload"]["m"] == 6
    doc, _ = run(["bracket", "forms", "det3.mv", "--forms", "ff_triple.fam"])
    assert doc["kind"] == "form"
    for argv in (["gen", "example1", "--algebra", "so4"], ["gen", "example3", "so3.sc", "--g", "x0"],
                 ["gen", "example4", "--n", "2", "--m", "3"]):
        assert run(argv)[1] == 0


def test_hamiltonian_listing():
    report, _ = run(["check", "nambu", "poincare.mv", "--hamiltonians"])
    assert report["hamiltonians"]["x2,x3"] == "(x1)*d0 + (x0)*d1"


def test_reports_are_deterministic():
    argv = ["check", "fi-random", "example1_so4_k1.mv", "--trials", "3", "--seed", "9"]
    assert run_command(argv) == run_command(argv)


def test_literal_helpers():
    assert parse_matrix("1,0;0,1/2") == [[1, 0], [0, 0.5]]
    assert parse_sparse("4:0=1,5:2=-1/2", pairs=True) == {(4, 0): 1, (5, 2): -0.5}
    assert parse_sparse("4=3", pairs=False) == {4: 3}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nambukit", "check", "nambu", "det3.mv", "--format", "text"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "verdict: pass" in proc.stdout
