from __future__ import annotations

import csv
import io
import json
import shutil
import subprocess

import pytest

from hpqkit.cli import main
from hpqkit.exact import parse_poly
from hpqkit.serialize import poly_from_json, report_from_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_dim(capsys):
    assert run(capsys, "dim", "--n", "2", "--p", "1", "--q", "1")[:2] == (0, "3\n")
    code, d = run_json(capsys, "dim", "--n", "3", "--p", "2", "--q", "1")
    assert code == 0 and d["dim"] == 15


def test_product_report(capsys):
    code, d = run_json(capsys, "product", "--n", "2", "--left", "2,1", "--right", "2,1")
    assert code == 0 and d["match"] is False and d["missing"] == [[3, 1]]
    rep = report_from_json(d)
    assert (3, 1) not in rep.support


def test_pattern_closure(capsys):
    code, out, _ = run(capsys, "pattern-closure", "--seed", "(1,1)", "--maxdeg", "6")
    assert code == 0 and out.strip() == "(0,0);(1,1);(2,2);(3,3)"
    code, out, _ = run(capsys, "pattern-closure", "--seed", "(1,0);(0,1)", "--maxdeg", "2", "--rule", "plus")
    # the plus rule never reaches (0,0)
    assert out.strip() == "(0,1);(0,2);(1,0);(1,1);(2,0)"


def test_basis_json_has_exact_gram(capsys):
    code, d = run_json(capsys, "basis", "--n", "2", "--p", "1", "--q", "1")
    assert code == 0 and len(d["basis"]) == 3
    assert all(isinstance(x["re"], str) and "/" in x["re"] for row in d["gram"] for x in row)
    for b in d["basis"]:
        assert poly_from_json(b).laplacian().is_zero


def test_zonal(capsys):
    code, d = run_json(capsys, "zonal", "--n", "2", "--p", "1", "--q", "0", "--point", "3/5,4/5")
    assert code == 0
    assert poly_from_json(d["kernel"]) == parse_poly("6/5*z1 + 8/5*z2", 2)
    assert d["value_at_point"] == {"re": "2/1", "im": "0/1"}


def test_project_and_support(capsys):
    code, out, _ = run(capsys, "project", "--n", "2", "--p", "1", "--q", "1", "--poly", "z1*w1")
    assert parse_poly(out.strip(), 2) == parse_poly("1/2*z1*w1 - 1/2*z2*w2", 2)
    code, out, _ = run(capsys, "support", "--n", "2", "--poly", "z1*w1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["bidegree"] for r in rows] == ["(0,0)", "(1,1)"]


def test_poly_from_file(capsys, tmp_path):
    f = tmp_path / "f.txt"
    f.write_text("z1^2 + w2\n")
    code, out, _ = run(capsys, "support", "--n", "2", "--poly", f"@{f}")
    assert code == 0 and "(2,0)" in out and "(0,1)" in out


def test_output_file(capsys, tmp_path):
    target = tmp_path / "rep.json"
    code, out, _ = run(capsys, "product", "--n", "3", "--left", "1,1", "--right", "1,1", "--format", "json",
                       "--output", str(target))
    assert code == 0
    assert json.loads(target.read_text())["match"] is True


def test_classify(capsys):
    code, out, _ = run(capsys, "pattern-classify", "--pattern", "(1,0);(0,1)", "--close", "--maxdeg", "6")
    assert code == 0 and "G(d=1)" in out
    code, _, err = run(capsys, "pattern-classify", "--pattern", "(1,0);(0,1)")
    assert code == 2 and err


def test_mclosure(capsys):
    code, d = run_json(capsys, "pattern-mclosure", "--pattern", "(1,0);(0,1)", "--maxdeg", "3")
    assert code == 0 and d["space"] == "plurih"


def test_algebra_check_exit_codes(capsys):
    code, d = run_json(capsys, "algebra-check", "--n", "2", "--family", "plurih", "--maxdeg", "3")
    assert code == 1 and d["uniform"]["escaping"] == [1, 1]
    code, d = run_json(capsys, "algebra-check", "--n", "1", "--family", "plurih", "--maxdeg", "3")
    assert code == 0 and d["is_algebra"] is True
    code, d = run_json(capsys, "algebra-check", "--n", "2", "--pattern", "(0,0);(1,0);(2,0)")
    assert code == 0


def test_mc_commands(capsys):
    code, d = run_json(capsys, "mc", "--check", "haar", "--n", "2", "--poly", "z1^2*w1^2",
                       "--point", "0.6,0.8", "--samples", "20000")
    assert code == 0 and d["agrees"]
    code, d = run_json(capsys, "mc", "--check", "ladder", "--n", "2", "--p", "1", "--q", "0",
                       "--a", "0.5,0", "--samples", "20000")
    assert code == 0 and d["ok"]
    code, d = run_json(capsys, "mc", "--check", "project", "--n", "2", "--poly", "z1", "--a", "0.5,0",
                       "--p", "2", "--q", "0", "--samples", "100000")
    assert d["nonzero"] and abs(d["estimate"]["value"]["re"] + 0.375) < 0.02


def test_mc_seed_reproducible(capsys):
    argv = ["mc", "--check", "integrate", "--n", "3", "--poly", "z1*w2^2*z2", "--samples", "30000", "--seed", "9"]
    a = run_json(capsys, *argv)
    b = run_json(capsys, *argv, "--threads", "3")
    assert a[1]["estimate"] == b[1]["estimate"]


def test_exact_outputs_bit_identical(capsys):
    argv = ["support", "--n", "3", "--poly", "z1^2*w2*w3 - 2*z2*w2", "--format", "json"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


@pytest.mark.parametrize(
    "argv",
    [
        ["dim", "--n", "0", "--p", "1", "--q", "1"],
        ["project", "--n", "2", "--p", "1", "--q", "1", "--poly", "z3"],
        ["project", "--n", "2", "--p", "1", "--q", "1", "--poly", "z1 +"],
        ["zonal", "--n", "2", "--p", "1", "--q", "0", "--point", "1/2,1/2"],
        ["zonal", "--n", "2", "--p", "1", "--q", "0", "--point", "1,0,0"],
        ["product", "--n", "3", "--left", "7,0", "--right", "1,0"],
        ["product", "--n", "3", "--left", "x", "--right", "1,0"],
        ["pattern-closure", "--seed", "(1,1", "--maxdeg", "3"],
        ["algebra-check", "--n", "2", "--family", "Nope"],
        ["verify", "nosuch"],
        ["mc", "--check", "ladder", "--n", "2", "--p", "1", "--q", "0"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == 2


def test_guard_can_be_lifted(capsys):
    code, d = run_json(capsys, "product", "--n", "2", "--left", "7,0", "--right", "0,1", "--no-guard")
    assert code == 0 and d["match"]


def test_verify_suite(capsys):
    code, d = run_json(capsys, "verify", "patterns")
    assert code == 0 and d["passed"]
    code, d = run_json(capsys, "verify", "product-span", "--n", "3", "--maxdeg", "2", "--rule", "plus")
    assert code == 1 and d["first_counterexample"].startswith("product --n 3")


@pytest.mark.skipif(shutil.which("hpqkit") is None, reason="console script not installed")
def test_console_script():
    out = subprocess.run(["hpqkit", "dim", "--n", "2", "--p", "2", "--q", "1"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "4"
