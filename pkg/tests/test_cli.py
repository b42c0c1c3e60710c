from __future__ import annotations

import json
import subprocess
import sys

import pytest

from carnotkit.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def built(tmp_path, capsys):
    def make(kind, *flags):
        path = tmp_path / f"{kind}{'_'.join(flags).replace('-', '').replace(',', '_').replace('/', 'o')}.json"
        code, _, err = run(["construct", kind, *flags, "-o", str(path)], capsys)
        assert code == 0, err
        return str(path)

    return make


def test_construct_carnot_c(capsys):
    code, out, _ = run(["construct", "carnot_c", "--n", "2", "--r", "3"], capsys)
    data = json.loads(out)
    assert code == 0 and data["dim"] == 5
    assert data["layers"] == [1, 1, 2, 3, 3] and data["marks"]["layers"] == [2, 1, 2]


def test_construct_model_m_and_rolling(capsys):
    _, out, _ = run(["construct", "model_m", "--n", "3", "--a1", "1", "--a2", "0"], capsys)
    assert json.loads(out)["dim"] == 12
    _, out, _ = run(["construct", "rolling_sum", "--n", "2", "--rho", "1,-1"], capsys)
    data = json.loads(out)
    assert data["dim"] == 6
    assert len(data["marks"]["horizontal"]) == 2 and len(data["marks"]["isotropy"]) == 1


@pytest.mark.parametrize(
    "kind,flags",
    [
        ("free", ["--n", "3", "--r", "3"]),
        ("carnot_c", ["--n", "3", "--r", "4"]),
        ("c3_quotient", ["--n", "3"]),
        ("riemannian", ["--n", "3", "--rho", "-1/2"]),
        ("model_m", ["--n", "2", "--a1", "1", "--a2", "1"]),
        ("heisenberg", ["--k", "2"]),
        ("engel", []),
        ("rolling_sum", ["--n", "3", "--rho", "0,1,2"]),
    ],
)
def test_construct_then_jacobi(kind, flags, built, capsys):
    path = built(kind, *flags)
    code, out, _ = run(["check", "jacobi", path, "--expect", "pass"], capsys)
    assert code == 0 and json.loads(out)["verdict"] == "pass"


def test_holonomy_full(built, capsys):
    path = built("model_m", "--n", "2", "--a1", "1", "--a2", "1")
    code, out, _ = run(["check", "holonomy", path], capsys)
    assert code == 0 and json.loads(out)["verdict"] == "full"


def test_model_engel_false_with_witness(built, capsys):
    path = built("engel")
    code, out, _ = run(["check", "model", path], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] is False and rep["witness"]["kind"] == "derivation"
    assert {f["id"] for f in rep["paper_flags"]} == {
        "model_m_d1_term",
        "model_m_holonomy",
        "rolling_sum_sign",
        "heisenberg_index",
    }


def test_expect_mismatch_exits_one(built, capsys):
    path = built("engel")
    code, out, _ = run(["check", "model", path, "--expect", "true"], capsys)
    assert code == 1 and json.loads(out)["expect"]["matched"] is False


def test_other_checks(built, capsys):
    rs = built("rolling_sum", "--n", "2", "--rho", "1,-1")
    flat = built("rolling_sum", "--n", "2", "--rho", "1,0")
    c23 = built("carnot_c", "--n", "2", "--r", "3")
    code, out, _ = run(["check", "growth", rs], capsys)
    assert json.loads(out)["dims"] == [2, 3, 5]
    code, out, _ = run(["check", "flat", flat, "--expect", "true"], capsys)
    assert code == 0
    code, out, _ = run(["check", "nilpotentize", rs], capsys)
    rep = json.loads(out)
    assert rep["dims"] == [2, 1, 2]
    cone = rs + ".cone.json"
    with open(cone, "w") as fh:
        json.dump(rep["algebra"], fh)
    code, out, _ = run(["check", "carnot-iso", cone, c23, "--expect", "yes"], capsys)
    assert code == 0


def test_equivariant(capsys):
    code, out, _ = run(["check", "equivariant", "--src", "vector:3", "--dst", "adjoint:3", "--group", "SO"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == 1
    assert rep["basis"] == [[["0", "0", "1"], ["0", "-1", "0"], ["1", "0", "0"]]]
    code, out, _ = run(
        ["check", "equivariant", "--src", "tensor:adjoint:3,vector:3", "--dst", "vector:3", "--expect", "1"], capsys
    )
    assert code == 0


def test_input_errors_exit_two(tmp_path, built, capsys):
    assert run(["construct", "free", "--n", "4", "--r", "5"], capsys)[0] == 2
    assert run(["construct", "model_m", "--n", "3", "--a1", "x"], capsys)[0] == 2
    assert run(["construct", "carnot_c", "--n", "2"], capsys)[0] == 2
    assert run(["construct", "model_m", "--n", "1"], capsys)[0] == 2
    assert run(["check", "jacobi", str(tmp_path / "missing.json")], capsys)[0] == 2
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert run(["check", "jacobi", str(junk)], capsys)[0] == 2
    stuck = built("rolling_sum", "--n", "2", "--rho", "1,1")
    code, _, err = run(["check", "nilpotentize", stuck], capsys)
    assert code == 2 and "stabilizes" in err
    assert run(["check", "equivariant", "--src", "spin:3", "--dst", "vector:3"], capsys)[0] == 2
    big = built("free", "--n", "3", "--r", "4")
    assert run(["check", "model", big, "--max-dim", "10"], capsys)[0] == 2


def test_reports_are_deterministic(built, capsys):
    path = built("model_m", "--n", "3", "--a1", "2", "--a2", "-1")
    first = run(["check", "holonomy", path], capsys)[1]
    second = run(["check", "holonomy", path], capsys)[1]
    assert first == second
    a = run(["construct", "c3_quotient", "--n", "3"], capsys)[1]
    b = run(["construct", "c3_quotient", "--n", "3"], capsys)[1]
    assert a == b


def test_module_entry_point(tmp_path):
    out = tmp_path / "e.json"
    subprocess.run([sys.executable, "-m", "carnotkit", "construct", "engel", "-o", str(out)], check=True)
    res = subprocess.run(
        [sys.executable, "-m", "carnotkit", "check", "jacobi", str(out), "--expect", "pass"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0 and json.loads(res.stdout)["verdict"] == "pass"


def test_verify_paper(capsys):
    code, out, _ = run(["check", "verify-paper"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "pass"
    assert [c["id"] for c in rep["claims"]] == [f"C{i}" for i in range(1, 11)]
