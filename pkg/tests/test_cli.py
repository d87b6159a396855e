import json
import subprocess
import sys

import pytest

from vermajw import cli
from vermajw.document import (BlockRecord, ConfigError, JobConfig, ResultDocument,
                              poly_from_json, poly_to_json, value_from_json, value_to_json)
from vermajw.projectors import extended_jw
from vermajw.qfield import ONE, LaurentPoly, RationalFn, encode, qint

from conftest import MU


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


# --- config ------------------------------------------------------------------

@pytest.mark.parametrize("kwargs", [
    dict(weights=["a", "a"], max_degree=1),
    dict(weights=["a"], max_degree=-1),
    dict(weights=["a"], max_degree=1, checks=["nope"]),
    dict(weights=["a"], max_degree=1, specialization={"b": 1}),
    dict(weights=["1a"], max_degree=1),
])
def test_config_invariants(kwargs):
    with pytest.raises(ConfigError):
        JobConfig(**kwargs)


def test_parse_assignment():
    assert cli.parse_assignment("mu1=-2, mu2=5") == {"mu1": -2, "mu2": 5}
    for bad in ("mu1", "mu1=x", "mu1=1,mu1=2", ","):
        with pytest.raises(ConfigError):
            cli.parse_assignment(bad)


# --- serialization -------------------------------------------------------------

def test_polynomial_schema():
    p = LaurentPoly({encode(1, [2]): 3, encode(-1): 1})
    rows = poly_to_json(p, 2)
    assert rows == [{"coeff": "1", "q": -1, "t": [0, 0]}, {"coeff": "3", "q": 1, "t": [2, 0]}]
    assert poly_from_json(rows) == p


def test_rational_coefficients_roundtrip():
    from fractions import Fraction
    x = RationalFn(LaurentPoly({encode(2, [1]): Fraction(-3, 4)}), LaurentPoly.q(-1) + 5)
    obj = value_to_json(x, 1)
    assert all(set(r) == {"coeff", "q", "t"} and len(r["t"]) == 1 for r in obj["num"] + obj["den"])
    assert value_from_json(obj) == x


def test_document_roundtrip_in_memory():
    P = extended_jw(MU[1:4], 2)
    doc = ResultDocument("compute", JobConfig(["a", "b", "c"], 2).echo(),
                         [BlockRecord.from_block(k, P.blocks[k]) for k in range(3)],
                         provenance=P.provenance)
    text = doc.dumps()
    back = ResultDocument.loads(text)
    assert back.blocks == doc.blocks
    assert back.dumps() == text


def test_unknown_format_version_rejected():
    with pytest.raises(ValueError):
        ResultDocument.loads(json.dumps({"format_version": 99, "command": "x", "config": {}}))


# --- compute -------------------------------------------------------------------

def test_compute_degree_zero(capsys):
    code, out, _ = run(["compute", "--weights", "mu1,mu2", "--max-degree", "0"], capsys)
    assert code == 0
    doc = ResultDocument.loads(out)
    assert len(doc.blocks) == 1
    assert doc.blocks[0].basis == [(0, 0)]
    assert doc.blocks[0].entries == {(0, 0): ONE}


def test_compute_degree_one_matches_projector(capsys):
    code, out, _ = run(["compute", "--weights", "mu1,mu2", "--max-degree", "1"], capsys)
    assert code == 0
    doc = ResultDocument.loads(out)
    blk = doc.blocks[1]
    s = qint(MU[1] + MU[2])
    assert blk.basis == [(0, 1), (1, 0)]
    assert blk.entries[1, 0] == qint(MU[1]) / s
    assert blk.entries[0, 0] == RationalFn.q_pow(-MU[1]) * qint(MU[2]) / s
    assert doc.config["weights"] == ["mu1", "mu2"]
    assert "timing" not in json.loads(out)


def test_compute_pole(capsys):
    ok, _, _ = run(["compute", "--weights", "mu1,mu2", "--max-degree", "1", "--at", "mu1=2,mu2=-1"], capsys)
    assert ok == 0
    code, out, err = run(["compute", "--weights", "mu1,mu2", "--max-degree", "2",
                          "--at", "mu1=2,mu2=-1"], capsys)
    assert code == cli.EXIT_POLE
    assert out == ""
    assert "pole" in err and "degree 2" in err


def test_compute_specialized_is_q_only(capsys):
    code, out, _ = run(["compute", "--weights", "a,b", "--max-degree", "2", "--at", "a=-1,b=-2"], capsys)
    assert code == 0
    doc = ResultDocument.loads(out)
    assert doc.config["specialization"] == {"a": -1, "b": -2}
    for b in doc.blocks:
        for v in b.entries.values():
            assert v.is_q_only()


def test_compute_needs_two_weights(capsys):
    code, _, err = run(["compute", "--weights", "mu1", "--max-degree", "1"], capsys)
    assert code == cli.EXIT_CONFIG and "two weights" in err


def test_timing_is_opt_in(capsys):
    code, out, _ = run(["compute", "--weights", "a,b", "--max-degree", "1", "--timing"], capsys)
    assert code == 0 and "timing" in json.loads(out)


# --- verify --------------------------------------------------------------------

def test_verify_ef_identity(capsys):
    code, out, _ = run(["verify", "--weights", "mu1,mu2", "--max-degree", "10", "--checks", "ef_identity"], capsys)
    assert code == 0
    assert json.loads(out)["checks"]["ef_identity"] == {"passed": True, "violations": []}


def test_verify_pascal_without_weights(capsys):
    code, out, _ = run(["verify", "--max-degree", "0", "--checks", "pascal"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["checks"]["pascal"]["passed"] and doc["config"]["pascal_kmax"] == 30


def test_verify_all_specialized(capsys):
    code, out, _ = run(["verify", "--weights", "a,b,c", "--max-degree", "3", "--checks", "all",
                        "--at", "a=-1,c=-3"], capsys)
    assert code == 0
    assert sorted(json.loads(out)["checks"]) == sorted(cli.CHECK_FUNCS)


def test_verify_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setitem(cli.CHECK_FUNCS, "pascal",
                        lambda cfg: [cli._v("pascal", 3, 1, None, "injected")])
    code, out, _ = run(["verify", "--max-degree", "0", "--checks", "pascal"], capsys)
    assert code == cli.EXIT_CHECK_FAILED
    rep = json.loads(out)["checks"]["pascal"]
    assert rep["passed"] is False
    assert rep["violations"] == [{"check": "pascal", "degree": 3, "row": 1, "col": None, "detail": "injected"}]


def test_verify_config_errors(capsys):
    assert run(["verify", "--weights", "a", "--max-degree", "1", "--checks", "oracle"], capsys)[0] == 2
    assert run(["verify", "--weights", "a,b", "--max-degree", "1", "--checks", "bogus"], capsys)[0] == 2
    assert run(["verify", "--weights", "a,b", "--max-degree", "1", "--checks", "pascal", "--at", "z=1"], capsys)[0] == 2


def test_verify_thread_env(capsys, monkeypatch):
    monkeypatch.setenv(cli.THREADS_ENV, "zero")
    assert run(["verify", "--max-degree", "0", "--checks", "pascal"], capsys)[0] == cli.EXIT_CONFIG


# --- tl ------------------------------------------------------------------------

def test_tl_one(capsys):
    code, out, _ = run(["tl", "--n", "1"], capsys)
    doc = ResultDocument.loads(out)
    assert code == 0
    assert [b.entries for b in doc.blocks] == [{(0, 0): ONE}, {(0, 0): ONE}]
    assert doc.checks["idempotent"]["passed"]


def test_tl_two(capsys):
    code, out, _ = run(["tl", "--n", "2"], capsys)
    doc = ResultDocument.loads(out)
    assert code == 0
    b1 = doc.blocks[1]
    inv2 = ONE / qint(2)
    i01, i10 = b1.basis.index((0, 1)), b1.basis.index((1, 0))
    # Id + e1/[2] with e1 v10 = v01 - q^-1 v10 and e1 v01 = -q v01 + v10
    assert b1.entries[i01, i10] == inv2
    assert b1.entries[i10, i10] == ONE - RationalFn.q_pow(-1) * inv2


def test_tl_guard(capsys):
    code, _, err = run(["tl", "--n", "9"], capsys)
    assert code == cli.EXIT_CONFIG and "max-n" in err
    assert run(["tl", "--n", "0"], capsys)[0] == cli.EXIT_CONFIG


# --- specialize and files --------------------------------------------------------

def test_specialize_file(tmp_path, capsys):
    src = tmp_path / "p.json"
    assert run(["compute", "--weights", "a,b", "--max-degree", "2", "--out", str(src)], capsys)[0] == 0
    code, out, _ = run(["specialize", "--in", str(src), "--at", "a=-1,b=-2"], capsys)
    assert code == 0
    via_file = ResultDocument.loads(out)
    _, direct, _ = run(["compute", "--weights", "a,b", "--max-degree", "2", "--at", "a=-1,b=-2"], capsys)
    assert via_file.blocks == ResultDocument.loads(direct).blocks
    assert via_file.config["specialization"] == {"a": -1, "b": -2}


def test_specialize_pole_and_errors(tmp_path, capsys):
    src = tmp_path / "p.json"
    run(["compute", "--weights", "a,b", "--max-degree", "2", "--out", str(src)], capsys)
    assert run(["specialize", "--in", str(src), "--at", "a=2,b=-1"], capsys)[0] == cli.EXIT_POLE
    assert run(["specialize", "--in", str(src), "--at", "zz=1"], capsys)[0] == cli.EXIT_CONFIG
    assert run(["specialize", "--in", str(tmp_path / "missing.json"), "--at", "a=1"], capsys)[0] == cli.EXIT_IO
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["specialize", "--in", str(bad), "--at", "a=1"], capsys)[0] == cli.EXIT_IO


def test_unwritable_output(tmp_path, capsys):
    out = tmp_path / "nodir" / "x.json"
    assert run(["compute", "--weights", "a,b", "--max-degree", "0", "--out", str(out)], capsys)[0] == cli.EXIT_IO


def test_usage_error_exit_code(capsys):
    assert run(["frobnicate"], capsys)[0] == cli.EXIT_CONFIG
    assert run(["compute", "--weights", "a,b"], capsys)[0] == cli.EXIT_CONFIG


# --- determinism -----------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ["compute", "--weights", "mu1,mu2,mu3", "--max-degree", "2"],
    ["verify", "--weights", "mu1,mu2", "--max-degree", "3", "--checks", "idempotent,oracle"],
    ["tl", "--n", "3"],
])
def test_byte_identical_runs(argv, capsys):
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b
    assert ResultDocument.loads(a).dumps() == a


def test_console_entry_point_in_subprocess():
    cmd = [sys.executable, "-m", "vermajw.cli", "compute", "--weights", "a,b", "--max-degree", "1"]
    a = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert a == b and json.loads(a)["format_version"] == 1
