from __future__ import annotations

import csv
import io
import json
from importlib import resources

import jsonschema
import pytest

from crepant import tau
from crepant.cli import run

SCHEMA = json.loads(resources.files("crepant").joinpath("schemas/report.schema.json").read_text())


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_tau(capsys):
    code, out, _ = call(capsys, "tau", "1", "1")
    assert code == 0
    assert json.loads(out) == {"value": "1/24"}


def test_corr2d(capsys):
    code, out, _ = call(capsys, "corr2d", "--n", "2", "--g", "0", "--a", "1,1,1,1", "--k", "0,0,0,0")
    assert code == 0
    assert json.loads(out) == {"value": "-1/2", "unit": "t"}


def test_corr3d(capsys):
    code, out, _ = call(capsys, "corr3d", "--n", "2", "--g", "0", "--a", "1,1,1,1")
    assert json.loads(out) == {"value": "1/4", "unit": "1"}


@pytest.mark.parametrize(
    "argv",
    [
        ("tau", "x"),
        ("corr2d", "--n", "2", "--g", "0", "--a", "1,1,1"),
        ("corr2d", "--n", "2", "--g", "0", "--a", "1,1"),
        ("corr3d", "--n", "3", "--g", "0", "--a", "1,2"),
        ("verify", "crc2d", "--max-degree", "3"),
        ("verify", "nothing"),
        (),
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 2
    assert err


def test_potential_json_and_csv(capsys):
    code, out, _ = call(capsys, "potential", "2d", "--n", "2", "--g", "0", "--max-degree", "4")
    data = json.loads(out)
    assert data["series"]["terms"] == [{"exp": {"x1_0": 4}, "coeff": {"order": 1, "coeffs": ["-1/48"]}}]
    assert data["config"]["kind"] == "2d"
    code, out, _ = call(capsys, "potential", "2d", "--n", "2", "--g", "0", "--max-degree", "4", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows == [["monomial", "coefficient"], ["x1_0^4", "1:-1/48"]]


def test_empty_potential(capsys):
    code, out, _ = call(capsys, "potential", "closed3d", "--n", "2", "--g", "0", "--max-degree", "1", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["monomial,coefficient"]


def test_closed3d_table_in_u(capsys):
    code, out, _ = call(capsys, "potential", "closed3d", "--n", "2", "--g", "1", "--max-degree", "4")
    names = {k for t in json.loads(out)["series"]["terms"] for k in t["exp"]}
    assert names == {"u1"}


@pytest.mark.parametrize(
    "argv, code",
    [
        (("verify", "crc2d", "--n", "2", "--g", "0", "--max-degree", "4"), 0),
        (("verify", "crc3d", "--n", "2", "--gmax", "1", "--max-degree", "5"), 0),
        (("verify", "chern", "--max-rank-sum", "3"), 1),
        (("verify", "chern", "--max-rank-sum", "1"), 1),
        (("verify", "identities"), 0),
        (("verify", "brackets", "--seed", "5"), 0),
        (("verify", "vertex", "--n", "2", "--Q-degree", "2", "--q-order", "6"), 1),
    ],
)
def test_verify_reports_validate(capsys, tmp_path, argv, code):
    path = tmp_path / "r.json"
    got, out, _ = call(capsys, *argv, "--out", str(path))
    assert got == code
    assert out == ""
    rep = json.loads(path.read_text())
    jsonschema.validate(rep, SCHEMA)
    assert rep["ok"] == (code == 0)


def test_chern_rank_two_and_up_passes(capsys):
    code, out, _ = call(capsys, "verify", "chern", "--max-rank-sum", "4")
    rep = json.loads(out)
    assert {(f["r1"], f["r1bar"]) for f in rep["failed"]} == {(0, 1), (1, 0)}


def test_output_is_byte_identical(capsys):
    argv = ("verify", "brackets", "--seed", "11")
    _, first, _ = call(capsys, *argv)
    tau.clear_cache()
    _, second, _ = call(capsys, *argv)
    assert first == second


def test_cache_directory(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("CREPANT_CACHE_DIR", str(tmp_path))
    tau.clear_cache()
    call(capsys, "tau", "3", "2", "3", "4")
    assert (tmp_path / "tau_cache.txt").exists()
    tau.clear_cache()
    code, out, _ = call(capsys, "tau", "3", "2", "3", "4")
    assert code == 0
    assert tau.cache_size() > 0
    (tmp_path / "tau_cache.txt").write_text("0||5\n")
    tau.clear_cache()
    code, out2, err = call(capsys, "tau", "3", "2", "3", "4")
    assert out2 == out
