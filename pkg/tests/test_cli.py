import json
import os
from fractions import Fraction

import pytest

from smallfrac.cli import main
from smallfrac.runner import EXPONENT_COLUMNS, MEANVALUE_COLUMNS

from conftest import parse_csv


def csv_columns():
    from importlib import resources
    return json.loads(resources.files("smallfrac").joinpath("schemas", "csv_columns.json").read_text())


def run_cli(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_exponents_csv_k6(capsys):
    rc, out, _ = run_cli(capsys, "exponents", "--k", "6", "--problem", "iii", "--s", "1..56")
    assert rc == 0
    assert out.startswith("# spec: ")
    assert "\r\n" in out
    rows = parse_csv(out)
    assert list(rows[0].keys()) == EXPONENT_COLUMNS == csv_columns()["exponents"]
    ours = {int(r["s"]): r for r in rows if r["source"] in ("meanvalue:form", "meanvalue:form-many")}
    assert sorted(ours) == list(range(1, 57))
    for s in range(1, 31):
        assert Fraction(ours[s]["exponent_exact"]) == Fraction(s, 30)


def test_meanvalue_csv(capsys):
    rc, out, _ = run_cli(capsys, "meanvalue", "--s", "2", "--k", "2", "--nmax", "2")
    assert rc == 0
    rows = parse_csv(out)
    assert rows[-1]["count"] == "6"
    assert list(rows[0].keys()) == MEANVALUE_COLUMNS == csv_columns()["meanvalue"]


def test_minimize_poly_json(capsys, validate):
    rc, out, _ = run_cli(capsys, "minimize", "poly", "--k", "2", "--coeffs", "1/2,1/2", "--n", "4")
    assert rc == 0
    doc = validate(json.loads(out), "minimize")
    assert doc["result"]["value"] == "0"
    assert doc["result"]["argmin"] == 1


def test_weyl_json_schema(capsys, validate):
    rc, out, _ = run_cli(capsys, "weyl", "--k", "2", "--coeffs", "pi,1/3", "--n", "100")
    assert rc == 0
    validate(json.loads(out), "weyl")


def test_recover_plant(capsys, validate):
    rc, out, _ = run_cli(capsys, "recover", "--k", "3", "--coeffs", "0,0,1/7", "--n", "343",
                         "--eps", "0.15")
    assert rc == 0
    doc = validate(json.loads(out), "recover")
    assert doc["result"]["q"] == 7
    assert all(doc["result"]["checks"].values())


def test_recover_not_found_exits_zero(capsys, validate):
    rc, out, _ = run_cli(capsys, "recover", "--k", "3", "--coeffs", "0,0,1/7", "--n", "343",
                         "--eps", "0.1")
    assert rc == 0
    doc = validate(json.loads(out), "recover")
    assert doc["result"]["found"] is False


@pytest.mark.parametrize("kind,args", [
    ("qm", ["--k", "3", "--coeffs", "1/4,0,1/8", "--n", "1000", "--eps", "0.05"]),
    ("twostep", ["--k", "6", "--alpha-k", "sqrt2", "--alpha-1", "pi", "--n", "1000"]),
])
def test_pipeline_schema(capsys, validate, kind, args):
    rc, out, _ = run_cli(capsys, "pipeline", kind, *args)
    assert rc == 0
    validate(json.loads(out), "pipeline")


def test_scan_phi_slope(capsys, validate):
    rc, out, _ = run_cli(capsys, "scan", "--generator", "phi", "--k", "1",
                         "--n-list", "10,100,1000,10000")
    assert rc == 0
    doc = validate(json.loads(out), "scan")
    assert abs(doc["result"]["trials"][0]["slope"] + 1) < 0.1


def test_scan_dyadic_excludes_zero_minima(capsys):
    rc, out, _ = run_cli(capsys, "scan", "--generator", "dyadic", "--k", "2",
                         "--n-list", "10,100,1000,10000", "--seed", "3")
    assert rc == 0
    trial = json.loads(out)["result"]["trials"][0]
    assert trial["excluded"] or trial["slope"] is not None


def test_budget_refusal_exit_2(capsys):
    rc, _, err = run_cli(capsys, "weyl", "--k", "2", "--coeffs", "1/3,1/5", "--n", "10",
                         "--budget", "5")
    assert rc == 2
    assert "budget" in err


def test_out_of_range_exit_2(capsys):
    rc, _, _ = run_cli(capsys, "pipeline", "qm", "--k", "6", "--coeffs", "0,0,0,0,0,1/3",
                       "--n", "1000", "--eps", "0.05")
    assert rc == 2


def test_domain_error_exit_64(capsys):
    rc, _, _ = run_cli(capsys, "weyl", "--k", "2", "--coeffs", "1/0,1/5", "--n", "10")
    assert rc == 64


def test_usage_error_exit_64(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["weyl", "--k", "2"])
    assert exc.value.code == 64
    capsys.readouterr()


def test_out_is_written_atomically(tmp_path, capsys):
    target = tmp_path / "ex.csv"
    rc, out, _ = run_cli(capsys, "exponents", "--k", "8", "--out", str(target))
    assert rc == 0 and out == ""
    assert target.read_bytes().startswith(b"# spec: ")
    assert [p.name for p in tmp_path.iterdir()] == ["ex.csv"]


@pytest.mark.parametrize("argv", [
    ["weyl", "--k", "3", "--coeffs", "e,phi,pi", "--n", "70000"],
    ["minimize", "poly", "--k", "2", "--coeffs", "sqrt2,pi", "--n", "70000"],
    ["meanvalue", "--s", "1..2", "--k", "1..2", "--nmax", "6"],
])
def test_threads_do_not_change_bytes(tmp_path, capsys, argv):
    blobs = []
    for threads in ("1", "3"):
        path = tmp_path / f"out{threads}"
        assert run_cli(capsys, *argv, "--threads", threads, "--out", str(path))[0] == 0
        blobs.append(path.read_bytes())
    assert blobs[0] == blobs[1]


def test_csv_rows_have_crlf(tmp_path, capsys):
    path = tmp_path / "m.csv"
    run_cli(capsys, "meanvalue", "--s", "1", "--k", "1", "--nmax", "3", "--out", str(path))
    body = path.read_bytes().split(b"\n", 1)[1]
    assert body.count(b"\r\n") == body.count(b"\n")
    assert os.path.getsize(path) > 0
