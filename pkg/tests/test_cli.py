import csv
import io
import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from frobcong.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def normalized(text):
    return re.sub(r'"elapsed_ms": \d+', '"elapsed_ms": 0', text)


@pytest.mark.parametrize(
    "argv, golden, code",
    [
        ("compute --colors 1 --upto 5 --format csv", "compute_k1_t5.csv", 0),
        ("compute --colors 1 --upto 5 --format json", "compute_k1_t5.json", 0),
        ("verify --prime 5 --residue 3 --colors 2 --step 5 --family-upto 3 --n-upto 10", "verify_cor2.json", 0),
        ("verify --prime 5 --residue 1 --colors 1 --n-upto 5", "verify_counterexample.json", 3),
        ("search --prime 5 --colors-from 1 --colors-to 2 --n-scan 50", "search_p5.json", 0),
        ("dissect --prime 5 --residue 3 --colors 2 --j-upto 2 --n-upto 10 --format csv", "dissect_k2_p5.csv", 0),
    ],
)
def test_golden(argv, golden, code, capsys):
    got_code, out = run(argv.split(), capsys)
    assert got_code == code
    assert normalized(out) == (GOLDEN / golden).read_text(encoding="utf-8")


def test_compute_examples(capsys):
    _, out = run("compute --colors 2 --upto 1".split(), capsys)
    assert out == "n,value\n0,1\n1,4\n"
    _, out = run("compute --colors 3 --upto 0".split(), capsys)
    assert out == "n,value\n0,1\n"


@pytest.mark.parametrize(
    "argv",
    [
        "compute --colors 0 --upto 5",
        "compute --colors 2 --upto 5 --method descent",
        "compute --colors 2 --upto 5 --mod 6 --method descent",
        "compute --colors 2 --upto 5 --mod 1",
        "verify --prime 5 --residue 0 --colors 1 --n-upto 5",
        "verify --prime 5 --residue 5 --colors 1 --n-upto 5",
        "verify --prime 4 --residue 1 --colors 1 --n-upto 5",
        "verify --prime 5 --colors 1 --n-upto 5",
        "verify --composite 1:5:4 --n-upto 1",
        "verify --composite 1:5:4,1:5 --n-upto 1",
        "search --prime 5 --colors-from 1 --colors-to 2 --n-scan 10",
        "dissect --prime 5 --residue 0 --colors 2 --j-upto 2 --n-upto 10",
    ],
)
def test_usage_exit_code(argv, capsys):
    code, out = run(argv.split(), capsys)
    assert code == 2
    assert out == ""


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["compute", "--colors", "x", "--upto", "3"])
    assert exc.value.code == 2


def test_csv_and_json_agree(capsys):
    base = "compute --colors 4 --upto 30 --mod 7 --method theta".split()
    _, c = run(base + ["--format", "csv"], capsys)
    _, j = run(base + ["--format", "json"], capsys)
    rows = list(csv.DictReader(io.StringIO(c)))
    rec = json.loads(j)
    assert [(int(r["n"]), r["value"]) for r in rows] == [(v["n"], v["value"]) for v in rec["results"]["values"]]
    assert rec["method"] == "theta"


def test_large_values_are_decimal_strings(capsys):
    _, out = run("compute --colors 6 --upto 120 --format json".split(), capsys)
    values = json.loads(out)["results"]["values"]
    assert all(isinstance(v["value"], str) for v in values)
    assert int(values[-1]["value"]) > 2**63


def test_record_echoes_parameters(capsys):
    _, out = run("search --prime 3 --colors-from 3 --colors-to 3 --n-scan 50".split(), capsys)
    rec = json.loads(out)
    assert rec["schema_version"] == 1
    assert rec["parameters"] == {
        "command": "search", "prime": 3, "colors_from": 3, "colors_to": 3, "n_scan": 50,
        "method": "descent", "format": "json", "out": None,
    }
    assert {"k": 3, "r": 2, "p": 3, "n_scan": 50, "status": "empirical"} in rec["results"]["candidates"]


def test_search_empty_range(capsys):
    code, out = run("search --prime 5 --colors-from 3 --colors-to 2 --n-scan 30".split(), capsys)
    assert code == 0
    assert json.loads(out)["results"]["candidates"] == []


def test_dissect_rows(capsys):
    code, out = run("dissect --prime 5 --residue 3 --colors 2 --j-upto 2 --n-upto 10".split(), capsys)
    assert code == 0
    rows = json.loads(out)["results"]["rows"]
    assert [r["j"] for r in rows] == [-2, -1, 0, 1, 2]


def test_dissect_beyond_window(capsys):
    code, out = run("dissect --prime 5 --residue 4 --colors 1 --j-upto 30 --n-upto 2 --format csv".split(), capsys)
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 1 + 61
    assert lines[1].endswith("vacuous (outside window),,")


def test_dissect_center_matches_verify(capsys):
    _, d = run("dissect --prime 7 --residue 5 --colors 1 --j-upto 1 --n-upto 8".split(), capsys)
    _, v = run("verify --prime 7 --residue 5 --colors 1 --n-upto 8".split(), capsys)
    center = [r for r in json.loads(d)["results"]["rows"] if r["j"] == 0][0]
    assert (center["status"] == "vanishes") == json.loads(v)["results"]["holds"]


def test_verify_composite_pair(capsys):
    code, out = run("verify --composite 1:5:4,1:7:5 --family-upto 0 --n-upto 1".split(), capsys)
    assert code == 0
    assert json.loads(out)["results"]["statement"].startswith("cφ_{35N+1}(35n+19)")


def test_verify_csv_counterexample(capsys):
    code, out = run("verify --prime 5 --residue 1 --colors 1 --n-upto 5 --format csv".split(), capsys)
    assert code == 3
    assert out.splitlines()[1] == "false,5,0,1,0,1,1,5"


def test_out_file(tmp_path, capsys):
    target = tmp_path / "t.csv"
    code, out = run(["compute", "--colors", "1", "--upto", "3", "--out", str(target)], capsys)
    assert code == 0 and out == ""
    assert target.read_bytes() == b"n,value\n0,1\n1,1\n2,2\n3,3\n"


def test_internal_failure_exit_1(monkeypatch, capsys):
    import frobcong.cli as cli

    def boom(*a, **kw):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli, "compute_table", boom)
    code, _ = run("compute --colors 1 --upto 3".split(), capsys)
    assert code == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "frobcong", "verify", "--prime", "5", "--residue", "1", "--colors", "1", "--n-upto", "5"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 3
    assert json.loads(proc.stdout)["results"]["counterexample"]["n"] == 0
