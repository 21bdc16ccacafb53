import csv
import io
import json
import re

import pytest

from powmon.cli import main, parse_range
from powmon.ground import cyclic
from powmon.powset import parse_subset

SET_RE = re.compile(r"\{[0-9,]*\}")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_atoms_text(capsys):
    code, out, _ = run(capsys, "atoms", "--cyclic", "5", "--variant", "reduced")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("# 4 atoms")
    assert lines[1:] == ["{0,1}", "{0,2}", "{0,3}", "{0,4}"]


def test_atoms_examples(capsys):
    _, out, _ = run(capsys, "atoms", "--cyclic", "9")
    assert "{0,2,3,4}" in out.splitlines()
    _, out, _ = run(capsys, "atoms", "--cyclic", "4")
    assert "{0,2}" not in out.splitlines()


def test_atoms_json_and_csv(capsys):
    _, out, _ = run(capsys, "atoms", "--cyclic", "6", "--format", "json", "--no-cache")
    doc = json.loads(out)
    assert doc["schema_version"] == 1 and len(doc["atoms"]) == 14
    _, out, _ = run(capsys, "atoms", "--cyclic", "6", "--variant", "restricted", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["set", "size"] and len(rows) == 31


def test_atoms_table_file(capsys, tmp_path):
    path = tmp_path / "v4.txt"
    path.write_text("4\n0 1 2 3\n1 0 3 2\n2 3 0 1\n3 2 1 0\n")
    code, out, _ = run(capsys, "atoms", "--table", str(path), "--variant", "restricted")
    assert code == 0 and out.startswith("#")


def test_factor_examples(capsys):
    code, out, _ = run(capsys, "factor", "--cyclic", "7", "--set", "{0,1,2,3,4}")
    assert code == 0 and "L^m = {2,3,4}" in out
    _, out, _ = run(capsys, "factor", "--cyclic", "3", "--set", "{0,1,2}")
    assert "3 minimal factorization class(es)" in out and "L^m = {2}" in out
    _, out, _ = run(capsys, "factor", "--cyclic", "5", "--set", "{0}")
    assert "unit" in out and "L^m = {0}" in out


def test_factor_json_csv(capsys):
    _, out, _ = run(capsys, "factor", "--cyclic", "5", "--set", "{0,1,2}", "--format", "json", "--lmax", "4")
    doc = json.loads(out)
    assert doc["classes"] == [["{0,1}", "{0,1}"]] and doc["nr"] == [True]
    assert doc["minimal_lengths"]["values"] == [2] and doc["lengths"]["truncated"] is True
    _, out, _ = run(capsys, "factor", "--cyclic", "3", "--set", "{0,1,2}", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["class", "length", "nr"] and rows[1] == ["{0,1}+{0,1}", "2", "1"]


def test_factor_restricted_and_natural(capsys):
    code, out, _ = run(capsys, "factor", "--cyclic", "5", "--set", "{1,2,3}", "--variant", "restricted")
    assert code == 0 and "L^m = {2}" in out
    code, out, _ = run(capsys, "factor", "--natural", "20", "--set", "{0,1,2}", "--lmax", "6")
    assert code == 0 and "L up to 6 = {2}" in out


def test_factor_warns_on_reduction(capsys, caplog):
    code, out, _ = run(capsys, "factor", "--cyclic", "5", "--set", "{0,6}")
    assert code == 0 and out.startswith("{0,1}")
    assert "reduced mod 5" in caplog.text


@pytest.mark.parametrize("argv", [
    ["factor", "--cyclic", "5", "--set", "{0,x}"],
    ["factor", "--cyclic", "5", "--set", "{1,2}"],
    ["factor", "--natural", "4", "--set", "{0,9}"],
    ["atoms", "--table", "/nonexistent/table.json"],
    ["atoms", "--cyclic", "0"],
    ["verify", "--suite", "nope"],
    ["verify", "--suite", "atomicity", "--n", "9..3"],
    ["bogus"],
])
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_bound_refusal_exit_3(capsys):
    code, _, err = run(capsys, "atoms", "--cyclic", "20", "--no-cache")
    assert code == 3 and "bound" in err
    code, _, _ = run(capsys, "atoms", "--cyclic", "9", "--census-bound", "8", "--no-cache")
    assert code == 3


def test_verify_pass_and_fail(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--suite", "atomicity", "--suite", "bridge", "--n", "3..5")
    assert code == 0 and "5/5 checks without failure" in out
    target = tmp_path / "reports.json"
    code, out, _ = run(capsys, "verify", "--suite", "interval", "--n", "5", "--format", "json",
                       "--output", str(target))
    assert code == 1
    assert json.loads(out) == json.loads(target.read_text())
    assert json.loads(out)[0]["verdict"] == "fail"


def test_verify_hmf(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "hmf", "--n", "3,5")
    assert code == 0 and "C3xC3" in out


def test_census_sweep_and_warm_cache(capsys, tmp_path):
    code, out, _ = run(capsys, "census-sweep", "--n", "3..6", "--cache-dir", str(tmp_path))
    assert code == 0 and len(out.splitlines()) == 4
    path = tmp_path / "atoms-cyclic-6-reduced.json"
    cold = path.read_bytes()
    _, warm_out, _ = run(capsys, "atoms", "--cyclic", "6", "--format", "json", "--cache-dir", str(tmp_path))
    _, fresh_out, _ = run(capsys, "atoms", "--cyclic", "6", "--format", "json", "--no-cache")
    assert warm_out == fresh_out and path.read_bytes() == cold
    assert warm_out == cold.decode()


def test_printed_sets_round_trip(capsys):
    outputs = [
        run(capsys, "atoms", "--cyclic", "7")[1],
        run(capsys, "factor", "--cyclic", "7", "--set", "{0,1,2,3,4,5}")[1],
        run(capsys, "verify", "--suite", "atomicity", "--n", "4", "--format", "json")[1],
    ]
    g = cyclic(7)
    found = 0
    for text in outputs:
        for literal in SET_RE.findall(text):
            if literal == "{}":
                continue
            assert str(parse_subset(literal, g)) == literal
            found += 1
    assert found > 20


def test_parse_range():
    assert parse_range("5..7") == [5, 6, 7]
    assert parse_range("3, 7..8") == [3, 7, 8]
    with pytest.raises(ValueError):
        parse_range("")
    with pytest.raises(ValueError):
        parse_range("a..b")


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "powmon", "atoms", "--cyclic", "3", "--no-cache"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "{0,1}" in proc.stdout
