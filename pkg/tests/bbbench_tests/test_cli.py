import csv
import json
import os
import re
import subprocess
import sys

import pytest


# Change into directory where test_cli.py lives
@pytest.fixture(autouse=True)
def change_test_dir(request, monkeypatch):
    monkeypatch.chdir(request.fspath.dirname)


BBBENCH = f"{sys.executable} -m bbbench -B --no-sys-config"

# wide console, so that log lines are not wrapped
_ENV = dict(os.environ, COLUMNS="400")


def run(command):
    """Runs command, returns tuple of exit code, output"""
    print(f"running: {command}")
    try:
        return 0, subprocess.check_output(command, shell=True, stderr=subprocess.STDOUT, env=_ENV).strip().decode()
    except subprocess.CalledProcessError as exc:
        return exc.returncode, exc.output.strip().decode()

def verify_output(output, *regexes):
    """Returns true if the output contains lines matching the regexes in sequence (possibly with other lines in between)"""
    regexes = list(regexes[::-1])
    for line in output.split("\n"):
        if regexes and re.search(regexes[-1], line):
            regexes.pop()
    if regexes:
        print("Error, the following regexes did not match the output:")
        for regex in regexes:
            print(f"  {regex}")
        return False
    return True


def read_csv(path):
    with open(path, newline="") as file:
        return list(csv.DictReader(file))


def test_version():
    retcode, output = run(f"{BBBENCH} --version")
    assert retcode == 0
    assert "version" in output


def test_run(tmp_path):
    out = tmp_path / "summary.csv"
    retcode, output = run(f"{BBBENCH} run --methods bb1,bb3 --eps 1e-1,1e-2 --out {out}")
    print(output)
    assert retcode == 0
    rows = read_csv(out)
    assert [(row["method"], row["epsilon"]) for row in rows] == \
        [("bb1", "0.1"), ("bb1", "0.01"), ("bb3", "0.1"), ("bb3", "0.01")]
    assert all(row["alpha0"] == "0.001" for row in rows)


def test_run_quadratic_json(tmp_path):
    out = tmp_path / "summary.json"
    traces = tmp_path / "traces"
    retcode, output = run(f"{BBBENCH} run --problem quadratic --diag 1,10 --methods bb3 --eps 1e-6 "
                          f"--stop gradnorm --format json --out {out} --trace-dir {traces}")
    print(output)
    assert retcode == 0
    with open(out) as file:
        records = json.load(file)
    assert len(records) == 1
    assert records[0]["status"] == "converged"
    assert os.listdir(traces) == ["quadratic-bb3-eps1e-06-alpha00.001.csv"]


def test_config_settings(tmp_path):
    out = tmp_path / "summary.csv"
    retcode, output = run(f"{BBBENCH} -s bench.max_iter=1 -s 'bench.methods=[bb2]' run --out {out}")
    print(output)
    assert retcode == 0
    rows = read_csv(out)
    assert len(rows) == 4
    assert all(row["status"] == "max-iter" and row["iterations"] == "1" for row in rows)


def test_bad_arguments():
    retcode, output = run(f"{BBBENCH} run --eps 0")
    assert retcode != 0
    assert verify_output(output, "--eps")
    retcode, output = run(f"{BBBENCH} run --bogus")
    assert retcode != 0
    retcode, output = run(f"{BBBENCH} -s bench.max_iter=lots run")
    assert retcode != 0


def test_table1(tmp_path):
    out = tmp_path / "table1.md"
    retcode, output = run(f"{BBBENCH} table1 --alpha0 1e-3 --format md --out {out}")
    print(output)
    assert retcode == 0
    assert verify_output(output, "alpha0=0.001 bb1: produced .* published 154 160 166 172",
                                 "alpha0=0.001 bb3: produced .* published 32 38 44 46")
    lines = out.read_text().splitlines()
    assert lines[0] == "| epsilon | bb1 | bb2 | bb3 |"
    assert [line.split(" | ")[0] for line in lines[2:]] == ["| 0.1", "| 0.01", "| 0.0001", "| 1e-08"]


def test_verify():
    retcode, output = run(f"{BBBENCH} verify --pairs 200 --seed 3")
    print(output)
    assert retcode == 0
    assert verify_output(output, "seed 3: max relative error", "all 200 pair")
