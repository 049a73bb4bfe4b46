import json
import subprocess
import sys

import pytest

from hyperslice.cli import RunConfig, UsageError, build_config, main, run


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_example(capsys):
    code, out, _ = _run(["solve", "--dw", "2", "--db", "2", "--order", "3"], capsys)
    assert code == 0
    data = json.loads(out)
    names = data["variables"]
    am1 = {tuple(t["exponents"]): t["numerator"] for t in data["a"]["-1"]}
    t = tuple(1 if n == "t" else 0 for n in names)
    ttt = tuple(1 if n in ("t", "tw2", "tb2") else 0 for n in names)
    assert am1 == {t: "1", ttt: "1"}
    assert data["b"]["-1"][0]["numerator"] == "1"


def test_disks_example(capsys):
    code, out, _ = _run(["disks", "--color", "w", "--p-max", "0", "--dw", "1", "--db", "1", "--order", "1"],
                        capsys)
    assert code == 0
    res = json.loads(out)["results"]
    assert res[0]["value"] == [{"exponents": [1, 0, 0], "numerator": "1", "denominator": "1"}]


def test_verify_all_is_deterministic(capsys):
    argv = ["verify", "--suite", "all", "--dw", "2", "--db", "2", "--order", "4", "--tail", "6"]
    code1, out1, _ = _run(argv, capsys)
    code2, out2, _ = _run(argv, capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    rep = json.loads(out1)
    assert rep["pass"] and rep["failed"] == 0


def test_walks_and_cylinders_and_dobrushin(capsys):
    assert _run(["walks", "verify-appendix-a", "--d", "2", "--s-order", "4"], capsys)[0] == 0
    code, out, _ = _run(["cylinders", "--kind", "wb", "--p-max", "2", "--q-max", "2", "--order", "3"], capsys)
    assert code == 0 and len(json.loads(out)["results"]) == 4
    code, out, _ = _run(["dobrushin", "--p-max", "1", "--q-max", "1", "--order", "3"], capsys)
    assert code == 0 and len(json.loads(out)["results"]) == 4


def test_oracle_verb(capsys):
    spec = '{"kind": "disk", "colors": ["white"], "degrees": [1]}'
    code, out, _ = _run(["oracle", "--spec", spec, "--emax", "3"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["emax"] == 3 and data["variables"][0] == "t"


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "nope"],
    ["frobnicate"],
    ["disks", "--color", "green"],
    ["cylinders", "--kind", "zz"],
    ["solve", "--order", "-1"],
    ["solve", "--format", "xml"],
    ["walks", "dance"],
    ["oracle"],
    ["oracle", "--spec", "{not json"],
    ["solve", "--config", "/nonexistent/cfg"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert _run(argv, capsys)[0] == 2


def test_config_file_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# small run\ndw = 1\ndb = 1\norder = 2\n")
    c = build_config(["solve", "--config", str(cfg), "--order", "3"])
    assert (c.dw, c.db, c.order) == (1, 1, 3)
    bad = tmp_path / "bad.cfg"
    bad.write_text("order 3\n")
    with pytest.raises(UsageError):
        build_config(["solve", "--config", str(bad)])
    unknown = tmp_path / "unknown.cfg"
    unknown.write_text("colour = w\n")
    with pytest.raises(UsageError):
        build_config(["solve", "--config", str(unknown)])


def test_csv_output(tmp_path, capsys):
    out = tmp_path / "disks.csv"
    code, _, _ = _run(["disks", "--p-max", "1", "--order", "2", "--format", "csv", "--out", str(out)], capsys)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("kind,colors,degrees,route")
    assert lines[1].startswith("disk,white,0,")
    code, text, _ = _run(["verify", "--suite", "slices", "--order", "2", "--format", "csv"], capsys)
    assert code == 0 and text.startswith("identity,status,detail")


def test_run_returns_status_and_text():
    status, text = run(RunConfig(verb="solve", dw=1, db=1, order=1))
    assert status == 0 and text.endswith("\n")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hyperslice", "solve", "--order", "1", "--dw", "1", "--db", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["variables"] == ["t", "tw1", "tb1"]
