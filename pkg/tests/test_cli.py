import json
import subprocess
import sys

import pytest

from snakepoly.cli import EXIT_BUDGET, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main, run_verify


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_gf_expand_json(capsys):
    code, out = run(capsys, "gf", "expand", "--name", "pdsnd:4", "--order", "6")
    doc = json.loads(out.out)
    assert code == EXIT_OK and doc["schema"] == 1
    assert doc["parameters"] == {"name": "pdsnd:4", "order": 6}
    assert doc["coefficients"] == ["1", "1", "4", "22", "100", "448", "2002"]


def test_gf_expand_csv(capsys):
    code, out = run(capsys, "gf", "expand", "--name", "sne", "--order", "5", "--format", "csv")
    lines = out.out.splitlines()
    assert lines[0].startswith("# schema=1") and lines[1] == "n,count" and lines[-1] == "5,8"


def test_unknown_gf_is_usage_error(capsys):
    code, out = run(capsys, "gf", "expand", "--name", "nope")
    assert code == EXIT_USAGE


def test_enumerate_snakes(capsys):
    code, out = run(capsys, "enumerate", "--class", "snake", "--dim", "2", "--n", "7")
    assert code == EXIT_OK and json.loads(out.out)["count"] == "198"


def test_enumerate_inscribed_and_emit(capsys, tmp_path):
    path = tmp_path / "cells.jsonl"
    code, out = run(capsys, "enumerate", "--class", "pds", "--n", "3", "--inscribed", "2x2", "--emit", str(path))
    assert code == EXIT_OK and json.loads(out.out)["count"] == "4"
    assert len(path.read_text().splitlines()) == 4


def test_enumerate_memory_budget(capsys):
    code, out = run(capsys, "enumerate", "--n", "12", "--memory-budget", "10000")
    assert code == EXIT_BUDGET


def test_inscribed_verify(capsys):
    code, out = run(capsys, "inscribed", "--b", "3", "--order", "10", "--verify", "--format", "csv")
    assert code == EXIT_OK
    assert "k,n,count" in out.out and "2,4,6" in out.out


def test_bijection_forward_and_inverse(capsys, tmp_path):
    code, out = run(capsys, "bijection", "forward", "--rows", "3,1,1,3")
    doc = json.loads(out.out)
    assert code == EXIT_OK and doc["width"] == "4"
    cells = tmp_path / "b.json"
    cells.write_text(json.dumps({"dim": 2, "cells": [[int(x) for x in c] for c in doc["bubble"]["cells"]]}))
    code, out = run(capsys, "bijection", "inverse", "--cells", str(cells))
    assert json.loads(out.out)["rows"] == ["3", "1", "1", "3"]


def test_bijection_inverse_rejects(capsys, tmp_path):
    cells = tmp_path / "row.json"
    cells.write_text(json.dumps({"dim": 2, "cells": [[0, 0], [1, 0], [2, 0]]}))
    code, _ = run(capsys, "bijection", "inverse", "--cells", str(cells))
    assert code == EXIT_MISMATCH


def test_bijection_check(capsys):
    code, out = run(capsys, "bijection", "check", "--max-cells", "6")
    assert code == EXIT_OK and json.loads(out.out)["ok"] is True


def test_maxlen_search_and_witness(capsys, tmp_path):
    wpath = tmp_path / "w.json"
    code, out = run(capsys, "maxlen", "--b", "4", "--k", "4", "--class", "kiss-free", "--witness", str(wpath))
    doc = json.loads(out.out)
    assert code == EXIT_OK and doc["length"] == "11" and doc["formula"] == "11"
    assert len(json.loads(wpath.read_text())["cells"]) == 11


def test_maxlen_pds_4x4(capsys):
    # the closed formula says 11; the exact search finds 10
    code, out = run(capsys, "maxlen", "--b", "4", "--k", "4", "--class", "pds")
    assert json.loads(out.out)["length"] == "10"


def test_maxlen_budget_exit(capsys):
    code, _ = run(capsys, "maxlen", "--b", "5", "--k", "5", "--node-budget", "10")
    assert code == EXIT_BUDGET


def test_maxlen_report(capsys):
    code, out = run(capsys, "maxlen", "report", "--bmax", "3", "--kmax", "3", "--format", "csv")
    lines = out.out.splitlines()
    assert lines[1] == "b,k,formula,pds,kiss_free,general" and len(lines) == 11


@pytest.mark.parametrize(
    "argv",
    [["bogus"], ["maxlen", "--b", "0", "--k", "2"], ["maxlen", "--b", "2"], ["enumerate"], ["verify", "--profile", "huge"]],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as e:
        code = main(argv)
        raise SystemExit(code)
    assert e.value.code == EXIT_USAGE


def test_verify_quick_only_pds_formula_fails():
    rep = run_verify("quick")
    failing = {c["name"] for c in rep["checks"] if c["status"] != "pass"}
    assert failing == {"extremal_pds_formula"}


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "snakepoly", "enumerate", "--n", "4"], capture_output=True, text=True
    )
    assert out.returncode == 0 and json.loads(out.stdout)["count"] == "14"
