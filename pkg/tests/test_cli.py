import io
import json

import pytest

from nlkit import report as rp
from nlkit.cli import IO_ERROR, OK, USAGE, VERIFY_FAIL, RunConfig, main, run_suite
from nlkit.suites import SUITES, ConfigError


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_list_catalog():
    code, out, _ = call("list")
    assert code == OK and len(out.strip().splitlines()) >= 6
    code, js, _ = call("list", "--format", "json")
    listed = json.loads(js)
    assert set(listed) == set(SUITES)
    for name in listed:
        assert name in out


def test_run_criterion_v21(tmp_path):
    path = tmp_path / "r.json"
    code, _, _ = call("run", "--suite", "criterion", "--seed", "0", "--budget", "10", "--out", str(path))
    assert code == OK
    rep = rp.load(path.read_text())
    assert rep["counts"]["2T"]["fail"] == 0 and rp.failed(rep) == 0


def test_run_empty_budget():
    code, out, _ = call("run", "--suite", "delta", "--seed", "1", "--budget", "0")
    rep = json.loads(out)
    assert code == OK and rep["items"] == [] and rep["counts"] == {}


def test_coneoff_writes_dot(tmp_path):
    path = tmp_path / "c.json"
    code, _, _ = call("run", "--suite", "coneoff", "--seed", "0", "--graph", "tree:8", "--out", str(path))
    assert code == OK
    for R in range(1, 6):
        dot = (tmp_path / f"coneoff_R{R}.dot").read_text()
        assert dot.startswith("graph Y_") and "dashed" in dot
    rep = json.loads(path.read_text())
    assert rep["counts"]["coneoff"]["pass"] == 5


def test_graph_file_input(tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("n 6\n0 1\n1 2\n2 3\n3 4\n4 5\n")
    code, out, _ = call("run", "--suite", "coneoff", "--seed", "0", "--graph", str(g), "--R", "1", "2")
    assert code == OK and json.loads(out)["counts"]["coneoff"]["pass"] == 2


def test_usage_errors(tmp_path):
    code, _, err = call("run", "--suite", "nope", "--seed", "1")
    assert code == USAGE and "criterion" in err and "quasi" in err
    code, _, err = call("run", "--suite", "delta")
    assert code == USAGE and "seed" in err
    cfg = tmp_path / "c.json"
    cfg.write_text('{"suite": "delta", "seed": 1, "colour": "red"}')
    code, _, err = call("run", "--config", str(cfg))
    assert code == USAGE and "colour" in err
    cfg.write_text('{"suite": "delta",\n "seed": 1,,}')
    code, _, err = call("run", "--config", str(cfg))
    assert code == USAGE and "line 2" in err
    code, _, err = call("run", "--suite", "properties", "--family", "T", "--seed", "1")
    assert code == USAGE
    code, _, _ = call("frobnicate")
    assert code == USAGE


def test_io_errors(tmp_path):
    code, _, _ = call("run", "--suite", "delta", "--seed", "1", "--budget", "1", "--out", str(tmp_path / "no" / "x.json"))
    assert code == IO_ERROR
    code, _, _ = call("run", "--suite", "coneoff", "--seed", "1", "--graph", str(tmp_path / "missing.txt"))
    assert code == IO_ERROR
    code, _, _ = call("explain", str(tmp_path / "missing.json"))
    assert code == IO_ERROR
    code, _, _ = call("run", "--config", str(tmp_path / "missing.json"))
    assert code == IO_ERROR


def test_config_pairs_use_set_grammar(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"suite": "proximality", "seed": 2, "budget": 1, "pairs": [["[0:0, 0:10]", "[0:111]"]]}))
    code, out, _ = call("run", "--config", str(cfg))
    rep = json.loads(out)
    assert code == OK and rep["items"][0]["inputs"] == {"U": "[0:0, 0:10]", "V": "[0:111]"}
    cfg.write_text(json.dumps({"suite": "proximality", "seed": 2, "pairs": [["0:0", "[0:1]"]]}))
    assert call("run", "--config", str(cfg))[0] == USAGE


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"suite": "delta"})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"suite": "delta", "seed": 1, "tolerance": {"eps": 1}})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"suite": "delta", "seed": 1, "budget": -1})
    cfg = RunConfig.from_dict({"suite": "quasi", "seed": 1, "tolerance": {"min_rate": "1/8"}})
    assert cfg.tolerance == {"min_rate": "1/8"}


def _fake_report(tmp_path, items):
    rep = rp.build("criterion", {"seed": 0}, items, timestamp="t")
    path = tmp_path / "rep.json"
    path.write_text(rp.dumps(rep))
    return path


def test_explain(tmp_path):
    item = {"condition": "3T", "seed": 4, "verdict": "inconclusive", "checks": {}, "note": "no weak triple"}
    ok = {"condition": "P1", "seed": 0, "verdict": "pass", "checks": {"x": True}, "note": ""}
    code, out, _ = call("explain", str(_fake_report(tmp_path, [ok, item])))
    assert code == OK
    assert "Property (1)" in out and "(3T)" in out and "INCONCLUSIVE 3T#4: no weak triple" in out
    bad = dict(ok, verdict="fail", checks={"x": False})
    code, out, _ = call("explain", str(_fake_report(tmp_path, [bad])))
    assert code == VERIFY_FAIL and "FAIL P1#0: x" in out


def test_explain_rejects_schema(tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = call("run", "--suite", "delta", "--seed", "1", "--budget", "2", "--out", str(path))
    text = path.read_text()
    path.write_text(text[: len(text) // 2])
    assert call("explain", str(path))[0] == USAGE
    rep = json.loads(text)
    rep["schema_version"] = 99
    path.write_text(json.dumps(rep))
    code, _, err = call("explain", str(path))
    assert code == USAGE and "schema_version" in err


def test_failing_run_exits_one(tmp_path, monkeypatch):
    import nlkit.suites as suites
    from nlkit.criterion.suite import run_item

    def broken(cfg):
        def body(rep):
            rep.checks = {"impossible": False}

        return [run_item("delta", 0, body)]

    monkeypatch.setitem(suites.SUITES, "delta", (broken, "x"))
    code, _, _ = call("run", "--suite", "delta", "--seed", "1", "--budget", "1")
    assert code == VERIFY_FAIL


def test_reports_are_deterministic():
    cfg = RunConfig.from_dict({"suite": "grouplaws", "seed": 5, "budget": 4, "family": "SVG", "s": 3})
    a = rp.dumps(run_suite(cfg, timestamp="x"))
    b = rp.dumps(run_suite(cfg, timestamp="x"))
    assert a == b


def test_module_entry_point():
    import subprocess
    import sys

    out = subprocess.run([sys.executable, "-m", "nlkit", "list"], capture_output=True, text=True)
    assert out.returncode == 0 and "coneoff" in out.stdout
