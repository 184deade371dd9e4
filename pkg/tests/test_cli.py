import io
import json
import subprocess
import sys

import pytest

from nchilb.cli import dispatch


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = dispatch(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_euler():
    assert run("euler", "-m", "2", "-n", "1", "-d", "4", "--format", "plain")[:2] == (0, "14\n")
    code, out, _ = run("euler", "-m", "3", "-n", "3", "-d", "6")
    assert code == 0 and json.loads(out)["euler"] == "7752"


def test_stat_example():
    code, out, _ = run("stat", "-m", "3", "-n", "3", "--forest", "e,1,1.3,2;-;e,3")
    js = json.loads(out)
    assert code == 0 and (js["c"], js["d"], js["dprime"]) == ("15", "61", "13")
    assert len(js["critical"]) == 15


def test_verify_passes_and_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run("verify", "-m", "2", "-n", "1", "--dmax", "6", "--out", str(a))[0] == 0
    assert run("verify", "-m", "2", "-n", "1", "--dmax", "6", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    js = json.loads(a.read_text())
    assert js["passed"] is True and js["seed"] == "0" and js["checks"]


def test_usage_errors():
    assert run("bogus")[0] == 1
    assert run("euler", "-d", "3", "--nope")[0] == 1
    assert run("euler", "-m", "0", "-d", "3")[0] == 1
    code, _, err = run("betti", "-m", "2")
    assert code == 1 and "requires -d" in err
    code, _, err = run("stat", "-m", "3", "--forest", "e,1.3")
    assert code == 1 and "lacks its prefix 1" in err
    code, _, err = run("forests", "-m", "4", "-n", "3", "-d", "9", "--max-count", "10")
    assert code == 1 and "raise the cap" in err
    assert run("airy", "--format", "csv")[0] == 1


def test_normal_form_classify_pipeline(tmp_path):
    code, out, _ = run("normal-form", "-m", "2", "-n", "2", "--forest", "e,1;e", "-p", "101", "--seed", "4")
    assert code == 0
    js = json.loads(out)
    assert js["seed"] == "4"
    pt = tmp_path / "pt.json"
    pt.write_text(json.dumps(js["point"]))
    code, out, _ = run("classify", "-m", "2", "-n", "2", "--point", str(pt), "--format", "plain")
    assert (code, out) == (0, "e,1;e\n")


@pytest.mark.parametrize("argv", [
    ("forests", "-m", "2", "-d", "3", "--format", "csv"),
    ("betti", "-m", "2", "-d", "3"),
    ("zeta", "-m", "2", "--dmax", "4"),
    ("zeta", "-m", "2", "--dmax", "4", "--kind", "gamma"),
    ("zeta", "-m", "3", "-n", "2", "--dmax", "4", "--kind", "unmodified", "--format", "csv"),
    ("submodule", "-m", "2", "--forest", "e,1"),
    ("census", "-m", "2", "-d", "2", "-p", "2", "--format", "csv"),
    ("lattice", "-m", "2", "-d", "3"),
    ("airy", "-K", "5"),
    ("limit-check", "-m", "2", "--dlist", "20,40"),
])
def test_subcommands_are_deterministic(argv):
    first = run(*argv)
    assert first[0] == 0 and first[1]
    assert run(*argv) == first


def test_point_count_brute():
    code, out, _ = run("point-count", "-m", "2", "-d", "2", "-q", "3", "--brute")
    js = json.loads(out)
    assert code == 0 and js["agree"] is True and js["predicted"] == "972"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "nchilb", "euler", "-m", "3", "-d", "3", "--format", "plain"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "12\n"


def test_failed_verification_exits_2(monkeypatch):
    from nchilb import verify
    from nchilb.report import Report

    def broken(*args, **kwargs):
        rep = Report("broken")
        rep.add("euler", ("closed form", "enumeration"), {"m": 2, "d": 4}, 14, 13)
        return rep

    monkeypatch.setattr(verify, "run_suite", broken)
    code, out, _ = run("verify", "-m", "2")
    js = json.loads(out)
    assert code == 2 and js["passed"] is False
    assert "euler" in json.dumps(js["first_failure"])
