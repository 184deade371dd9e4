"""One test per acceptance criterion; each prints a PASS/FAIL line."""
import io
import time

import pytest

from nchilb import verify
from nchilb.cli import dispatch, render_json, verify_payload
from nchilb.report import Report

DESCRIPTIONS = {
    1: "counting: closed form = enumeration = sum of Betti numbers",
    2: "statistics: critical set size, grafting identities, worked example",
    3: "generating functions: recursion, products, gamma identity, continued fraction, lattice paths",
    4: "point counting: brute force over F_p vs cell sum, per-cell census",
    5: "cell geometry: normal form, classify, lambda round trip; box pattern",
    6: "Betti tables: small cases and parity",
    7: "asymptotics: chi ratio and special value (tolerance)",
    8: "Airy limit law: exact moments, trend and tolerances, moment oracle",
    9: "determinism: repeated verify runs are byte-identical",
}

_reports = {}


def _report(k: int) -> Report:
    if k not in _reports:
        _reports[k] = verify.CRITERIA[k](0) if k == 5 else verify.CRITERIA[k]()
    return _reports[k]


def _announce(capsys, k: int, passed: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\ncriterion {k}: {'PASS' if passed else 'FAIL'}  {DESCRIPTIONS[k]}  ({detail})")


@pytest.mark.parametrize("k", sorted(verify.CRITERIA))
def test_criterion(k, capsys):
    t0 = time.perf_counter()
    rep = _report(k)
    elapsed = time.perf_counter() - t0
    _announce(capsys, k, rep.passed, f"{len(rep.checks)} checks, {elapsed:.1f}s")
    first = rep.first_failure
    assert rep.passed, f"first failure: {first.name} {first.methods} {first.params}: " \
                       f"expected {first.expected}, got {first.actual}"


def test_criterion_9_determinism(capsys):
    # the earlier criterion runs are the first pass; the CLI sweep is the second
    combined = Report("acceptance")
    for k in sorted(verify.CRITERIA):
        combined.extend(_report(k))
    first = render_json(verify_payload(combined, 0))
    out = io.StringIO()
    code = dispatch(["verify", "--all", "--seed", "0"], out)
    again = io.StringIO()
    dispatch(["verify", "-m", "3", "-n", "2", "--dmax", "5"], again)
    again2 = io.StringIO()
    dispatch(["verify", "-m", "3", "-n", "2", "--dmax", "5"], again2)
    same = out.getvalue() == first and again.getvalue() == again2.getvalue()
    _announce(capsys, 9, same and code == 0, f"{len(first)} bytes, exit {code}")
    assert code == 0
    assert same
