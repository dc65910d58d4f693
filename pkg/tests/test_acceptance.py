"""Acceptance run: criterion 1 is the curve golden suite, 2-9 are the property suites.

Each test prints one ``PASS``/``FAIL`` line.  The suites run once per session
with the default sample sizes and seed 7, exactly as ``logpdgla check`` does.
"""
import time

import pytest

from logpdgla.curve import build_curve, golden_checks
from logpdgla.properties import SUITES, run_suites

SEED = 7
GOLDEN_SECONDS = 60
CHECK_SECONDS = 300

# (criterion, substring of the property name, least number of cases)
MINIMUMS = [
    (2, "exp(log(phi)) = phi on", 100),
    (2, "log(exp(D)) = D on", 100),
    (3, "BCH series against nilpotent matrices", 50),
    (3, "exp(theta * xi)", 50),
    (4, "Gerstenhaber axioms on", 100),
    (4, "Schouten-Nijenhuis", 100),
    (5, "T_phi = exp(-log phi)", 20),
    (6, "", 100),
    (7, "on Delta^1", 50),
    (7, "on Delta^2", 50),
    (7, "Stokes", 50),
    (8, "conjugation identity", 50),
    (8, "MC residual transforms", 50),
    (9, "", 30),
]


def report(capsys, criterion, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")


@pytest.fixture(scope="module")
def suites():
    start = time.perf_counter()
    results = run_suites(SEED)
    return results, time.perf_counter() - start


def test_criterion_1_golden_suite(capsys):
    start = time.perf_counter()
    failed, total = [], 0
    for k in range(4):
        checks = golden_checks(build_curve(k))
        total += len(checks)
        failed += [(k, name, detail) for name, ok, detail in checks if not ok]
    elapsed = time.perf_counter() - start
    ok = not failed and elapsed < GOLDEN_SECONDS
    report(capsys, 1, ok, f"{total - len(failed)}/{total} golden checks at k = 0..3 in {elapsed:.1f} s")
    assert not failed, failed
    assert elapsed < GOLDEN_SECONDS


@pytest.mark.parametrize("criterion", sorted(SUITES))
def test_property_criterion(criterion, suites, capsys):
    results, _ = suites
    mine = [r for r in results if r.criterion == criterion]
    failed = [r for r in mine if not r.passed]
    short = [(r.name, r.cases, need) for c, sub, need in MINIMUMS if c == criterion
             for r in mine if sub in r.name and r.cases < need]
    unmatched = [sub for c, sub, _ in MINIMUMS if c == criterion and not any(sub in r.name for r in mine)]
    ok = mine and not failed and not short and not unmatched
    report(capsys, criterion, ok, f"{SUITES[criterion][0]}: {len(mine) - len(failed)}/{len(mine)} properties, "
                                  f"{sum(r.cases for r in mine)} cases")
    assert mine
    assert not failed, [(r.name, r.witness) for r in failed]
    assert not short, short
    assert not unmatched, unmatched


def test_check_time_budget(suites, capsys):
    _, elapsed = suites
    ok = elapsed < CHECK_SECONDS
    with capsys.disabled():
        print(f"\ncriteria 2-9 ran in {elapsed:.0f} s (budget {CHECK_SECONDS} s): {'PASS' if ok else 'FAIL'}")
    assert ok
