"""Acceptance checks: one line per criterion, each at its stated tolerance and time budget."""

import pytest

from polystoch.repro import REGISTRY, run_check

CHECKS = sorted(REGISTRY.values(), key=lambda c: c.criterion)


@pytest.mark.parametrize("check", CHECKS, ids=[f"{c.criterion:02d}-{c.claim}" for c in CHECKS])
def test_criterion(check, capsys):
    result = run_check(check.claim)
    in_budget = result.seconds <= check.budget_seconds
    verdict = "PASS" if result.passed and in_budget else "FAIL"
    with capsys.disabled():
        print(f"\n[criterion {check.criterion:2d}] {verdict} {check.claim}: {result.summary} "
              f"({result.seconds:.2f}s / {check.budget_seconds}s)")
    assert result.passed, result.summary
    assert in_budget, f"took {result.seconds:.1f}s, budget {check.budget_seconds}s"


def test_every_criterion_registered():
    assert [c.criterion for c in CHECKS] == list(range(1, 14))
