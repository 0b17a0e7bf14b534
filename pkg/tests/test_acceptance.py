"""Acceptance criteria 1-10; one PASS/FAIL line per criterion.

Budget: ORTHOREAL_BUDGET=desk (default) or quick.
"""
import os

import pytest

from orthoreal.verify import CRITERIA, run_all

BUDGET = os.environ.get("ORTHOREAL_BUDGET", "desk")


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    (r,) = run_all(BUDGET, {number})
    with capsys.disabled():
        print("\n" + r.line())
    assert r.passed, r.detail
