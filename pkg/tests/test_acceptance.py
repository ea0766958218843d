"""Acceptance criteria 1-10, each at its stated tolerance.

All criteria run once per session (criterion 5 reuses the roots found by 2
and 3).  One ``[PASS]``/``[FAIL]`` line per criterion is printed as it is
checked and repeated in the terminal summary.
"""

import pytest

from landau_shell.verification import run_all

CRITERIA = range(1, 11)
REPORT_LINES: list[str] = []


@pytest.fixture(scope="module")
def results():
    out = {res.number: res for res in run_all()}
    REPORT_LINES.extend(out[i].line() for i in CRITERIA)
    return out


@pytest.mark.parametrize("number", CRITERIA)
def test_criterion(results, number):
    res = results[number]
    print(res.line())
    assert res.passed, res.line()
