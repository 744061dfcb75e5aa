"""One test per acceptance criterion; each prints its PASS/FAIL line.

Sub-checks listed in ``KNOWN_LIMITATIONS`` are documented as not attainable
by this implementation: a criterion failing only on those is reported as
FAIL and marked xfail, any other failing sub-check fails the test.
"""
import pytest

from twotemp.acceptance import CHECKS, KNOWN_LIMITATIONS, run_check

RESULTS = {}


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CHECKS))
def test_criterion(number, capsys):
    res = run_check(number)
    RESULTS[number] = res
    with capsys.disabled():
        print("\n" + res.line())
        for key, value in sorted(res.values.items()):
            print(f"      {key} = {value}")
    assert not res.unexpected_failures, res.line()
    if not res.passed:
        known = ", ".join(sorted(KNOWN_LIMITATIONS[number]))
        pytest.xfail(f"documented limitation ({known})")
