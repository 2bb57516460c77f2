"""The twelve acceptance criteria, one test each.

Each test prints a PASS/FAIL line for its criterion. Set WINF_THREADS to
spread the heavier criteria over several processes.
"""
import pytest

from winf.suites import ACCEPTANCE


@pytest.mark.parametrize("criterion", ACCEPTANCE, ids=[fn.__name__.replace("_", "-") for fn in ACCEPTANCE])
def test_criterion(criterion, capsys):
    result = criterion()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.checked > 0
    assert result.passed, result.failures[:5]
