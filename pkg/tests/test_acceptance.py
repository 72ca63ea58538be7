"""Acceptance suite: one test per numbered criterion.

Each test prints a single pass/fail line; run with ``pytest -s`` to see them.
"""

import pytest

from buresforms.acceptance import CRITERIA, run_acceptance, run_criterion
from buresforms.state import CALIBRATED_SEQUENCE, GeneratorSequence


@pytest.mark.parametrize("number,title", [(n, t) for n, t, _ in CRITERIA],
                         ids=[f"criterion-{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(number, title, capsys):
    result = run_criterion(number)
    with capsys.disabled():
        print("\n" + result.summary_line())
    assert result.error is None, result.error
    assert result.checks, "criterion recorded no checks"
    failures = [f"{c.name}: {c.value:.6g} (tol {c.tolerance:g}, ref {c.reference})"
                for c in result.failures()]
    assert result.passed, "\n".join(failures)


class TestFaultInjection:
    def test_wrong_slot_order_fails_fixture_criterion(self):
        broken = GeneratorSequence(CALIBRATED_SEQUENCE.factors, slots=(1, 0, 2))
        (result,) = run_acceptance([1], sequence=broken)
        assert not result.passed
        assert any(c.name.startswith("rho1 entry") for c in result.failures())
        assert "FAIL" in result.summary_line()

    def test_summary_line_format(self):
        (result,) = run_acceptance([8])
        line = result.summary_line()
        assert line.startswith("[PASS]")
        assert "8." in line
