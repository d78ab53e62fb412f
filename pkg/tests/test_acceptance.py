"""Runs every acceptance criterion with the default configuration.

Each criterion prints one PASS/FAIL line; the lines are also collected and
shown in the terminal summary.
"""

import pytest

from conftest import ACCEPTANCE_LINES
from halfhecke.config import RunConfig
from halfhecke.verify import CRITERIA


def _line(num: int, rep) -> str:
    status = "PASS" if rep.passed else "FAIL"
    extra = f", failures={len(rep.failures)}" if rep.failures else ""
    secs = f", {rep.seconds:.1f}s" if rep.seconds is not None else ""
    return f"criterion {num:>2} [{rep.name}]: {status} (checked={rep.checked}{extra}{secs})"


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num):
    rep = CRITERIA[num](RunConfig())
    line = _line(num, rep)
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert rep.checked > 0
    passed = rep.passed
    assert passed, f"{line}; first failures: {rep.failures[:3]}"
