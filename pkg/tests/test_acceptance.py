"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

from __future__ import annotations

import pytest

from qkfinite.acceptance import CRITERIA


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    result = CRITERIA[number]()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
    assert result.in_time, f"took {result.elapsed:.2f}s, limit {result.limit}s"
