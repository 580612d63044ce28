"""Acceptance matrix: one test per criterion, run at full tolerances."""

import pytest

from fusionhom import acceptance


@pytest.mark.parametrize("key", acceptance.criterion_keys())
def test_criterion(key):
    report = acceptance.run_criterion(key)
    assert report["status"] == "PASS", (
        f"{key} [{report['status']}]: {report['detail']}")


def test_matrix_covers_every_criterion():
    keys = acceptance.criterion_keys()
    assert len(keys) == 13
    assert len(set(keys)) == 13
