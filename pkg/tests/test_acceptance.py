"""Acceptance batteries, one test per criterion, one printed line each.

Criterion 4 states a two-directional equivalence between mover wins and
maximality of every block-code image.  The converse direction does not
hold: four depth-4 binary minimal-size instances are responder wins whose
every image is maximal (the battery detail names one).  The criterion is
asserted as stated and fails honestly on those instances; the forward
direction has zero violations.
"""

import pytest

from opengame.suite import (
    BatteryResult,
    SuiteData,
    battery_code_equivalence,
    battery_covering_identity,
    battery_free_group,
    battery_hat_index,
    battery_kraft_necessity,
    battery_measures_monte_carlo,
    battery_minimal_extraction,
    battery_moran_threshold,
    battery_solver_oracle,
)


@pytest.fixture(scope="module")
def data() -> SuiteData:
    return SuiteData()


def _run(battery, data) -> BatteryResult:
    result = battery(data)
    print()
    print(result.line())
    return result


def test_criterion_1_solver_matches_oracle(data):
    result = _run(battery_solver_oracle, data)
    assert result.passed, result.detail


def test_criterion_2_kraft_necessity(data):
    result = _run(battery_kraft_necessity, data)
    assert result.passed, result.detail


def test_criterion_3_minimal_extraction(data):
    result = _run(battery_minimal_extraction, data)
    assert result.passed, result.detail


def test_criterion_4_code_equivalence(data):
    result = _run(battery_code_equivalence, data)
    assert result.passed, result.detail


def test_criterion_5_covering_identity(data):
    result = _run(battery_covering_identity, data)
    assert result.passed, result.detail


def test_criterion_6_free_group(data):
    result = _run(battery_free_group, data)
    assert result.passed, result.detail


def test_criterion_7_hat_index(data):
    result = _run(battery_hat_index, data)
    assert result.passed, result.detail


def test_criterion_8_moran_threshold(data):
    result = _run(battery_moran_threshold, data)
    assert result.passed, result.detail


def test_criterion_9_measures_monte_carlo(data):
    result = _run(battery_measures_monte_carlo, data)
    assert result.passed, result.detail
