from fractions import Fraction

import pytest

from opengame.criteria import (
    is_geometric_ladder,
    is_minimal_size,
    kraft_sum,
    moran_dimension,
    p2_certificate,
    subtree_criterion,
)
from opengame.suite import enumerate_antichain_codes, geometric_ladder
from opengame.tree import PositionSet, normalize_even


def test_kraft_sum_examples():
    assert kraft_sum(PositionSet([(0, 0), (0, 1)]), 2) == 1
    assert kraft_sum(geometric_ladder(5), 2) == 1  # closed-form tail
    assert kraft_sum(geometric_ladder(3, infinite_family=False), 2) == Fraction(7, 8)


def test_kraft_sum_handles_odd_lengths():
    # floor-halved exponents: a length-1 position weighs 1
    assert kraft_sum(PositionSet([(0,)]), 2) == 1
    assert kraft_sum(PositionSet([(0, 1, 0)]), 2) == Fraction(1, 2)


def test_ladder_shape_detection():
    assert is_geometric_ladder(geometric_ladder(4))
    assert not is_geometric_ladder(PositionSet([(0, 0), (0, 1)]))
    assert not is_geometric_ladder(PositionSet([]))


def test_p2_certificate_examples():
    cert = p2_certificate(PositionSet([(0, 0)]), 2)
    assert cert is not None and cert.sum == Fraction(1, 2)
    assert p2_certificate(PositionSet([(0, 0), (0, 1)]), 2) is None
    family = p2_certificate(geometric_ladder(4), 2)
    assert family is not None and family.reason == "infinite_family_sum_at_most_one"


def test_p2_certificate_flagged_without_ladder_shape_is_truncation_scoped():
    z = PositionSet([(0, 0), (0, 1, 0, 0), (0, 1, 0, 1)], infinite_family=True)
    cert = p2_certificate(z, 2)
    assert cert is None  # partial sum is exactly 1; no family conclusion

    z2 = PositionSet([(0, 0, 0, 0), (0, 1, 0, 0)], infinite_family=True)
    cert2 = p2_certificate(z2, 2)
    assert cert2 is not None and cert2.sum == Fraction(1, 2)
    assert cert2.note is not None  # scoped to the listed truncation


def test_subtree_criterion_examples():
    z = PositionSet([(0, 0), (0, 1)])
    assert subtree_criterion(z, 2, 0) == 1
    assert subtree_criterion(z, 2, 2) == 1
    assert subtree_criterion(PositionSet([(0, 0, 0, 0)]), 2, 2) == Fraction(1, 2)


def test_subtree_criterion_level_zero_is_kraft():
    for words in enumerate_antichain_codes(2, 2):
        z = normalize_even(PositionSet(words), 2)
        assert subtree_criterion(z, 2, 0) == kraft_sum(z, 2)


def test_subtree_criterion_range_errors():
    with pytest.raises(ValueError):
        subtree_criterion(PositionSet([(0, 0)]), 2, 3)
    with pytest.raises(ValueError):
        subtree_criterion(PositionSet([]), 2, 1)
    assert subtree_criterion(PositionSet([]), 2, 0) == 0


def test_is_minimal_size():
    assert is_minimal_size(PositionSet([(0, 0), (0, 1)]), 2)
    assert not is_minimal_size(PositionSet([(0, 0)]), 2)
    assert is_minimal_size(geometric_ladder(7), 2)


def test_moran_examples():
    root = moran_dimension(geometric_ladder(6), 2)
    assert abs(root.d - 0.5) <= 1e-9
    assert not root.below_half

    everything = moran_dimension(PositionSet([(a, b) for a in (0, 1) for b in (0, 1)]), 2)
    assert everything.d == 1.0 and not everything.below_half

    single = moran_dimension(PositionSet([(0, 0)]), 2)
    assert single.d == 0.0 and single.below_half


def test_moran_residual_and_threshold_agreement():
    for words in enumerate_antichain_codes(2, 2):
        if not words or () in words:
            continue
        z = normalize_even(PositionSet(words), 2)
        root = moran_dimension(z, 2)
        assert root.residual < 1e-12
        assert root.below_half == (kraft_sum(z, 2) < 1)
        if abs(root.d - 0.5) > 1e-9:
            assert root.below_half == (root.d < 0.5)


def test_moran_rejects_bad_input():
    with pytest.raises(ValueError):
        moran_dimension(PositionSet([]), 2)
    with pytest.raises(ValueError):
        moran_dimension(PositionSet([(0,)]), 2)
    with pytest.raises(ValueError):
        moran_dimension(PositionSet([()]), 2)  # constant term, no unique root
