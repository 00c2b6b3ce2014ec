from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from jacksonine import partitions as pt

partition_st = st.lists(st.integers(0, 6), min_size=1, max_size=4).map(lambda v: pt.make_partition(sorted(v, reverse=True)))


def test_make_partition_pads_and_sorts_check():
    assert pt.make_partition([2, 1], 4) == (2, 1, 0, 0)
    with pytest.raises(ValueError):
        pt.make_partition([1, 2])
    with pytest.raises(ValueError):
        pt.make_partition([3, 2, 1], 2)
    with pytest.raises(ValueError):
        pt.make_partition([-1])


def test_parse_and_format_roundtrip():
    p = pt.parse_partition("3, 1,0")
    assert p == (3, 1, 0)
    assert pt.parse_partition(pt.format_partition(p)) == p


def test_enumeration_counts_and_order():
    assert pt.enumerate_partitions(4, 2) == [(4, 0), (3, 1), (2, 2)]
    assert pt.enumerate_partitions(0, 3) == [(0, 0, 0)]
    # p(6) with at most 3 parts
    assert len(pt.enumerate_partitions(6, 3)) == 7
    assert len(pt.enumerate_partitions(6, 6)) == 11


def test_partitions_upto_weights():
    parts = pt.partitions_upto(4, 2)
    assert [pt.weight(p) for p in parts] == sorted(pt.weight(p) for p in parts)
    assert len(parts) == 1 + 1 + 2 + 2 + 3


def test_conjugate_example():
    assert pt.conjugate((3, 1)) == (2, 1, 1)
    assert pt.conjugate((3, 1), 4) == (2, 1, 1, 0)


@given(partition_st)
def test_conjugate_involution(p):
    n = max(p[0], 1) + len(p)
    q = pt.make_partition(p, n)
    assert pt.conjugate(pt.conjugate(q, n), n) == q


@given(partition_st, partition_st)
def test_dominance_implies_same_weight_relation(a, b):
    n = max(len(a), len(b))
    a, b = pt.make_partition(a, n), pt.make_partition(b, n)
    if pt.weight(a) == pt.weight(b) and pt.dominates(a, b) and pt.dominates(b, a):
        assert a == b


def test_dominance_is_partial():
    assert pt.dominates((3, 0), (2, 1))
    assert not pt.dominates((2, 1), (3, 0))
    assert not pt.dominates((3, 0), (1, 1))  # different weights


def test_sub_partitions_order():
    subs = pt.sub_partitions((2, 1))
    assert subs[0] == (2, 1)
    assert subs[-1] == (0, 0)
    assert set(subs) == {(2, 1), (2, 0), (1, 1), (1, 0), (0, 0)}
    assert all(pt.contains((2, 1), s) for s in subs)


def test_boxes():
    assert pt.add_box((2, 1), 1) == (2, 2)
    assert pt.add_box((2, 2), 1) is None
    assert pt.remove_box((2, 1), 0) == (1, 1)
    assert pt.remove_box((1, 1), 0) is None


def test_floor_partition():
    assert pt.floor_partition([1.0, 0.5], 8) == (8, 4)
    assert pt.floor_partition([0.3, 0.9], 10) == (9, 3)


def test_hook_products():
    # alpha = 1: c and c' both reduce to the hook product
    assert pt.hook_c((2, 1), 1) == 3
    assert pt.hook_cprime((2, 1), 1) == 3
    assert pt.hook_cprime((2,), Fraction(1, 2)) == Fraction(1, 2) * 1 * (Fraction(1, 2) * 2)


@given(partition_st)
def test_orbit_size_matches_iteration(p):
    orbit = list(pt.iter_orbit(p))
    assert len(orbit) == len(set(orbit)) == pt.orbit_size(p)
