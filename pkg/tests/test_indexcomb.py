from __future__ import annotations

from itertools import combinations, product

import pytest
from hypothesis import given, strategies as st

from flagrank.indexcomb import (
    ball,
    coordinate_family,
    distance,
    h_m,
    index_map,
    iter_ball,
    multi_indices,
)
from flagrank.shape import FlagShape, ShapeError, parse_shape


def test_canonical_order_is_product_of_combinations():
    shape = parse_shape("0,1;3")
    expected = list(product(combinations(range(4), 1), combinations(range(4), 2)))
    assert list(multi_indices(shape)) == expected
    assert index_map(shape)[((0,), (0, 1))] == 0


def test_distance():
    assert distance(((0, 1),), ((0, 2),)) == 1
    assert distance(((0,), (0, 1)), ((3,), (2, 3))) == 3
    with pytest.raises(ShapeError):
        distance(((0, 1),), ((0,),))


def test_ball_sizes():
    shape = parse_shape("G:1;3")
    I = ((0, 1),)
    assert len(ball(shape, I, 0)) == 1
    assert len(ball(shape, I, 1)) == 5
    assert len(ball(shape, I, 2)) == 6


def test_ball_is_lazy_past_cap():
    shape = parse_shape("G:1;3")
    it = ball(shape, ((0, 1),), 1, cap=3)
    assert not isinstance(it, list)
    assert len(list(it)) == 5


def test_coordinate_family():
    fam = coordinate_family(parse_shape("0,1;5"))
    assert fam == [((0,), (0, 1)), ((2,), (2, 3)), ((4,), (4, 5))]
    with pytest.raises(ShapeError):
        coordinate_family(parse_shape("0,2;3"))


@given(st.integers(1, 5), st.integers(0, 4), st.integers(0, 6))
def test_ball_matches_bruteforce(n, k, s):
    k = min(k, n - 1)
    shape = FlagShape((k,), n, True)
    I = (tuple(range(k + 1)),)
    brute = [J for J in multi_indices(shape) if len(set(J[0]) - set(I[0])) <= s]
    assert list(iter_ball(shape, I, s)) == brute


@pytest.mark.parametrize("m,k,val", [(3, 1, 1), (2, 3, 2), (4, 2, 1), (2, 0, 0), (5, 6, 6), (2, 14, 7)])
def test_h_m_examples(m, k, val):
    assert h_m(m, k) == val
