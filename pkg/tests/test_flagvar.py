from __future__ import annotations

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from flagrank.exactalg import DEFAULT_PRIME, MPoly, SubspaceBasis, left_kernel, matmul
from flagrank.flagvar import (
    ball_positions,
    embed,
    linear_span,
    osc_dim_formula,
    osculating_span,
    parameter_slots,
    random_params,
    tangent_basis,
    well_behaved_check,
)
from flagrank.indexcomb import coordinate_points
from flagrank.shape import FlagShape, ShapeError, parse_shape

from oracles import coordinates, weyl_dim_partition

P = DEFAULT_PRIME


def test_grassmannian_embedding_by_hand():
    shape = parse_shape("1;3")
    a, b, c, d = (MPoly.variable(i, 4) for i in range(4))
    Z = embed(shape, [a, b, c, d])
    as_dicts = [z.terms if isinstance(z, MPoly) else {(0, 0, 0, 0): z} for z in Z]
    assert as_dicts == [
        {(0, 0, 0, 0): 1},
        {(0, 0, 1, 0): 1},
        {(0, 0, 0, 1): 1},
        {(1, 0, 0, 0): -1},
        {(0, 1, 0, 0): -1},
        {(1, 0, 0, 1): 1, (0, 1, 1, 0): -1},
    ]


@pytest.mark.parametrize("text", ["0,2;3", "G:0,1;3", "1,2;4", "0,0;2", "G:1,1;3"])
def test_embedding_matches_sympy(text):
    shape = parse_shape(text)
    coords, syms = coordinates(shape.ks, shape.n, shape.product)
    rng = np.random.default_rng(3)
    vals = random_params(shape, rng)
    ours = embed(shape, vals)
    sub = dict(zip(syms, vals))
    assert ours == [int(z.subs(sub)) for z in coords]


def test_origin_is_first_coordinate_point():
    for text in ["0,2;3", "G:1,2;5", "1;4"]:
        shape = parse_shape(text)
        Z = embed(shape, [0] * shape.dim)
        assert Z[0] == 1 and not any(Z[1:])


def test_parameter_count_is_dimension():
    for text in ["0,2;3", "G:0,1;3", "1,2,3;6", "2,2;5"]:
        shape = parse_shape(text)
        assert len(parameter_slots(shape)) == shape.dim


@pytest.mark.parametrize("text,r", [("0,2;3", 15), ("1;3", 6), ("0,1;2", 8), ("0,1;3", 20), ("1,2;4", 75)])
def test_linear_span_rank(text, r):
    shape = parse_shape(text)
    assert linear_span(shape).rank == r == weyl_dim_partition(shape.ks, shape.n)


def test_embedded_points_satisfy_span_equations():
    shape = parse_shape("0,1;3")
    eqs = left_kernel(linear_span(shape).rows.T, P)
    rng = np.random.default_rng(11)
    for _ in range(5):
        z = np.array([v % P for v in embed(shape, random_params(shape, rng, P))], dtype=np.int64)
        assert not matmul(eqs, z.reshape(-1, 1), P).any()


def test_tangent_basis_at_origin():
    shape = parse_shape("1;3")
    tb = tangent_basis(shape, [0, 0, 0, 0])
    assert tb.same_space(SubspaceBasis.coordinate(range(5), 6, P))


@pytest.mark.parametrize("text", ["G:0,1;3", "0,2;3", "1,2;5", "2;6"])
def test_tangent_rank_is_dim_plus_one(text):
    shape = parse_shape(text)
    rng = np.random.default_rng(0)
    assert tangent_basis(shape, random_params(shape, rng, P)).rank == shape.dim + 1


@pytest.mark.parametrize("text", ["0,1;3", "G:1;3", "0,2;3"])
def test_tangent_at_origin_is_first_osculating_space(text):
    shape = parse_shape(text)
    I1 = coordinate_points(shape, 1)[0]
    assert tangent_basis(shape, [0] * shape.dim).same_space(osculating_span(shape, I1, 1))


def test_osc_formula_examples():
    assert osc_dim_formula(parse_shape("G:1;3"), 0) == 1
    assert osc_dim_formula(parse_shape("G:1;3"), 1) == 5
    assert osc_dim_formula(parse_shape("G:0,1;3"), 1) == 8


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 6), st.lists(st.integers(0, 2), min_size=1, max_size=2), st.integers(0, 6))
def test_osc_formula_matches_ball(n, ks, s):
    ks = sorted(min(k, n - 1) for k in ks)
    shape = FlagShape(tuple(ks), n, True)
    I1 = coordinate_points(shape, 1)[0]
    assert osc_dim_formula(shape, s) == len(ball_positions(shape, I1, s))


def test_flag_osculating_spans_are_homogeneous():
    shape = parse_shape("0,1;3")
    I1, I2 = coordinate_points(shape, 2)
    for s in range(shape.diameter + 1):
        assert osculating_span(shape, I1, s).rank == osculating_span(shape, I2, s).rank


def test_osculating_span_saturates():
    shape = parse_shape("0,2;3")
    I1 = coordinate_points(shape, 1)[0]
    assert osculating_span(shape, I1, 0).rank == 1
    assert osculating_span(shape, I1, shape.diameter).rank == shape.weyl_dim


def test_non_nested_point_rejected():
    with pytest.raises(ShapeError):
        osculating_span(parse_shape("0,1;3"), ((2,), (0, 1)), 1)


@pytest.mark.parametrize("text,s", [("0,1;2", 1), ("0,1;3", 2)])
def test_well_behaved(text, s):
    assert well_behaved_check(parse_shape(text), s)
