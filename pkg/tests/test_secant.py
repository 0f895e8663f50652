from __future__ import annotations

import json

import pytest

from flagrank.secant import (
    CapExceeded,
    ReportCache,
    chordal_equation_value,
    chordal_hypersurface_check,
    defect_scan,
    expected_secant_dim,
    terracini_dim,
)
from flagrank.shape import FlagShape, parse_shape


@pytest.mark.parametrize("text,h,e", [("0,2;3", 2, 11), ("0,1;3", 2, 11), ("1,2;5", 1, 11)])
def test_expected_dim(text, h, e):
    assert expected_secant_dim(parse_shape(text), h) == e


@pytest.mark.parametrize(
    "text,h,computed,defect",
    [("0,2;3", 2, 10, 1), ("0,1;3", 2, 11, 0), ("2;6", 3, 33, 1), ("G:1;5", 2, 13, 1)],
)
def test_terracini_examples(text, h, computed, defect):
    rep = terracini_dim(parse_shape(text), h)
    assert (rep.computed_dim, rep.defect, rep.certified) == (computed, defect, True)


def test_grassmannian_g28_is_4_defective():
    # the power bound would claim otherwise
    rep = terracini_dim(parse_shape("2;8"), 4)
    assert rep.defect > 0 and rep.certified


def test_secant_dims_monotone():
    shape = parse_shape("0,1;3")
    dims = [terracini_dim(shape, h, confirm=False).computed_dim for h in range(1, 6)]
    assert dims[0] == shape.dim
    for a, b in zip(dims, dims[1:]):
        assert a <= b <= a + shape.dim + 1


def test_trials_never_decrease_rank():
    shape = parse_shape("1,2;4")
    one = terracini_dim(shape, 2, trials=1, confirm=False).computed_dim
    three = terracini_dim(shape, 2, trials=3, confirm=False).computed_dim
    assert three >= one


def test_fills_ambient_flag():
    rep = terracini_dim(parse_shape("G:1;4"), 2)
    assert rep.fills_ambient and rep.defect == 0


def test_caps():
    with pytest.raises(CapExceeded):
        terracini_dim(parse_shape("G:5;30"), 2)
    with pytest.raises(CapExceeded):
        terracini_dim(parse_shape("1;3"), 2000)


def test_scan_reproduces_point_hyperplane_defects():
    shapes = [FlagShape((0, k), n) for n in range(2, 6) for k in range(1, n)]
    for rep in defect_scan(shapes, [2]):
        n = int(rep.shape.split(";")[1])
        k = int(rep.shape.split(";")[0].split(",")[1])
        assert rep.defect == (1 if k == n - 1 else 0)


def test_scan_trivial_cases():
    assert list(defect_scan([], [1, 2])) == []
    shapes = [parse_shape("0,1;3"), parse_shape("G:1;4")]
    assert all(r.defect == 0 for r in defect_scan(shapes, [1]))


def test_scan_skips_past_filling():
    reps = list(defect_scan([parse_shape("G:1;4")], [2, 3, 4]))
    assert [r.h for r in reps] == [2]
    reps = list(defect_scan([parse_shape("G:1;4")], [3], force=True))
    assert reps[0].fills_ambient


def test_scan_records_errors():
    reps = list(defect_scan([parse_shape("G:5;30")], [2]))
    assert reps[0].error.startswith("CapExceeded")


def test_cache_round_trip(tmp_path):
    path = tmp_path / "cache.jsonl"
    shapes = [parse_shape("0,2;3")]
    first = list(defect_scan(shapes, [2], cache=ReportCache(path)))
    cache = ReportCache(path)
    assert len(cache) == 1
    second = list(defect_scan(shapes, [2], cache=cache))
    assert [r.to_json() for r in first] == [r.to_json() for r in second]
    assert json.loads(path.read_text().splitlines()[0])["defect"] == 1


def test_parallel_scan_matches_serial():
    shapes = [parse_shape("0,1;3"), parse_shape("0,2;3")]
    serial = [r.to_json() for r in defect_scan(shapes, [2])]
    parallel = [r.to_json() for r in defect_scan(shapes, [2], workers=2)]
    assert serial == parallel


@pytest.mark.parametrize("n", [2, 3, 4])
def test_chordal_hypersurface(n):
    assert chordal_hypersurface_check(n)


def test_chordal_equation_detects_non_incident_pairs():
    H = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]
    assert chordal_equation_value([1, 2, 3, 0], H) == 0
    assert chordal_equation_value([1, 2, 3, 5], H) != 0


def test_point_line_flags_are_3_defective():
    # overshoots the power bound (which is 2 here); the two-regime bound is 1
    rep = terracini_dim(parse_shape("0,1;3"), 3)
    assert (rep.expected_dim, rep.computed_dim, rep.certified) == (17, 16, True)
