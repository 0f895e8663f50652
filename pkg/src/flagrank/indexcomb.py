"""Combinatorics of Pluecker/Segre index sets.

A single index is a sorted tuple of ``k+1`` integers in ``[0, n]``; a
multi-index is a tuple of single indices, one per factor.  The canonical
ambient order is lexicographic: part-major, then set-lexicographic inside a
part, which is exactly ``itertools.product`` over ``itertools.combinations``.
"""

from __future__ import annotations

from collections.abc import Iterator
from itertools import combinations, product

from flagrank.shape import FlagShape, ShapeError

SingleIndex = tuple[int, ...]
MultiIndex = tuple[SingleIndex, ...]

BALL_MATERIALIZE_CAP = 10**6


def single_indices(k: int, n: int) -> list[SingleIndex]:
    return list(combinations(range(n + 1), k + 1))


def multi_indices(shape: FlagShape) -> Iterator[MultiIndex]:
    """All of Lambda in canonical order."""
    return product(*(combinations(range(shape.n + 1), k + 1) for k in shape.ks))


def index_map(shape: FlagShape) -> dict[MultiIndex, int]:
    """Position of each multi-index in the canonical order."""
    return {J: pos for pos, J in enumerate(multi_indices(shape))}


def check_multi_index(shape: FlagShape, I: MultiIndex) -> MultiIndex:
    I = tuple(tuple(part) for part in I)
    if len(I) != shape.r:
        raise ShapeError(f"multi-index {I} has {len(I)} parts, shape has r={shape.r}")
    for part, k in zip(I, shape.ks):
        if len(part) != k + 1:
            raise ShapeError(f"part {part} should have {k + 1} elements")
        if any(b <= a for a, b in zip(part, part[1:])):
            raise ShapeError(f"part {part} is not strictly increasing")
        if part[0] < 0 or part[-1] > shape.n:
            raise ShapeError(f"part {part} leaves [0, {shape.n}]")
    return I


def distance_single(I: SingleIndex, J: SingleIndex) -> int:
    if len(I) != len(J):
        raise ShapeError(f"cardinality mismatch: {I} vs {J}")
    return len(I) - len(set(I) & set(J))


def distance(I: MultiIndex, J: MultiIndex) -> int:
    if len(I) != len(J):
        raise ShapeError(f"shape mismatch: {I} vs {J}")
    return sum(distance_single(a, b) for a, b in zip(I, J))


def iter_ball(shape: FlagShape, I: MultiIndex, s: int) -> Iterator[MultiIndex]:
    """Lazily yield ``{J : d(I, J) <= s}`` in canonical order."""
    I = check_multi_index(shape, I)
    sets = [set(part) for part in I]
    for J in multi_indices(shape):
        d = 0
        for part, ref in zip(J, sets):
            d += len(part) - len(ref.intersection(part))
            if d > s:
                break
        else:
            yield J


def ball(shape: FlagShape, I: MultiIndex, s: int, cap: int = BALL_MATERIALIZE_CAP):
    """The closed ball of radius ``s`` around ``I``.

    Returns a list when the index set has at most ``cap`` elements and a lazy
    iterator otherwise.
    """
    if s < 0:
        raise ValueError("radius must be non-negative")
    if shape.ambient_size > cap:
        return iter_ball(shape, I, s)
    return list(iter_ball(shape, I, s))


def coordinate_family(shape: FlagShape) -> list[MultiIndex]:
    """The staircase coordinate points I_1, ..., I_alpha.

    ``I_j`` has part ``i`` equal to ``{(k_r+1)(j-1), ..., (k_r+1)(j-1)+k_i}``.
    """
    alpha = shape.alpha
    if alpha < 2:
        raise ShapeError(f"{shape}: alpha = {alpha} < 2, need n >= 2k_r+1")
    return coordinate_points(shape, alpha)


def coordinate_points(shape: FlagShape, count: int) -> list[MultiIndex]:
    """First ``count`` staircase points, without the alpha >= 2 requirement."""
    if count > shape.alpha:
        raise ShapeError(f"{shape}: only {shape.alpha} independent coordinate points")
    step = shape.k_max + 1
    return [
        tuple(tuple(range(step * j, step * j + k + 1)) for k in shape.ks)
        for j in range(count)
    ]


def h_m(m: int, k: int) -> int:
    """Write k+1 = 2^l1 + ... + 2^lt + eps (l1 > ... > lt >= 1, eps in {0,1})
    and return m^(l1-1) + ... + m^(lt-1); h_m(0) = 0."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return 0
    bits = (k + 1) >> 1
    total = 0
    power = 1
    while bits:
        if bits & 1:
            total += power
        bits >>= 1
        power *= m
    return total
