"""Charts, embeddings and tangent/osculating spans of flag varieties and
products of Grassmannians.

Chart conventions
-----------------
Flag mode uses one ``(k_r+1) x (n+1)`` matrix.  Rows are grouped in bands;
band ``i`` holds rows ``k_{i-1}+1 .. k_i`` (with ``k_0 = -1``), has an
identity block on the same columns and free parameters in columns
``k_i+1 .. n``.  The subspace of dimension ``k_i`` in the flag is the row span
of the first ``k_i+1`` rows.  Product mode uses one ``[I | X_i]`` block per
factor.  Parameters are ordered band (or factor) first, then row, then
column.

Every coordinate is a product of maximal minors, so :func:`embed` works for
any ring element type that supports ``+``, ``-`` and ``*`` (ints, jets,
polynomials in ``t``, multivariate polynomials).

All subspaces are affine cones: projective dimensions are ``rank - 1``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from math import comb, prod

import numpy as np

from flagrank.exactalg import (
    DEFAULT_PRIME,
    SECOND_PRIME,
    InconsistencyError,
    Jet,
    MPoly,
    SubspaceBasis,
    rank,
)
from flagrank.exactalg.linalg import _dtype_for
from flagrank.indexcomb import MultiIndex, check_multi_index, multi_indices
from flagrank.shape import FlagShape, ShapeError


class SingularSampleError(ArithmeticError):
    """A sampled point gave a tangent space of too small rank."""


def flag_dim(shape: FlagShape) -> int:
    return shape.dim


def weyl_dim(shape: FlagShape) -> int:
    """Dimension of the linear span of the embedded variety (affine count)."""
    return shape.weyl_dim


# --- charts -----------------------------------------------------------------


def parameter_slots(shape: FlagShape) -> list[tuple[int, int, int]]:
    """``(block, row, column)`` of every free chart parameter, in parameter order.

    ``block`` is always 0 in flag mode (one matrix) and the factor number in
    product mode.
    """
    slots = []
    if shape.product:
        for b, k in enumerate(shape.ks):
            for row in range(k + 1):
                for col in range(k + 1, shape.n + 1):
                    slots.append((b, row, col))
        return slots
    prev = -1
    for k in shape.ks:
        for row in range(prev + 1, k + 1):
            for col in range(k + 1, shape.n + 1):
                slots.append((0, row, col))
        prev = k
    return slots


def chart_matrices(shape: FlagShape, params) -> list[list[list]]:
    """Chart matrices (as nested lists) for the given parameter values."""
    slots = parameter_slots(shape)
    if len(params) != len(slots):
        raise ShapeError(f"{shape} has {len(slots)} chart parameters, got {len(params)}")
    heights = [k + 1 for k in shape.ks] if shape.product else [shape.k_max + 1]
    mats = [[[0] * (shape.n + 1) for _ in range(h)] for h in heights]
    for M in mats:
        for i in range(len(M)):
            M[i][i] = 1
    for (b, row, col), x in zip(slots, params):
        mats[b][row][col] = x
    return mats


def _apply_transform(M, g):
    """Right-multiply a ring-valued matrix by an integer matrix ``g``."""
    ncol = len(g[0])
    out = []
    for row in M:
        new = []
        for c in range(ncol):
            acc = 0
            for a, x in enumerate(row):
                gc = int(g[a][c])
                if gc == 0 or (isinstance(x, int) and x == 0):
                    continue
                acc = x * gc + acc
            new.append(acc)
        out.append(new)
    return out


def plucker_levels(M, levels) -> dict[int, list]:
    """Maximal minors of the top ``l+1`` rows of ``M`` for each ``l`` in ``levels``.

    Minors are built one row at a time by Laplace expansion along the last
    row, so all requested levels come out of a single pass without any
    division.  Each returned list follows ``combinations`` order.
    """
    levels = sorted(set(levels))
    if not levels:
        return {}
    ncol = len(M[0])
    prev = {(c,): M[0][c] for c in range(ncol)}
    out = {}
    if levels[0] == 0:
        out[0] = [prev[(c,)] for c in range(ncol)]
    for i in range(1, levels[-1] + 1):
        row = M[i]
        cur = {}
        for S in combinations(range(ncol), i + 1):
            acc = 0
            for pos, c in enumerate(S):
                x = row[c]
                if isinstance(x, int) and x == 0:
                    continue
                d = prev[S[:pos] + S[pos + 1:]]
                if isinstance(d, int) and d == 0:
                    continue
                term = x * d
                acc = acc - term if (i + pos) % 2 else acc + term
            cur[S] = acc
        prev = cur
        if i in levels:
            out[i] = list(cur.values())
    return out


def segre(factors) -> list:
    """Products of coordinates of the factors in ``itertools.product`` order."""
    out = [1]
    for f in factors:
        nxt = []
        for a in out:
            a_zero = isinstance(a, int) and a == 0
            for b in f:
                if a_zero or (isinstance(b, int) and b == 0):
                    nxt.append(0)
                else:
                    nxt.append(a * b)
        out = nxt
    return out


def factor_coordinates(shape: FlagShape, params, transform=None) -> list[list]:
    """Pluecker coordinates of each factor at a chart point."""
    mats = chart_matrices(shape, params)
    if transform is not None:
        mats = [_apply_transform(M, transform) for M in mats]
    if shape.product:
        return [plucker_levels(M, [k])[k] for M, k in zip(mats, shape.ks)]
    levels = plucker_levels(mats[0], shape.ks)
    return [levels[k] for k in shape.ks]


def embed(shape: FlagShape, params, transform=None) -> list:
    """Segre-Pluecker coordinates ``Z_J`` (canonical order) of a chart point.

    ``transform`` is an optional ``(n+1) x (n+1)`` integer matrix applied on
    the right of every chart matrix, i.e. an ambient change of basis.
    """
    return segre(factor_coordinates(shape, params, transform))


def random_params(shape: FlagShape, rng: np.random.Generator, p: int | None = None) -> list[int]:
    count = shape.dim
    if p is None:
        return [int(x) for x in rng.integers(-9, 10, size=count)]
    return [int(x) for x in rng.integers(0, p, size=count)]


def random_transform(n: int, rng: np.random.Generator, p: int) -> np.ndarray:
    """A random invertible ``n x n`` matrix over F_p."""
    while True:
        g = rng.integers(0, p, size=(n, n)).astype(_dtype_for(p))
        if rank(g, p) == n:
            return g


def positions(shape: FlagShape, indices) -> list[int]:
    """Canonical positions of the given multi-indices."""
    wanted = {check_multi_index(shape, I) for I in indices}
    return [pos for pos, J in enumerate(multi_indices(shape)) if J in wanted]


def ball_positions(shape: FlagShape, I: MultiIndex, s: int) -> list[int]:
    """Canonical positions of ``{J : d(I, J) <= s}``."""
    I = check_multi_index(shape, I)
    sets = [set(part) for part in I]
    out = []
    for pos, J in enumerate(multi_indices(shape)):
        d = sum(len(part) - len(ref.intersection(part)) for part, ref in zip(J, sets))
        if d <= s:
            out.append(pos)
    return out


# --- spans ------------------------------------------------------------------


def _sample_span(shape: FlagShape, p: int | None, seed: int, margin: int) -> SubspaceBasis:
    rng = np.random.default_rng(seed)
    count = shape.weyl_dim + margin
    rows = [embed(shape, random_params(shape, rng, p)) for _ in range(count)]
    arr = np.array(rows, dtype=object)
    if p is not None:
        arr = (arr % p).astype(_dtype_for(p))
    return SubspaceBasis.span(arr, shape.ambient_size, p)


@lru_cache(maxsize=64)
def linear_span(
    shape: FlagShape, p: int | None = DEFAULT_PRIME, seed: int = 0, margin: int = 10
) -> SubspaceBasis:
    """Linear span of the embedded variety, by sampling and rank saturation.

    In product mode (and for Grassmannians) the span is the whole ambient.
    Otherwise ``weyl_dim + margin`` random chart points are embedded and the
    rank is checked against the Weyl dimension; a mismatch is retried once
    with a fresh seed before raising :class:`InconsistencyError`.
    """
    N = shape.ambient_size
    if shape.product or shape.r == 1:
        return SubspaceBasis.coordinate(range(N), N, p)
    target = shape.weyl_dim
    for attempt in range(2):
        span = _sample_span(shape, p, seed + attempt, margin)
        if span.rank == target:
            return span
    other = SECOND_PRIME if p == DEFAULT_PRIME else DEFAULT_PRIME
    got = _sample_span(shape, other, seed + 7, margin).rank
    raise InconsistencyError(
        f"{shape}: sampled span has rank {span.rank} (second prime {got}), Weyl dimension {target}"
    )


def tangent_rows(shape: FlagShape, params, p: int | None = DEFAULT_PRIME, transform=None) -> np.ndarray:
    """Rows ``Z(P)`` and ``dZ/dx`` for every chart parameter ``x`` (affine cone tangent)."""
    nvars = shape.dim
    jets = [Jet.variable(x, i, nvars, p) for i, x in enumerate(params)]
    coords = embed(shape, jets, transform)
    dtype = object if p is None else _dtype_for(p)
    out = np.zeros((nvars + 1, len(coords)), dtype=dtype)
    for j, z in enumerate(coords):
        if isinstance(z, Jet):
            out[0, j] = z.value
            out[1:, j] = z.eps
        else:
            out[0, j] = z if p is None else int(z) % p
    return out


def tangent_basis(shape: FlagShape, params, p: int | None = DEFAULT_PRIME, transform=None) -> SubspaceBasis:
    """Affine cone over the embedded tangent space at a chart point.

    Raises :class:`SingularSampleError` if the rank is below ``dim + 1``.
    """
    basis = SubspaceBasis.span(tangent_rows(shape, params, p, transform), shape.ambient_size, p)
    if basis.rank != shape.dim + 1:
        raise SingularSampleError(f"{shape}: tangent rank {basis.rank}, expected {shape.dim + 1}")
    return basis


def _is_nested(I: MultiIndex) -> bool:
    return all(set(a) <= set(b) for a, b in zip(I, I[1:]))


def osculating_span(
    shape: FlagShape, I: MultiIndex, s: int, p: int | None = DEFAULT_PRIME, seed: int = 0
) -> SubspaceBasis:
    """Order-``s`` osculating space at the coordinate point ``e_I``.

    Product mode: the coordinate subspace on the ball of radius ``s``.
    Flag mode: that coordinate subspace cut with the linear span of the
    variety; ``I`` must be a flag (nested parts).
    """
    if s < 0:
        raise ValueError("order must be non-negative")
    I = check_multi_index(shape, I)
    N = shape.ambient_size
    support = ball_positions(shape, I, s)
    if shape.product or shape.r == 1:
        return SubspaceBasis.coordinate(support, N, p)
    if not _is_nested(I):
        raise ShapeError(f"{I} is not a flag: parts must be nested")
    inside = set(support)
    outside = [c for c in range(N) if c not in inside]
    return linear_span(shape, p, seed).vanishing_on(outside)


def osc_dim_formula(shape: FlagShape, s: int) -> int:
    """Closed-form rank of the order-``s`` osculating space of a product of Grassmannians."""
    total = 0
    ranges = [range(min(k + 1, shape.n - k) + 1) for k in shape.ks]
    for ss in product(*ranges):
        if sum(ss) <= s:
            total += prod(comb(shape.n - k, si) * comb(k + 1, si) for k, si in zip(shape.ks, ss))
    return total


def taylor_vectors(shape: FlagShape, s: int) -> np.ndarray:
    """Taylor coefficient vectors of the chart at the origin up to order ``s``.

    Each coordinate is expanded as a polynomial in the chart parameters
    (truncated at degree ``s``); the vector attached to a monomial collects
    its coefficient in every coordinate.  Their span is the span of all
    partial derivatives of order at most ``s`` at the origin.
    """
    nvars = shape.dim
    xs = [MPoly.variable(i, nvars, s) for i in range(nvars)]
    coords = embed(shape, xs)
    by_mono: dict[tuple, dict[int, int]] = {}
    for j, z in enumerate(coords):
        terms = z.terms if isinstance(z, MPoly) else ({(0,) * nvars: z} if z else {})
        for mono, c in terms.items():
            by_mono.setdefault(mono, {})[j] = c
    out = np.zeros((len(by_mono), len(coords)), dtype=object)
    out[:] = 0
    for row, mono in enumerate(sorted(by_mono)):
        for j, c in by_mono[mono].items():
            out[row, j] = c
    return out


def well_behaved_ranks(shape: FlagShape, s: int, p: int | None = DEFAULT_PRIME, seed: int = 0) -> tuple[int, int]:
    """(rank of derivatives up to order s at the origin, rank of the osculating span)."""
    vecs = taylor_vectors(shape, s)
    a = rank(vecs) if vecs.shape[0] else 0
    origin = tuple(tuple(range(k + 1)) for k in shape.ks)
    b = osculating_span(shape, origin, s, p, seed).rank
    return a, b


def well_behaved_check(shape: FlagShape, s: int, p: int | None = DEFAULT_PRIME, seed: int = 0) -> bool:
    """Whether the chart's order-``s`` derivatives span exactly the coordinate-ball
    part of the linear span."""
    if shape.product:
        raise ShapeError("well_behaved_check needs flag mode")
    a, b = well_behaved_ranks(shape, s, p, seed)
    return a == b
