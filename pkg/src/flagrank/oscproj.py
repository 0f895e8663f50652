"""Osculating projections and osculating regularity checks.

Projections are taken from the span of osculating spaces at the staircase
coordinate points.  Generic finiteness of such a projection is certified by
the rank of the projected differential at one random point.

Regularity is checked on the explicit one-parameter families of the
staircase curves: the span of osculating spaces at ``e_{I_1}`` and at
``g_t e_{I_1}`` is a polynomial family in ``t`` whose flat limit at ``t = 0``
must sit inside a higher osculating space at ``e_{I_1}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from flagrank.exactalg import DEFAULT_PRIME, SubspaceBasis, TPoly, flat_limit, rank
from flagrank.exactalg.linalg import _dtype_for, integer_rows
from flagrank.flagvar import (
    ball_positions,
    osculating_span,
    plucker_levels,
    random_params,
    segre,
    tangent_rows,
)
from flagrank.indexcomb import coordinate_points, multi_indices
from flagrank.shape import FlagShape, ShapeError

SAMPLE_RETRIES = 3


@dataclass(frozen=True)
class ProjectionCenter:
    shape: FlagShape
    points: tuple
    orders: tuple[int, ...]
    center: SubspaceBasis
    coordinate_support: tuple[int, ...]

    @property
    def residual(self) -> int:
        """Number of coordinates left after projecting from the coordinate support."""
        return self.shape.ambient_size - len(self.coordinate_support)


def birational_order(shape: FlagShape) -> int:
    """The order ``r - 2 + sum k_i`` used by the projections of the main bounds."""
    return shape.r - 2 + sum(shape.ks)


def max_projection_order(shape: FlagShape) -> int:
    """Largest order whose osculating space is not yet the whole span."""
    return shape.diameter - 1


def build_center(
    shape: FlagShape, m: int, orders, p: int | None = DEFAULT_PRIME, seed: int = 0
) -> ProjectionCenter:
    """Join of the order-``s_j`` osculating spaces at the first ``m`` coordinate points.

    ``orders`` is a single int (used for every point) or a sequence of length
    ``m``.  ``m = 0`` gives the empty center.
    """
    if m < 0 or m > shape.alpha:
        raise ShapeError(f"{shape}: m={m} outside [0, alpha={shape.alpha}]")
    orders = (orders,) * m if isinstance(orders, int) else tuple(orders)
    if len(orders) != m:
        raise ValueError(f"need {m} orders, got {len(orders)}")
    top = max_projection_order(shape)
    for s in orders:
        if s < 0 or s > top:
            raise ValueError(f"order {s} outside [0, {top}] for {shape}")
    points = tuple(coordinate_points(shape, m))
    support: set[int] = set()
    center = SubspaceBasis.span([], shape.ambient_size, p)
    for I, s in zip(points, orders):
        support.update(ball_positions(shape, I, s))
        center = center.join(osculating_span(shape, I, s, p, seed))
    return ProjectionCenter(shape, points, orders, center, tuple(sorted(support)))


def generic_finiteness(
    shape: FlagShape, C: ProjectionCenter, seed: int = 0, p: int = DEFAULT_PRIME
) -> bool:
    """Whether projecting from the coordinate span of ``C`` is generically finite on X.

    At a random chart point the tangent rows are restricted to the
    coordinates outside the support; full rank ``dim + 1`` at one point
    proves full rank at the general point.
    """
    if C.residual < shape.dim:
        raise ValueError(f"residual {C.residual} is below dim {shape.dim}")
    keep = np.array([c for c in range(shape.ambient_size) if c not in set(C.coordinate_support)])
    rng = np.random.default_rng(seed)
    for _ in range(SAMPLE_RETRIES):
        rows = tangent_rows(shape, random_params(shape, rng, p), p)
        if rank(rows[:, keep].astype(_dtype_for(p)), p) == shape.dim + 1:
            return True
    return False


# --- flat limits along staircase curves -------------------------------------


def staircase_images(n: int, k_max: int, shift: int, p: int | None) -> list[list]:
    """Rows ``g_t e_i`` for ``g_t: e_i -> e_i + t e_{i+shift}`` (i <= k_max)."""
    t = TPoly.t(p)
    rows = []
    for i in range(n + 1):
        row = [0] * (n + 1)
        row[i] = 1
        if i <= k_max:
            row[i + shift] = t
        rows.append(row)
    return rows


def transform_rows(shape: FlagShape, basis_rows, images) -> list[list]:
    """Apply the induced action of a curve of linear maps to ambient vectors.

    ``images[j]`` is the image of ``e_j``; the image of ``e_J`` is the Segre
    product of the Pluecker coordinates of the images of its parts.
    """
    index = list(multi_indices(shape))
    cache: dict[int, list] = {}

    def image_of(pos: int) -> list:
        if pos not in cache:
            factors = []
            for part in index[pos]:
                rows = [images[j] for j in part]
                factors.append(plucker_levels(rows, [len(part) - 1])[len(part) - 1])
            cache[pos] = segre(factors)
        return cache[pos]

    out = []
    for vec in basis_rows:
        acc = [0] * shape.ambient_size
        for pos, c in enumerate(vec):
            c = int(c)
            if c == 0:
                continue
            for j, z in enumerate(image_of(pos)):
                if not (isinstance(z, int) and z == 0):
                    acc[j] = acc[j] + z * c
        out.append(acc)
    return out


def _field(shape: FlagShape, p: int | None) -> int | None:
    # products of Grassmannians are coordinate spans: exact over Q is cheap
    if p is None and not shape.product and shape.r > 1:
        return DEFAULT_PRIME
    return p


def _integral(rows, p: int | None) -> list[list[int]]:
    if p is None:
        return integer_rows(rows)
    return [[int(x) for x in r] for r in rows]


def _limit_and_target(shape, s_base, curve_orders, s_target, p, seed):
    I1 = tuple(tuple(range(k + 1)) for k in shape.ks)
    base = osculating_span(shape, I1, s_base, p, seed)
    rows = _integral(base.rows, p)
    for shift, s in curve_orders:
        images = staircase_images(shape.n, shape.k_max, shift, p)
        osc = _integral(osculating_span(shape, I1, s, p, seed).rows, p)
        rows += transform_rows(shape, osc, images)
    limit = flat_limit(rows, p, seed)
    target = osculating_span(shape, I1, s_target, p, seed)
    return limit, target


def strong2_flatlimit(shape: FlagShape, s1: int, s2: int, p: int | None = None, seed: int = 0):
    """(flat limit, target osculating space) for the pair of orders ``s1, s2``."""
    if shape.alpha < 2:
        raise ShapeError(f"{shape}: the staircase curve needs n >= 2k_r+1")
    if min(s1, s2) < 0:
        raise ValueError("orders must be non-negative")
    p = _field(shape, p)
    return _limit_and_target(shape, s1, [(shape.k_max + 1, s2)], s1 + s2 + 1, p, seed)


def strong2_flatlimit_check(shape: FlagShape, s1: int, s2: int, p: int | None = None, seed: int = 0) -> bool:
    """The limit of ``<T^{s1}_{e_{I_1}}, T^{s2}_{g_t e_{I_1}}>`` lies in ``T^{s1+s2+1}_{e_{I_1}}``."""
    limit, target = strong2_flatlimit(shape, s1, s2, p, seed)
    return target.contains(limit)


def alpha_osc_flatlimit(shape: FlagShape, s: int, p: int | None = None, seed: int = 0):
    """(flat limit, target) for the ``alpha - 1`` curves ``g_{j,t}`` at once."""
    alpha = shape.alpha
    if alpha < 2:
        raise ShapeError(f"{shape}: alpha = {alpha} < 2")
    if s < 0:
        raise ValueError("order must be non-negative")
    p = _field(shape, p)
    step = shape.k_max + 1
    curves = [(step * (j - 1), s) for j in range(2, alpha + 1)]
    return _limit_and_target(shape, s, curves, 2 * s + 1, p, seed)


def alpha_osc_flatlimit_check(shape: FlagShape, s: int, p: int | None = None, seed: int = 0) -> bool:
    """The limit of ``<T^s_{e_{I_1}}, T^s_{g_{2,t} e_{I_1}}, ...>`` lies in ``T^{2s+1}_{e_{I_1}}``."""
    limit, target = alpha_osc_flatlimit(shape, s, p, seed)
    return target.contains(limit)
