"""Closed-form non-defectivity and identifiability bounds.

Every report gives ``h_max``: the variety is claimed not ``(h+1)``-defective
for all ``h <= h_max``.  All comparisons with the real-valued power bounds
are done with exact rationals and floored at the end.

Only the two-regime bounds (``product_bound``, ``flag_bound``) follow from
the osculating-projection argument directly.  The power bounds
(``asymptotic_bound``, ``reduced_flag_bound`` and therefore
``identifiability_bound``) replace ``h_alpha`` by a cruder estimate and are
marked ``heuristic``: they are known to overshoot, e.g. G(2,8) is
4-defective while the power bound is 3.  When the log argument is at most 1
the power bound has no support at all (``h_alpha(0) = 0``) and ``h_max`` is
set to 0; the literal formula value is kept in ``parameters``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import floor

from flagrank.indexcomb import h_m
from flagrank.shape import FlagShape

PRODUCT_LARGE_N = "ProductLargeN"
PRODUCT_SMALL_N = "ProductSmallN"
FLAG_LARGE_N = "FlagLargeN"
FLAG_SMALL_N = "FlagSmallN"
REDUCED_FLAG = "ReducedFlag"
ASYMPTOTIC = "Asymptotic"
IDENTIFIABILITY = "Identifiability"


@dataclass(frozen=True)
class BoundReport:
    shape: str
    kind: str
    regime: str | None
    h_max: int
    applicable: bool
    heuristic: bool = False
    parameters: dict = field(default_factory=dict)
    note: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _not_applicable(shape: FlagShape, kind: str, reason: str, **params) -> BoundReport:
    return BoundReport(str(shape), kind, None, 0, False, parameters=params, note=reason)


def large_n(shape: FlagShape) -> bool:
    k = shape.k_max
    return shape.n >= k * k + 3 * k + 1


def osculating_order(ks) -> int:
    """``s = r - 2 + sum k_i``, the order of the birational osculating projections."""
    return len(ks) - 2 + sum(ks)


def log2_floor(x: int) -> int:
    return x.bit_length() - 1


def power_bound(n: int, k: int, argument: int) -> tuple[int, Fraction, int]:
    """``((n+1)/(k+1)) ** floor(log2(argument))``: (h_max, exact value, exponent).

    ``h_max`` is 0 when ``argument <= 1``, where the estimate has no support.
    """
    exponent = log2_floor(argument) if argument >= 1 else 0
    value = Fraction(n + 1, k + 1) ** exponent
    h_max = floor(value) if argument > 1 else 0
    return h_max, value, exponent


def product_s_prime(shape: FlagShape) -> int:
    """``sum s_i' - 2`` with the per-factor orders of the second projection."""
    alpha, n = shape.alpha, shape.n
    parts = [min(k + 1, n - alpha * (k + 1)) for k in shape.ks[:-1]]
    k = shape.k_max
    parts.append(min(k, n - alpha * k - 1))
    return sum(parts) - 2


def product_bound(shape: FlagShape) -> BoundReport:
    """Two-regime bound for a product of Grassmannians."""
    kind = "product_bound"
    if not shape.product and shape.r > 1:
        return _not_applicable(shape, kind, "flag shape: use flag_bound")
    k, n, alpha = shape.k_max, shape.n, shape.alpha
    if n < 2 * k + 1:
        return _not_applicable(shape, kind, "needs n >= 2k_r+1", alpha=alpha)
    s = osculating_order(shape.ks)
    h_s = h_m(alpha, s) if s >= 0 else 0
    params = {"alpha": alpha, "s": s, "h_alpha_s": h_s}
    if large_n(shape):
        return BoundReport(str(shape), kind, PRODUCT_LARGE_N, alpha * h_s, True, parameters=params)
    s_prime = product_s_prime(shape)
    second = alpha * (k + 1) - 1 < n
    h_sp = h_m(alpha, s_prime) if second and s_prime >= 0 else 0
    params.update({"s_prime": s_prime, "h_alpha_s_prime": h_sp, "second_projection": second})
    note = None if second else "alpha(k_r+1)-1 = n: second projection term dropped"
    return BoundReport(
        str(shape), kind, PRODUCT_SMALL_N, (alpha - 1) * h_s + h_sp, True, parameters=params, note=note
    )


def flag_bound(shape: FlagShape) -> BoundReport:
    """Two-regime bound for a flag variety with ``n >= 2k_r+1``."""
    kind = "flag_bound"
    if shape.product:
        return _not_applicable(shape, kind, "product shape: use product_bound")
    k, n, alpha = shape.k_max, shape.n, shape.alpha
    if n < 2 * k + 1:
        return _not_applicable(shape, kind, "needs n >= 2k_r+1: see reduced_flag_bound", alpha=alpha)
    s = osculating_order(shape.ks)
    h_s = h_m(alpha, s) if s >= 0 else 0
    params = {"alpha": alpha, "s": s, "h_alpha_s": h_s}
    if large_n(shape):
        return BoundReport(str(shape), kind, FLAG_LARGE_N, alpha * h_s, True, parameters=params)
    return BoundReport(
        str(shape), kind, FLAG_SMALL_N, (alpha - 1) * h_s, True, parameters=params,
        note="small-n flag regime has no second projection term",
    )


def reduction_index(shape: FlagShape) -> int | None:
    """Largest (1-based) ``l`` with ``n >= 2k_l+1``, or None."""
    good = [j + 1 for j, k in enumerate(shape.ks) if shape.n >= 2 * k + 1]
    return max(good) if good else None


def reduced_flag_bound(shape: FlagShape) -> BoundReport:
    """Power bound through the projection onto the first ``l`` steps of the flag."""
    kind = "reduced_flag_bound"
    if shape.product:
        return _not_applicable(shape, kind, "product shape")
    if shape.n >= 2 * shape.k_max + 1:
        return _not_applicable(shape, kind, "n >= 2k_r+1: use flag_bound")
    l = reduction_index(shape)
    if l is None:
        return _not_applicable(shape, kind, "no k_j with n >= 2k_j+1")
    head = shape.ks[:l]
    argument = sum(head) + l - 1
    h_max, value, exponent = power_bound(shape.n, head[-1], argument)
    params = {"l": l, "log_argument": argument, "exponent": exponent, "formula_value": str(value)}
    note = "log argument <= 1: no support, h_max = 0" if argument <= 1 else None
    return BoundReport(str(shape), kind, REDUCED_FLAG, h_max, True, True, params, note)


def asymptotic_bound(shape: FlagShape) -> BoundReport:
    """``((n+1)/(k_r+1)) ** floor(log2(sum k + r - 1))``."""
    kind = "asymptotic_bound"
    if shape.n < 2 * shape.k_max + 1:
        return _not_applicable(shape, kind, "needs n >= 2k_r+1")
    argument = sum(shape.ks) + shape.r - 1
    h_max, value, exponent = power_bound(shape.n, shape.k_max, argument)
    params = {"log_argument": argument, "exponent": exponent, "formula_value": str(value)}
    note = "log argument <= 1: no support, h_max = 0" if argument <= 1 else None
    return BoundReport(str(shape), kind, ASYMPTOTIC, h_max, True, True, params, note)


def identifiability_bound(shape: FlagShape, literal: bool = False) -> BoundReport:
    """Gate ``2 dim - 1 <= B`` for h-identifiability up to the power bound ``B``.

    ``literal`` replaces ``dim`` by ``prod (k_i+1)(n-k_i)`` in product mode.
    """
    kind = "identifiability_bound"
    if shape.product or shape.n >= 2 * shape.k_max + 1:
        base = asymptotic_bound(shape)
    else:
        base = reduced_flag_bound(shape)
    if not base.applicable:
        return _not_applicable(shape, kind, f"no power bound: {base.note}")
    if shape.product and literal:
        size = 1
        for k in shape.ks:
            size *= (k + 1) * (shape.n - k)
        reading = "product"
    else:
        size = shape.dim
        reading = "dimension"
    lhs = 2 * size - 1
    value = Fraction(base.parameters["formula_value"]) if base.h_max > 0 else Fraction(0)
    ok = base.h_max > 0 and lhs <= value
    params = {"lhs": lhs, "bound": str(value), "reading": reading, "source": base.kind}
    return BoundReport(
        str(shape), kind, IDENTIFIABILITY, floor(value) if ok else 0, ok, True, params,
        None if ok else "gate 2*dim-1 <= bound fails",
    )


def all_bounds(shape: FlagShape, corid_literal: bool = False) -> list[BoundReport]:
    """Every bound kind for the shape, applicable or not."""
    first = product_bound(shape) if shape.product else flag_bound(shape)
    reports = [first]
    if not shape.product:
        reports.append(reduced_flag_bound(shape))
    reports.append(asymptotic_bound(shape))
    reports.append(identifiability_bound(shape, corid_literal))
    return reports


def certified_h_max(shape: FlagShape) -> int:
    """Largest ``h`` with a non-heuristic certificate that Sec_{h+1} is non-defective."""
    rep = product_bound(shape) if shape.product or shape.r == 1 else flag_bound(shape)
    return rep.h_max if rep.applicable else 0
