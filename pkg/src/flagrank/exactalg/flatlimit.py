"""Flat limits at t = 0 of one-parameter families of row spaces."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

import numpy as np

from flagrank.exactalg.linalg import (
    InconsistencyError,
    SubspaceBasis,
    _dtype_for,
    left_kernel,
    rank,
)
from flagrank.exactalg.scalars import TPoly


def _coefficient_stack(row, p: int | None) -> np.ndarray:
    """Turn a row of TPoly/scalar entries into a (degree+1, ncols) coefficient array."""
    polys = [x if isinstance(x, TPoly) else TPoly((x,), p) for x in row]
    deg = max((q.degree for q in polys), default=-1)
    dtype = object if p is None else _dtype_for(p)
    out = np.zeros((max(deg + 1, 1), len(polys)), dtype=dtype)
    for j, q in enumerate(polys):
        for d, c in enumerate(q.coeffs):
            out[d, j] = c if p is None else c % p
    return out


def _trim(stack: np.ndarray) -> np.ndarray | None:
    """Drop the t-adic valuation (leading zero layers) and trailing zero layers."""
    nz = [d for d in range(stack.shape[0]) if stack[d].any()]
    if not nz:
        return None
    return stack[nz[0]: nz[-1] + 1]


def _primitive(stack: np.ndarray) -> np.ndarray:
    g = 0
    for x in stack.ravel():
        g = gcd(g, int(x))
        if g == 1:
            return stack
    return stack // g if g > 1 else stack


def _eval(stack: np.ndarray, t0: int, p: int | None) -> np.ndarray:
    acc = np.zeros(stack.shape[1], dtype=stack.dtype)
    for d in range(stack.shape[0] - 1, -1, -1):
        acc = acc * t0 + stack[d]
        if p is not None:
            acc %= p
    return acc


def _independent_rows(stacks, p: int | None, t0: int) -> list[int]:
    """Greedy choice of rows that stay independent after specialising t = t0."""
    chosen: list[int] = []
    vals = []
    for i, st in enumerate(stacks):
        cand = vals + [_eval(st, t0, p)]
        if rank(np.array(cand, dtype=object if p is None else None), p) == len(cand):
            vals = cand
            chosen.append(i)
    return chosen


def generic_rank(rows, p: int | None = None, seed: int = 0, tries: int = 3) -> int:
    """Rank of a polynomial family at random parameter values (max over tries)."""
    stacks = [_coefficient_stack(r, p) for r in rows]
    rng = np.random.default_rng(seed)
    best = 0
    for _ in range(tries):
        t0 = int(rng.integers(1, (p or 10**6) - 1))
        vals = [_eval(st, t0, p) for st in stacks]
        if vals:
            best = max(best, rank(np.array(vals, dtype=object if p is None else None), p))
    return best


def flat_limit(rows, p: int | None = None, seed: int = 0) -> SubspaceBasis:
    """Limit at t = 0 of the row spaces of a matrix with polynomial entries in t.

    Rows are first cut down to a subset independent over K(t).  Each row is
    divided by its power of t; while the constant terms are dependent, the
    row taking part in a dependency is replaced by the combination, which
    raises its t-valuation.  The wedge of the rows bounds the total valuation
    gained, so the loop terminates.  The limit is the span of the final
    constant terms.
    """
    stacks = [_coefficient_stack(r, p) for r in rows]
    if not stacks:
        raise ValueError("flat_limit needs at least one row")
    ambient = stacks[0].shape[1]
    rng = np.random.default_rng(seed)
    modulus = p or 10**6
    chosen: list[int] = []
    for _ in range(3):
        t0 = int(rng.integers(1, modulus - 1))
        cand = _independent_rows(stacks, p, t0)
        if len(cand) > len(chosen):
            chosen = cand
    work = []
    for i in chosen:
        st = _trim(stacks[i])
        if st is None:
            raise InconsistencyError("zero row selected as independent")
        work.append(_primitive(st) if p is None else st)
    target = len(work)
    if target == 0:
        return SubspaceBasis.span([], ambient, p)

    max_steps = 1 + sum(st.shape[0] for st in work) * target
    for _ in range(max_steps):
        lead = np.array([st[0] for st in work], dtype=object if p is None else None)
        K = left_kernel(lead, p)
        if K.shape[0] == 0:
            return SubspaceBasis.span(lead, ambient, p)
        c = list(K[0])
        if p is None:
            den = lcm(*(Fraction(x).denominator for x in c))
            c = [int(Fraction(x) * den) for x in c]
        support = [j for j, x in enumerate(c) if x != 0]
        # replace the longest row in the relation: keeps degrees bounded
        i = max(support, key=lambda j: work[j].shape[0])
        depth = max(work[j].shape[0] for j in support)
        combo = np.zeros((depth, ambient), dtype=work[i].dtype)
        for j in support:
            combo[: work[j].shape[0]] += c[j] * work[j]
            if p is not None:
                combo %= p
        st = _trim(combo)
        if st is None:
            raise InconsistencyError("rank drop: rows dependent over the function field")
        work[i] = _primitive(st) if p is None else st
    raise InconsistencyError("flat limit did not stabilise")
