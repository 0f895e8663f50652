"""Independent reference implementations used only by the tests.

They deliberately avoid the package's own chart, minor and rank code:
charts are built from the block description, minors come from sympy's
determinant, derivatives from sympy differentiation and ranks from sympy's
DomainMatrix over QQ.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

import sympy
from sympy.polys.matrices import DomainMatrix


def chart_symbols(ks, n, product_mode=False):
    """Chart matrices (sympy) and their symbols, built from the block description."""
    syms = []
    mats = []
    if product_mode:
        for b, k in enumerate(ks):
            M = sympy.zeros(k + 1, n + 1)
            for i in range(k + 1):
                M[i, i] = 1
                for j in range(k + 1, n + 1):
                    x = sympy.Symbol(f"x{b}_{i}_{j}")
                    syms.append(x)
                    M[i, j] = x
            mats.append(M)
        return mats, syms
    top = ks[-1]
    M = sympy.zeros(top + 1, n + 1)
    band_end = {}
    prev = -1
    for k in ks:
        for i in range(prev + 1, k + 1):
            band_end[i] = k
        prev = k
    for i in range(top + 1):
        M[i, i] = 1
        for j in range(band_end[i] + 1, n + 1):
            x = sympy.Symbol(f"x_{i}_{j}")
            syms.append(x)
            M[i, j] = x
    return [M], syms


def coordinates(ks, n, product_mode=False):
    mats, syms = chart_symbols(ks, n, product_mode)
    factors = []
    for idx, k in enumerate(ks):
        M = mats[idx] if product_mode else mats[0]
        rows = M[: k + 1, :]
        factors.append([rows.extract(list(range(k + 1)), list(S)).det() for S in combinations(range(n + 1), k + 1)])
    coords = [sympy.expand(sympy.Mul(*c)) for c in product(*factors)]
    return coords, syms


def qq_rank(rows) -> int:
    if not rows:
        return 0
    dm = DomainMatrix([[sympy.QQ(int(x)) for x in r] for r in rows], (len(rows), len(rows[0])), sympy.QQ)
    return dm.rank()


def derivative_rank(ks, n, s) -> int:
    """Rank of all partial derivatives of order <= s of the chart at the origin.

    Derivatives are built one variable at a time from the previous order
    (non-decreasing variable sequences), dropping branches that vanish.
    """
    coords, syms = coordinates(ks, n)
    polys = [sympy.Poly(z, *syms) for z in coords]
    level = {(): polys}
    rows = []
    for order in range(s + 1):
        nxt = {}
        for combo, ds in level.items():
            row = [int(d.coeff_monomial(1)) for d in ds]
            if any(row):
                rows.append(row)
            if order == s:
                continue
            start = combo[-1] if combo else 0
            for i in range(start, len(syms)):
                new = [d.diff(syms[i]) for d in ds]
                if any(not d.is_zero for d in new):
                    nxt[combo + (i,)] = new
        level = nxt
    return qq_rank(rows)


def weyl_dim_partition(ks, n) -> int:
    """GL_{n+1} dimension formula with the partition of the fundamental weights."""
    lam = [0] * (n + 1)
    for k in ks:
        for i in range(k + 1):
            lam[i] += 1
    total = Fraction(1)
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            total *= Fraction(lam[i] - lam[j] + j - i, j - i)
    assert total.denominator == 1
    return int(total)


def h_m_from_binary(m: int, k: int) -> int:
    """Definition of h_m read directly off the binary string of k+1."""
    if k == 0:
        return 0
    digits = bin(k + 1)[2:][::-1]
    return sum(m ** (lam - 1) for lam, d in enumerate(digits) if d == "1" and lam >= 1)
