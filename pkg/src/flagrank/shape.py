"""Flag and product-of-Grassmannian shapes, plus the textual shape grammar.

A shape is ``(k_1 <= ... <= k_r; n)``.  In flag mode it denotes the flag
variety of nested subspaces of projective dimensions ``k_i`` in ``P^n``; in
product mode it denotes ``G(k_1, n) x ... x G(k_r, n)``.  Both live in the
Segre ambient of the Pluecker spaces, whose coordinates are indexed by
multi-indices (see :mod:`flagrank.indexcomb`).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod


class ShapeError(ValueError):
    """Invalid shape data (bad ks, n, or mismatched multi-index)."""


class ShapeParseError(ShapeError):
    def __init__(self, text: str, position: int, reason: str):
        self.text = text
        self.position = position
        self.reason = reason
        super().__init__(f"cannot parse shape {text!r} at position {position}: {reason}")


@dataclass(frozen=True)
class FlagShape:
    ks: tuple[int, ...]
    n: int
    product: bool = False

    def __post_init__(self):
        ks = tuple(int(k) for k in self.ks)
        object.__setattr__(self, "ks", ks)
        if not ks:
            raise ShapeError("need at least one k")
        if any(b < a for a, b in zip(ks, ks[1:])):
            raise ShapeError(f"ks must be non-decreasing, got {ks}")
        if ks[0] < 0 or ks[-1] >= self.n:
            raise ShapeError(f"need 0 <= k_1 and k_r < n, got ks={ks}, n={self.n}")

    @property
    def r(self) -> int:
        return len(self.ks)

    @property
    def k_max(self) -> int:
        return self.ks[-1]

    @property
    def alpha(self) -> int:
        """Number of pairwise independent coordinate points, floor((n+1)/(k_r+1))."""
        return (self.n + 1) // (self.k_max + 1)

    @property
    def diameter(self) -> int:
        """r + sum(k_i): the largest distance in the index set when n >= 2k_r+1."""
        return self.r + sum(self.ks)

    @property
    def dim(self) -> int:
        n, ks = self.n, self.ks
        if self.product:
            return sum((k + 1) * (n - k) for k in ks)
        total = (ks[0] + 1) * (n - ks[0])
        for prev, k in zip(ks, ks[1:]):
            total += (n - k) * (k - prev)
        return total

    @property
    def factor_sizes(self) -> tuple[int, ...]:
        return tuple(comb(self.n + 1, k + 1) for k in self.ks)

    @property
    def ambient_size(self) -> int:
        """Number of Segre coordinates (affine count; projective dim is this minus 1)."""
        return prod(self.factor_sizes)

    @property
    def highest_weight(self) -> tuple[int, ...]:
        """The a-vector a_1..a_n: a_{k+1} counts how many k_i equal k."""
        a = [0] * self.n
        for k in self.ks:
            a[k] += 1
        return tuple(a)

    @property
    def weyl_dim(self) -> int:
        """Dimension of the irreducible module spanned by the flag variety.

        Product mode returns the full ambient size (the product spans it).
        """
        if self.product:
            return self.ambient_size
        a = self.highest_weight
        total = Fraction(1)
        m = self.n + 1
        for i in range(1, m):
            run = 0
            for j in range(i + 1, m + 1):
                run += a[j - 2]
                total *= Fraction(run + j - i, j - i)
        if total.denominator != 1:
            raise ArithmeticError(f"non-integral Weyl dimension {total} for {self}")
        return int(total)

    @property
    def span_dim(self) -> int:
        """Projective dimension of the linear span of the variety."""
        return self.weyl_dim - 1

    def as_product(self) -> FlagShape:
        return FlagShape(self.ks, self.n, product=True)

    def __str__(self) -> str:
        return format_shape(self)


_SHAPE_RE = re.compile(r"\d+")


def parse_shape(text: str) -> FlagShape:
    """Parse ``[G:]k1,k2,...,kr;n``.  Raises :class:`ShapeParseError` with a position."""
    pos = 0
    product = False
    if text.startswith("G:"):
        product = True
        pos = 2
    ks: list[int] = []
    while True:
        m = _SHAPE_RE.match(text, pos)
        if m is None:
            raise ShapeParseError(text, pos, "expected a non-negative integer")
        ks.append(int(m.group()))
        if len(ks) > 1 and ks[-1] < ks[-2]:
            raise ShapeParseError(text, pos, "ks must be non-decreasing")
        pos = m.end()
        if pos >= len(text):
            raise ShapeParseError(text, pos, "expected ',' or ';'")
        sep = text[pos]
        pos += 1
        if sep == ";":
            break
        if sep != ",":
            raise ShapeParseError(text, pos - 1, f"unexpected character {sep!r}")
    m = _SHAPE_RE.match(text, pos)
    if m is None:
        raise ShapeParseError(text, pos, "expected n")
    n = int(m.group())
    if m.end() != len(text):
        raise ShapeParseError(text, m.end(), "trailing characters")
    if ks[-1] >= n:
        raise ShapeParseError(text, pos, f"need k_r < n (k_r={ks[-1]}, n={n})")
    return FlagShape(tuple(ks), n, product=product)


def format_shape(shape: FlagShape) -> str:
    body = ",".join(str(k) for k in shape.ks) + f";{shape.n}"
    return ("G:" if shape.product else "") + body
