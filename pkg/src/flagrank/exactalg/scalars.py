"""Ring element types used on top of F_p and Q.

* :class:`Jet` -- first-order jets ``a + sum_i b_i eps_i`` with ``eps_i eps_j = 0``,
  giving exact first derivatives of polynomial expressions.
* :class:`TPoly` -- univariate polynomials in the curve parameter ``t``.
* :class:`MPoly` -- sparse multivariate polynomials with optional degree
  truncation, used to expand chart coordinates and read off Taylor
  coefficients.

All three support ``+``, ``-``, ``*`` with each other's base scalars (plain
ints / Fractions), which is all the determinant code needs.  Division is
deliberately unsupported.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from flagrank.exactalg.linalg import UnsupportedScalarError, _dtype_for


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, np.integer))


class Jet:
    """First-order jet over F_p (``p`` given) or Q.

    ``value`` is a scalar, ``eps`` a numpy vector of partial derivatives.
    """

    __slots__ = ("value", "eps", "p")

    def __init__(self, value, eps, p: int | None = None):
        self.p = p
        if p is None:
            self.value = value
            self.eps = np.asarray(eps, dtype=object)
        else:
            self.value = int(value) % p
            self.eps = np.asarray(eps, dtype=_dtype_for(p)) % p

    @classmethod
    def variable(cls, value, index: int, nvars: int, p: int | None = None) -> Jet:
        eps = np.zeros(nvars, dtype=object if p is None else _dtype_for(p))
        eps[index] = 1
        return cls(value, eps, p)

    @classmethod
    def constant(cls, value, nvars: int, p: int | None = None) -> Jet:
        eps = np.zeros(nvars, dtype=object if p is None else _dtype_for(p))
        return cls(value, eps, p)

    def _new(self, value, eps) -> Jet:
        out = Jet.__new__(Jet)
        out.p = self.p
        if self.p is None:
            out.value, out.eps = value, eps
        else:
            out.value, out.eps = value % self.p, eps % self.p
        return out

    def _scalar(self, x):
        if isinstance(x, Fraction) and self.p is not None:
            return x.numerator % self.p * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p if self.p is not None else x

    def __add__(self, other):
        if isinstance(other, Jet):
            return self._new(self.value + other.value, self.eps + other.eps)
        if _is_scalar(other):
            return self._new(self.value + self._scalar(other), self.eps)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return self._new(-self.value, -self.eps)

    def __sub__(self, other):
        if isinstance(other, Jet):
            return self._new(self.value - other.value, self.eps - other.eps)
        if _is_scalar(other):
            return self._new(self.value - self._scalar(other), self.eps)
        return NotImplemented

    def __rsub__(self, other):
        if _is_scalar(other):
            return self._new(self._scalar(other) - self.value, -self.eps)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Jet):
            if self.p is None:
                eps = self.value * other.eps + other.value * self.eps
            else:
                eps = (self.value * other.eps % self.p) + (other.value * self.eps % self.p)
            return self._new(self.value * other.value, eps)
        if _is_scalar(other):
            c = self._scalar(other)
            return self._new(self.value * c, self.eps * c)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        raise UnsupportedScalarError("division is not supported on jets")

    __rtruediv__ = __truediv__

    def __repr__(self) -> str:
        return f"Jet({self.value}, {list(self.eps)})"


def jet_eval(f, base, var: int, p: int | None = None):
    """Evaluate ``f`` at ``base`` with a nilpotent perturbation of coordinate ``var``.

    ``f`` takes a list of ring elements and must only use ``+``, ``-``, ``*``.
    Returns ``(value, partial derivative)``.
    """
    args = [
        Jet.variable(x, 0, 1, p) if i == var else Jet.constant(x, 1, p)
        for i, x in enumerate(base)
    ]
    out = f(args)
    if isinstance(out, Jet):
        return out.value, (out.eps[0] if p is None else int(out.eps[0]))
    return (out % p if p is not None else out), 0


class TPoly:
    """Polynomial in ``t`` with coefficients in F_p or Q, stored low degree first."""

    __slots__ = ("coeffs", "p")

    def __init__(self, coeffs, p: int | None = None):
        cs = [c % p for c in coeffs] if p is not None else list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.p = p

    @classmethod
    def t(cls, p: int | None = None) -> TPoly:
        return cls((0, 1), p)

    def _lift(self, other) -> TPoly | None:
        if isinstance(other, TPoly):
            return other
        if _is_scalar(other):
            if isinstance(other, Fraction) and self.p is not None:
                other = other.numerator * pow(other.denominator, -1, self.p)
            return TPoly((other,), self.p)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return TPoly(out, self.p)

    __radd__ = __add__

    def __neg__(self):
        return TPoly([-c for c in self.coeffs], self.p)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return TPoly((), self.p)
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return TPoly(out, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        raise UnsupportedScalarError("division is not supported on polynomials in t")

    def __eq__(self, other):
        o = self._lift(other)
        return o is not None and self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.p))

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def valuation(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __call__(self, t0):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t0 + c
        return acc % self.p if self.p is not None else acc

    def __repr__(self) -> str:
        return f"TPoly({list(self.coeffs)})"


class MPoly:
    """Sparse multivariate polynomial over Z/Q, terms of degree > max_degree dropped.

    Terms are ``{exponent tuple: coefficient}``.
    """

    __slots__ = ("terms", "nvars", "max_degree")

    def __init__(self, terms: dict, nvars: int, max_degree: int | None = None):
        self.terms = {m: c for m, c in terms.items() if c != 0}
        self.nvars = nvars
        self.max_degree = max_degree

    @classmethod
    def variable(cls, index: int, nvars: int, max_degree: int | None = None) -> MPoly:
        mono = tuple(1 if i == index else 0 for i in range(nvars))
        if max_degree is not None and max_degree < 1:
            return cls({}, nvars, max_degree)
        return cls({mono: 1}, nvars, max_degree)

    def _lift(self, other):
        if isinstance(other, MPoly):
            return other
        if _is_scalar(other):
            return MPoly({(0,) * self.nvars: other}, self.nvars, self.max_degree)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out.get(m, 0) + c
        return MPoly(out, self.nvars, self.max_degree)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({m: -c for m, c in self.terms.items()}, self.nvars, self.max_degree)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if _is_scalar(other):
            if other == 0:
                return MPoly({}, self.nvars, self.max_degree)
            return MPoly({m: c * other for m, c in self.terms.items()}, self.nvars, self.max_degree)
        if not isinstance(other, MPoly):
            return NotImplemented
        cap = self.max_degree
        out: dict = {}
        for m1, c1 in self.terms.items():
            d1 = sum(m1)
            for m2, c2 in other.terms.items():
                if cap is not None and d1 + sum(m2) > cap:
                    continue
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return MPoly(out, self.nvars, cap)

    __rmul__ = __mul__

    def __truediv__(self, other):
        raise UnsupportedScalarError("division is not supported on polynomials")

    def __repr__(self) -> str:
        return f"MPoly({self.terms})"
