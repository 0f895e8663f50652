"""Dense exact linear algebra over F_p and Q.

Matrices over F_p are numpy ``int64`` arrays with entries in ``[0, p)``; the
default primes are below 2^31 so every product of two residues fits in a
signed 64-bit word.  Larger primes fall back to ``object`` arrays of Python
ints.  Matrices over Q are handled as Python ints / ``Fraction`` objects:
rank uses fraction-free (Bareiss) elimination, echelon forms use
``Fraction`` Gauss-Jordan.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

import numpy as np

DEFAULT_PRIME = 2147483647  # 2^31 - 1
SECOND_PRIME = 2147483629  # largest prime below DEFAULT_PRIME

# (p-1)^2 must fit in int64 for the vectorised update M - outer(col, row)
_INT64_PRIME_LIMIT = 3037000499


class UnsupportedScalarError(TypeError):
    """Operation not defined for the scalar kind (e.g. rank over a ring)."""


class InconsistencyError(ArithmeticError):
    """Two exact computations that must agree did not (bug or unlucky prime)."""


def _dtype_for(p: int):
    return np.int64 if p < _INT64_PRIME_LIMIT else object


def _reduce_scalar(x, p: int) -> int:
    if isinstance(x, Fraction):
        return x.numerator % p * pow(x.denominator % p, -1, p) % p
    if not isinstance(x, (int, np.integer)):
        raise UnsupportedScalarError(f"expected a field scalar, got {type(x).__name__}")
    return int(x) % p


def to_modp(M, p: int) -> np.ndarray:
    """Reduce an integer/rational matrix modulo ``p``."""
    arr = np.asarray(M)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.size == 0:
        return np.zeros(arr.shape, dtype=_dtype_for(p))
    if arr.dtype != object and np.issubdtype(arr.dtype, np.integer):
        if p < _INT64_PRIME_LIMIT:
            return np.mod(arr.astype(np.int64), p)
        arr = arr.astype(object)
    flat = [_reduce_scalar(x, p) for x in arr.ravel()]
    return np.array(flat, dtype=_dtype_for(p)).reshape(arr.shape)


def rref_modp(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form over F_p; returns (nonzero rows, pivot columns)."""
    A = to_modp(M, p).copy()
    nrows, ncols = A.shape
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = A[r] * inv % p
        col = A[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            A[others] = (A[others] - np.outer(col[others], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank_modp(M, p: int) -> int:
    A = to_modp(M, p).copy()
    nrows, ncols = A.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r, c:] = A[r, c:] * inv % p
        below = A[r + 1:, c]
        rows = np.flatnonzero(below) + r + 1
        if rows.size:
            A[rows, c:] = (A[rows, c:] - np.outer(A[rows, c], A[r, c:])) % p
        r += 1
    return r


def integer_rows(M) -> list[list[int]]:
    """Scale each row of a rational matrix to a primitive integer row."""
    arr = np.asarray(M, dtype=object)
    if arr.size == 0:
        return []
    out = []
    for row in arr.reshape(arr.shape[0], -1):
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        ints = [int(x * den) for x in row]
        g = 0
        for x in ints:
            g = gcd(g, x)
        if g > 1:
            ints = [x // g for x in ints]
        out.append(ints)
    return out


def matmul(A, B, p: int | None = None) -> np.ndarray:
    """Matrix product, reduced mod ``p`` without int64 overflow."""
    A = np.asarray(A)
    B = np.asarray(B)
    if p is None:
        return np.asarray(A, dtype=object).dot(np.asarray(B, dtype=object))
    out = np.zeros((A.shape[0], B.shape[1]), dtype=_dtype_for(p))
    for k in range(A.shape[1]):
        col = A[:, k]
        if not col.any():
            continue
        out = (out + np.outer(col, B[k])) % p
    return out


def rank_rational(M) -> int:
    """Exact rank over Q by fraction-free Bareiss elimination."""
    rows = integer_rows(M)
    seen = set()
    uniq = []
    for row in rows:
        if not any(row):
            continue
        lead = next(x for x in row if x)
        key = tuple(row) if lead > 0 else tuple(-x for x in row)
        if key not in seen:
            seen.add(key)
            uniq.append(list(key))
    if not uniq:
        return 0
    A = np.array(uniq, dtype=object)
    nrows, ncols = A.shape
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        nz = [i for i in range(r, nrows) if A[i, c] != 0]
        if not nz:
            continue
        piv = nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        pv = A[r, c]
        if r + 1 < nrows:
            below = A[r + 1:, c:]
            A[r + 1:, c:] = (pv * below - np.outer(below[:, 0], A[r, c:])) // prev
        prev = pv
        r += 1
    return r


def rref_rational(M) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form over Q with ``Fraction`` entries."""
    arr = np.asarray(M, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    A = np.array([[Fraction(x) for x in row] for row in arr], dtype=object).reshape(arr.shape)
    nrows, ncols = A.shape
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        nz = [i for i in range(r, nrows) if A[i, c] != 0]
        if not nz:
            continue
        piv = nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] / A[r, c]
        for i in range(nrows):
            if i != r and A[i, c] != 0:
                A[i] = A[i] - A[i, c] * A[r]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M, p: int | None = None) -> int:
    """Exact rank over F_p (``p`` given) or Q (``p is None``)."""
    arr = np.asarray(M, dtype=object) if p is None else M
    if p is None:
        if arr.size == 0:
            return 0
        for x in arr.ravel():
            if not isinstance(x, (int, Fraction, np.integer)):
                raise UnsupportedScalarError(f"rank needs field scalars, got {type(x).__name__}")
        return rank_rational(arr)
    return rank_modp(M, p)


def rref(M, p: int | None = None) -> tuple[np.ndarray, list[int]]:
    return rref_rational(M) if p is None else rref_modp(M, p)


def nullspace(M, p: int | None = None) -> np.ndarray:
    """Basis (as rows) of ``{x : M x = 0}``."""
    arr = np.asarray(M)
    ncols = arr.shape[1]
    R, pivots = rref(arr, p)
    free = [c for c in range(ncols) if c not in set(pivots)]
    if p is None:
        basis = np.zeros((len(free), ncols), dtype=object)
        basis[:] = Fraction(0)
    else:
        basis = np.zeros((len(free), ncols), dtype=_dtype_for(p))
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = -R[i, f] if p is None else (-R[i, f]) % p
    return basis


def left_kernel(M, p: int | None = None) -> np.ndarray:
    """Basis (as rows) of ``{c : c M = 0}``."""
    arr = np.asarray(M)
    return nullspace(arr.T, p)


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """A linear subspace of K^ambient stored as a reduced row-echelon basis.

    ``p`` is the characteristic (``None`` for Q).  All subspaces are affine
    cones: the projective dimension is ``rank - 1``.
    """

    rows: np.ndarray
    ambient: int
    p: int | None = None
    pivots: tuple[int, ...] = field(default=())

    @classmethod
    def span(cls, rows, ambient: int | None = None, p: int | None = None) -> SubspaceBasis:
        arr = np.asarray(rows, dtype=object if p is None else None)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, ambient or 0)
        if ambient is None:
            ambient = arr.shape[1]
        if arr.shape[0] == 0:
            empty = np.zeros((0, ambient), dtype=object if p is None else _dtype_for(p))
            return cls(empty, ambient, p, ())
        if arr.shape[1] != ambient:
            raise ValueError(f"rows have {arr.shape[1]} columns, ambient is {ambient}")
        R, pivots = rref(arr, p)
        R.setflags(write=False)
        return cls(R, ambient, p, tuple(pivots))

    @classmethod
    def coordinate(cls, support, ambient: int, p: int | None = None) -> SubspaceBasis:
        support = sorted(set(support))
        dtype = object if p is None else _dtype_for(p)
        R = np.zeros((len(support), ambient), dtype=dtype)
        if p is None:
            R[:] = Fraction(0)
        for i, c in enumerate(support):
            R[i, c] = 1 if p is not None else Fraction(1)
        R.setflags(write=False)
        return cls(R, ambient, p, tuple(support))

    @property
    def rank(self) -> int:
        return self.rows.shape[0]

    def _check(self, other: SubspaceBasis) -> None:
        if self.ambient != other.ambient:
            raise ValueError(f"ambient mismatch: {self.ambient} vs {other.ambient}")
        if self.p != other.p:
            raise ValueError(f"field mismatch: p={self.p} vs p={other.p}")

    def join(self, other: SubspaceBasis) -> SubspaceBasis:
        self._check(other)
        return SubspaceBasis.span(np.vstack([self.rows, other.rows]), self.ambient, self.p)

    def intersect(self, other: SubspaceBasis) -> SubspaceBasis:
        self._check(other)
        if self.rank == 0 or other.rank == 0:
            return SubspaceBasis.span([], self.ambient, self.p)
        stacked = np.vstack([self.rows, other.rows])
        K = left_kernel(stacked, self.p)
        if K.shape[0] == 0:
            return SubspaceBasis.span([], self.ambient, self.p)
        vecs = matmul(K[:, : self.rank], self.rows, self.p)
        return SubspaceBasis.span(vecs, self.ambient, self.p)

    def vanishing_on(self, columns) -> SubspaceBasis:
        """Subspace of vectors in ``self`` whose listed coordinates are zero."""
        cols = sorted(set(columns))
        if not cols or self.rank == 0:
            return self
        K = left_kernel(self.rows[:, cols], self.p)
        if K.shape[0] == 0:
            return SubspaceBasis.span([], self.ambient, self.p)
        vecs = matmul(K, self.rows, self.p)
        return SubspaceBasis.span(vecs, self.ambient, self.p)

    def contains(self, other: SubspaceBasis) -> bool:
        self._check(other)
        return self.join(other).rank == self.rank

    def same_space(self, other: SubspaceBasis) -> bool:
        return self.rank == other.rank and self.contains(other)

    def contains_vector(self, vec) -> bool:
        other = SubspaceBasis.span([list(vec)], self.ambient, self.p)
        return self.contains(other)


def intersect_dim(A: SubspaceBasis, B: SubspaceBasis) -> int:
    """dim(A cap B) = rank A + rank B - rank(A stacked on B)."""
    return A.rank + B.rank - A.join(B).rank
