"""Exact scalars and dense linear algebra (F_p, Q, polynomials in t, jets)."""

from flagrank.exactalg.flatlimit import flat_limit, generic_rank
from flagrank.exactalg.linalg import (
    DEFAULT_PRIME,
    SECOND_PRIME,
    InconsistencyError,
    SubspaceBasis,
    UnsupportedScalarError,
    intersect_dim,
    left_kernel,
    matmul,
    nullspace,
    rank,
    rref,
    to_modp,
)
from flagrank.exactalg.scalars import Jet, MPoly, TPoly, jet_eval

__all__ = [
    "DEFAULT_PRIME",
    "SECOND_PRIME",
    "InconsistencyError",
    "Jet",
    "MPoly",
    "SubspaceBasis",
    "TPoly",
    "UnsupportedScalarError",
    "flat_limit",
    "generic_rank",
    "intersect_dim",
    "jet_eval",
    "left_kernel",
    "matmul",
    "nullspace",
    "rank",
    "rref",
    "to_modp",
]
