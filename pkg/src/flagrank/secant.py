"""Secant dimensions through Terracini's lemma.

The tangent space to ``Sec_h(X)`` at a general point of the span of
``x_1, ..., x_h`` is the span of the tangent spaces at the ``x_i``.  We pick
random chart points over F_p, move each by a random element of
``GL_{n+1}(F_p)``, stack their (affine cone) tangent rows and take the rank.
The rank at random points never exceeds the generic rank, so a full
expected rank is an exact certificate; a short rank is only reported as
certified when a second prime and seed reproduce it.
"""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from flagrank.exactalg import DEFAULT_PRIME, SECOND_PRIME, InconsistencyError, rank
from flagrank.exactalg.linalg import _dtype_for
from flagrank.flagvar import (
    SingularSampleError,
    embed,
    linear_span,
    plucker_levels,
    random_params,
    random_transform,
    segre,
    tangent_rows,
)
from flagrank.indexcomb import multi_indices
from flagrank.shape import FlagShape, ShapeError, parse_shape

log = logging.getLogger(__name__)

AMBIENT_CAP = 200_000
ROW_CAP = 5_000
SAMPLE_RETRIES = 3


class CapExceeded(RuntimeError):
    """The requested computation is larger than the configured caps."""


class DegenerateSample(SingularSampleError):
    """Random points kept producing tangent spaces of too small rank."""


@dataclass(frozen=True)
class DefectReport:
    shape: str
    h: int
    expected_dim: int | None
    computed_dim: int | None
    defect: int | None
    prime: int
    seed: int
    trials: int
    certified: bool
    confirm_prime: int | None = None
    confirm_dim: int | None = None
    fills_ambient: bool = False
    error: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> DefectReport:
        return cls(**d)

    @property
    def key(self) -> tuple:
        return (self.shape, self.h, self.prime, self.seed, self.trials)


def ambient_projective_dim(shape: FlagShape) -> int:
    """Projective dimension of the linear span of the embedded variety."""
    return shape.span_dim


def expected_secant_dim(shape: FlagShape, h: int) -> int:
    if h < 1:
        raise ValueError("h must be at least 1")
    return min(h * shape.dim + h - 1, ambient_projective_dim(shape))


def check_caps(shape: FlagShape, h: int, ambient_cap: int = AMBIENT_CAP, row_cap: int = ROW_CAP) -> None:
    if shape.ambient_size > ambient_cap:
        raise CapExceeded(f"{shape}: ambient has {shape.ambient_size} coordinates (cap {ambient_cap})")
    rows = h * (shape.dim + 1)
    if rows > row_cap:
        raise CapExceeded(f"{shape}, h={h}: {rows} tangent rows (cap {row_cap})")


def _point_rows(shape: FlagShape, rng: np.random.Generator, p: int) -> np.ndarray:
    """Tangent rows at one random point, retrying if the rank comes out short."""
    for _ in range(SAMPLE_RETRIES):
        g = random_transform(shape.n + 1, rng, p)
        rows = tangent_rows(shape, random_params(shape, rng, p), p, g)
        if rank(rows, p) == shape.dim + 1:
            return rows
    raise DegenerateSample(f"{shape}: {SAMPLE_RETRIES} random points all had short tangent rank")


def secant_rank(shape: FlagShape, h: int, p: int, seed: int, trials: int = 1) -> int:
    """Max over ``trials`` of the rank of ``h`` stacked random tangent spaces."""
    best = 0
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        blocks = [_point_rows(shape, rng, p) for _ in range(h)]
        best = max(best, rank(np.vstack(blocks).astype(_dtype_for(p)), p))
    return best


def terracini_dim(
    shape: FlagShape,
    h: int,
    prime: int = DEFAULT_PRIME,
    seed: int = 0,
    trials: int = 1,
    force: bool = False,
    confirm: bool = True,
    ambient_cap: int = AMBIENT_CAP,
    row_cap: int = ROW_CAP,
) -> DefectReport:
    """Computed dimension and defect of the ``h``-secant variety.

    With ``confirm`` the rank is recomputed with a second prime and
    ``seed + 1``; the report is certified when both runs agree.
    """
    if h < 1:
        raise ValueError("h must be at least 1")
    if not force:
        check_caps(shape, h, ambient_cap, row_cap)
    expected = expected_secant_dim(shape, h)
    ambient = ambient_projective_dim(shape)
    computed = secant_rank(shape, h, prime, seed, trials) - 1
    if computed > expected:
        raise InconsistencyError(f"{shape}, h={h}: rank exceeds the expected bound")
    confirm_prime = confirm_dim = None
    certified = False
    if confirm:
        confirm_prime = SECOND_PRIME if prime != SECOND_PRIME else DEFAULT_PRIME
        confirm_dim = secant_rank(shape, h, confirm_prime, seed + 1, trials) - 1
        certified = confirm_dim == computed
    return DefectReport(
        shape=str(shape),
        h=h,
        expected_dim=expected,
        computed_dim=computed,
        defect=expected - computed,
        prime=prime,
        seed=seed,
        trials=trials,
        certified=certified,
        confirm_prime=confirm_prime,
        confirm_dim=confirm_dim,
        fills_ambient=computed == ambient,
    )


# --- cache and scans ----------------------------------------------------------


class ReportCache:
    """Append-only JSONL cache of defect reports; the last line for a key wins."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._entries: dict[tuple, DefectReport] = {}
        if self.path.exists():
            for line in self.path.read_text().splitlines():
                line = line.strip()
                if not line:
                    continue
                try:
                    rep = DefectReport.from_dict(json.loads(line))
                except (ValueError, TypeError):
                    log.warning("skipping malformed cache line in %s", self.path)
                    continue
                self._entries[rep.key] = rep

    def get(self, shape: FlagShape, h: int, prime: int, seed: int, trials: int) -> DefectReport | None:
        return self._entries.get((str(shape), h, prime, seed, trials))

    def put(self, rep: DefectReport) -> None:
        if rep.error is not None:
            return
        self._entries[rep.key] = rep
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a") as fh:
            fh.write(rep.to_json() + "\n")

    def __len__(self) -> int:
        return len(self._entries)


def _error_report(shape: FlagShape, h: int, prime: int, seed: int, trials: int, err: Exception) -> DefectReport:
    try:
        expected = expected_secant_dim(shape, h)
    except ValueError:
        expected = None
    return DefectReport(
        shape=str(shape), h=h, expected_dim=expected, computed_dim=None, defect=None,
        prime=prime, seed=seed, trials=trials, certified=False,
        error=f"{type(err).__name__}: {err}",
    )


def _run_entry(args) -> DefectReport:
    text, h, prime, seed, trials, force = args
    shape = parse_shape(text)
    try:
        return terracini_dim(shape, h, prime, seed, trials, force)
    except (CapExceeded, SingularSampleError, InconsistencyError, ShapeError, ValueError) as err:
        return _error_report(shape, h, prime, seed, trials, err)


def should_skip(shape: FlagShape, h: int) -> bool:
    """Skip ``h`` when ``Sec_{h-1}`` is already expected to fill the span.

    Entries with ``expected = ambient`` are still run, because a defective
    variety whose ``h``-secant is expected to just fill the space shows up
    exactly there.
    """
    return h >= 2 and expected_secant_dim(shape, h - 1) >= ambient_projective_dim(shape)


def defect_scan(
    shapes,
    h_values,
    prime: int = DEFAULT_PRIME,
    seed: int = 0,
    trials: int = 1,
    force: bool = False,
    cache: ReportCache | None = None,
    budget: float | None = None,
    workers: int = 1,
):
    """Yield defect reports over the ``shapes x h_values`` grid.

    Entries past the point where the secant is expected to fill the span are
    skipped unless ``force``; per-entry failures become reports with
    ``error`` set.  ``budget`` is a wall-clock limit in seconds; once it is
    spent, no new entries are started.
    """
    start = time.monotonic()
    jobs = []
    for shape in shapes:
        for h in h_values:
            if not force and should_skip(shape, h):
                continue
            jobs.append((shape, h))

    def over_budget() -> bool:
        return budget is not None and time.monotonic() - start > budget

    pending = []
    for shape, h in jobs:
        hit = cache.get(shape, h, prime, seed, trials) if cache is not None else None
        pending.append((shape, h, hit))

    if workers > 1:
        todo = [(str(s), h, prime, seed, trials, force) for s, h, hit in pending if hit is None]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = iter([pool.submit(_run_entry, job) for job in todo])
            for shape, h, hit in pending:
                if hit is not None:
                    yield hit
                    continue
                fut = next(futures)
                if over_budget():
                    fut.cancel()
                    continue
                rep = fut.result()
                if cache is not None:
                    cache.put(rep)
                yield rep
        return

    for shape, h, hit in pending:
        if hit is not None:
            yield hit
            continue
        if over_budget():
            return
        rep = _run_entry((str(shape), h, prime, seed, trials, force))
        if cache is not None:
            cache.put(rep)
        yield rep


# --- the chordal variety of point-hyperplane flags -----------------------------


def chordal_equation(n: int) -> np.ndarray:
    """Coefficients of ``sum_i (-1)^i Z_{i, [0,n] minus i}`` on F(0, n-1; n)."""
    shape = FlagShape((0, n - 1), n)
    full = tuple(range(n + 1))
    vec = np.zeros(shape.ambient_size, dtype=np.int64)
    for pos, (a, b) in enumerate(multi_indices(shape)):
        (i,) = a
        if b == tuple(c for c in full if c != i):
            vec[pos] = (-1) ** i
    return vec


def chordal_equation_value(point, hyperplane) -> int:
    """Evaluate the equation on a point and a hyperplane given by ``n`` spanning rows."""
    n = len(point) - 1
    rows = [list(r) for r in hyperplane]
    factors = [list(point), plucker_levels(rows, [n - 1])[n - 1]]
    coords = segre(factors)
    return int(sum(int(c) * int(z) for c, z in zip(chordal_equation(n), coords)))


def chordal_hypersurface_check(n: int, samples: int = 50, p: int = DEFAULT_PRIME, seed: int = 0) -> bool:
    """The point-hyperplane flag variety spans exactly the hyperplane cut out by
    the incidence equation.

    Checks that ``samples`` random points satisfy the equation and that the
    linear span has rank ``(n+1)^2 - 1``, so the equation is the only one.
    """
    if n < 2:
        raise ShapeError("need n >= 2")
    shape = FlagShape((0, n - 1), n)
    eq = chordal_equation(n)
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        z = embed(shape, random_params(shape, rng, p))
        if sum(int(c) * int(v) for c, v in zip(eq, z)) % p:
            return False
    span = linear_span(shape, p, seed)
    if span.rank != (n + 1) ** 2 - 1:
        return False
    return all(sum(int(a) * int(b) for a, b in zip(row, eq)) % p == 0 for row in span.rows)
