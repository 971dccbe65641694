"""Negative-kernel tests, double-simplex searches and constructive embeddings.

The generalized-roundness inequality compares, at an exponent t, the
within-list distances of two n-point index lists against the cross
distances.  Lists may repeat indices (within and across); at n = 2 the
inequality is exactly the quadrilateral inequality.

A symmetric vanishing-diagonal matrix H is a negative kernel when its
quadratic form is non-positive on mean-zero vectors; that is equivalent
to the centred matrix P H P having no positive eigenvalue, which is what
:func:`is_negative_kernel` checks.  Distance powers d^p are negative
kernels exactly up to the space's generalized roundness, and the
threshold is found by bisection in :func:`gr_via_kernel`.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

from .config import DEFAULT_CONFIG, RunConfig
from .engine import (
    INF,
    Anomaly,
    _cached_quad_table,
    _finish_table,
    _net_terms,
    _scalar_scan,
    _scan_table,
)
from .errors import (
    AsymmetricInput,
    InvalidParameter,
    KernelNotNegative,
    NonzeroDiagonal,
)
from .metric import FiniteMetricSpace


@dataclass(frozen=True)
class DoubleSimplex:
    """Two equal-length index lists into a space; repeats allowed."""

    space: FiniteMetricSpace
    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self):
        if len(self.a) != len(self.b) or len(self.a) < 2:
            raise InvalidParameter("both lists must have the same length n >= 2")

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def cross_lengths(self) -> list[float]:
        d = self.space.dist
        return [float(d[i, j]) for i in self.a for j in self.b]

    @property
    def within_lengths(self) -> list[float]:
        # pairs of positions, not of values: repeats inside a list count
        d = self.space.dist
        out = []
        for side in (self.a, self.b):
            for p in range(len(side)):
                for q in range(p + 1, len(side)):
                    out.append(float(d[side[p], side[q]]))
        return out


def simplex_deficit(m: FiniteMetricSpace, s: DoubleSimplex, t: float) -> float:
    """Cross power sum minus within power sum; non-negative exactly when the
    generalized-roundness inequality holds at t for s."""
    if t < 0:
        raise InvalidParameter(f"exponent must be >= 0, got {t}")
    d = m.dist
    cross = sum(d[i, j] ** t for i in s.a for j in s.b if d[i, j] > 0)
    within = 0.0
    for side in (s.a, s.b):
        for p in range(len(side)):
            for q in range(p + 1, len(side)):
                if d[side[p], side[q]] > 0:
                    within += d[side[p], side[q]] ** t
    return float(cross - within)


def simplex_critical_exponent(
    m: FiniteMetricSpace, s: DoubleSimplex, cfg: RunConfig = DEFAULT_CONFIG
) -> float:
    """First sign change of the simplex deficit on the scan grid above 0,
    refined by bisection; INF when none occurs up to cfg.qmax."""
    d = m.dist
    cross = [float(d[i, j]) for i in s.a for j in s.b]
    within = []
    for side in (s.a, s.b):
        for p in range(len(side)):
            for q in range(p + 1, len(side)):
                within.append(float(d[side[p], side[q]]))
    vals, coef = _net_terms(cross, within)
    crossing, _ = _scalar_scan(vals, coef, 0.0, cfg)
    return crossing


# ---------------------------------------------------------------------------
# exhaustive / sampled upper-bound search


@dataclass(frozen=True)
class GrSearchResult:
    lower: float
    upper: float
    witness: DoubleSimplex | None
    anomalies: tuple[Anomaly, ...]
    simplex_count: int
    seed: int
    elapsed_ms: float


def _triple_table(m: FiniteMetricSpace):
    """Profile table of every unordered pair of 3-index multisets."""
    n = m.size
    values, inv = np.unique(m.dist, return_inverse=True)
    iu = inv.reshape(n, n).astype(np.int64)
    triples = np.array(list(combinations_with_replacement(range(n), 3)), dtype=np.int64)
    M = triples.shape[0]
    ii, jj = np.triu_indices(M)
    a = triples[ii]  # (C, 3)
    b = triples[jj]
    cols = [iu[a[:, p], b[:, q]] for p in range(3) for q in range(3)]
    for side in (a, b):
        cols += [iu[side[:, 0], side[:, 1]], iu[side[:, 0], side[:, 2]], iu[side[:, 1], side[:, 2]]]
    idx = np.stack(cols, axis=1)
    coeff = np.tile(np.array([1.0] * 9 + [-1.0] * 6), (idx.shape[0], 1))

    def make_config(i: int, j: int) -> DoubleSimplex:
        return DoubleSimplex(m, tuple(int(x) for x in triples[i]), tuple(int(x) for x in triples[j]))

    return _finish_table(values, idx, coeff, ii, jj, int(ii.size), make_config)


def _sampled_table(m: FiniteMetricSpace, size: int, count: int, rng):
    n = m.size
    values, inv = np.unique(m.dist, return_inverse=True)
    iu = inv.reshape(n, n).astype(np.int64)
    a = rng.integers(0, n, size=(count, size))
    b = rng.integers(0, n, size=(count, size))
    cols = [iu[a[:, p], b[:, q]] for p in range(size) for q in range(size)]
    for side in (a, b):
        for p in range(size):
            for q in range(p + 1, size):
                cols.append(iu[side[:, p], side[:, q]])
    idx = np.stack(cols, axis=1)
    within_count = size * (size - 1)
    coeff = np.tile(
        np.array([1.0] * (size * size) + [-1.0] * within_count), (idx.shape[0], 1)
    )
    lists_a = [tuple(int(x) for x in row) for row in a]
    lists_b = [tuple(int(x) for x in row) for row in b]

    def make_config(i: int, _j: int) -> DoubleSimplex:
        return DoubleSimplex(m, lists_a[i], lists_b[i])

    reps = np.arange(count, dtype=np.int64)
    return _finish_table(values, idx, coeff, reps, np.zeros(count, dtype=np.int64),
                         count, make_config)


def gr_upper_search(
    m: FiniteMetricSpace,
    max_n: int = 3,
    budget: int = 2000,
    cfg: RunConfig = DEFAULT_CONFIG,
) -> GrSearchResult:
    """Upper-bound the generalized roundness by configuration search.

    Enumerates every n = 2 configuration; n = 3 exhaustively when the
    space has at most 8 points, by seeded sampling otherwise; sizes above
    3 (up to max_n) by seeded sampling, splitting the budget evenly.  The
    reported upper bound is the least critical exponent found, with the
    stage-then-enumeration-order tie break; the lower end of the bound is
    the trivial 0.
    """
    if max_n < 2:
        raise InvalidParameter(f"max_n must be >= 2, got {max_n}")
    started = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    stages = [("quads", _cached_quad_table(m))]
    sampled_sizes = []
    if max_n >= 3:
        if m.size <= 8:
            stages.append(("triples", _triple_table(m)))
        else:
            sampled_sizes.append(3)
    sampled_sizes.extend(range(4, max_n + 1))
    per_size = budget // len(sampled_sizes) if sampled_sizes else 0
    for size in sampled_sizes:
        if per_size > 0:
            stages.append((f"sampled{size}", _sampled_table(m, size, per_size, rng)))

    best = INF
    witness: DoubleSimplex | None = None
    anomalies: list[Anomaly] = []
    total = 0
    for name, table in stages:
        total += table.config_count
        scan = _scan_table(table, 0.0, cfg)
        for rw, t in scan.anomalies:
            anomalies.append(Anomaly(table.make_config(int(table.rep_a[rw]), int(table.rep_b[rw])), t))
        if scan.crossing < best:
            best = scan.crossing
            cfgobj = table.make_config(
                int(table.rep_a[scan.witness_row]), int(table.rep_b[scan.witness_row])
            )
            if name == "quads":
                witness = DoubleSimplex(m, (cfgobj.i00, cfgobj.i11), (cfgobj.i01, cfgobj.i10))
            else:
                witness = cfgobj
    elapsed = (time.perf_counter() - started) * 1000.0
    return GrSearchResult(
        lower=0.0,
        upper=best,
        witness=witness,
        anomalies=tuple(anomalies),
        simplex_count=total,
        seed=cfg.seed,
        elapsed_ms=elapsed,
    )


# ---------------------------------------------------------------------------
# negative kernels


@dataclass(frozen=True)
class KernelReport:
    p: float
    max_projected_eigenvalue: float
    is_negative: bool
    tol: float


def power_matrix(m: FiniteMetricSpace, p: float) -> np.ndarray:
    """Entrywise p-th power of the distance matrix, with 0^p := 0."""
    if p < 0:
        raise InvalidParameter(f"exponent must be >= 0, got {p}")
    d = m.dist
    with np.errstate(over="ignore"):
        return np.where(d > 0, d ** p, 0.0)


def _center(H: np.ndarray) -> np.ndarray:
    # P H P with P = I - J/n, written via row/column means
    rm = H.mean(axis=1, keepdims=True)
    cm = H.mean(axis=0, keepdims=True)
    M = H - rm - cm + H.mean()
    return 0.5 * (M + M.T)


def is_negative_kernel(H, tol: float | None = None, p: float = math.nan) -> KernelReport:
    """Is the quadratic form of H non-positive on every mean-zero vector?

    Decided through the largest eigenvalue of the centred matrix; the
    default tolerance is 1e-9 times the largest entry magnitude.
    """
    H = np.asarray(H, dtype=float)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise InvalidParameter("kernel matrix must be square")
    if (H != H.T).any():
        raise AsymmetricInput("kernel matrix is not symmetric")
    if (np.diag(H) != 0).any():
        raise NonzeroDiagonal("kernel matrix has nonzero diagonal entries")
    if tol is None:
        tol = 1e-9 * float(np.abs(H).max(initial=0.0))
    if H.shape[0] == 1:
        max_eig = 0.0
    else:
        max_eig = float(np.linalg.eigvalsh(_center(H))[-1])
    return KernelReport(p=p, max_projected_eigenvalue=max_eig,
                        is_negative=max_eig <= tol, tol=float(tol))


def gr_via_kernel(m: FiniteMetricSpace, cfg: RunConfig = DEFAULT_CONFIG) -> float:
    """Threshold exponent below which distance powers stay negative kernels.

    The set of passing exponents is an interval starting at 0 (powers
    with a smaller exponent of a negative kernel remain negative
    kernels), so bisection over [0, cfg.qmax] is sound.  Returns the
    certified-passing end of the final bracket, or cfg.qmax as a
    sentinel when the test passes there.
    """

    def passes(p: float) -> bool:
        return is_negative_kernel(power_matrix(m, p), p=p).is_negative

    if passes(cfg.qmax):
        return cfg.qmax
    if not passes(0.0):
        return 0.0
    lo, hi = 0.0, cfg.qmax
    while hi - lo > cfg.tol:
        mid = 0.5 * (lo + hi)
        if passes(mid):
            lo = mid
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------------------
# embedding


@dataclass(frozen=True)
class EmbeddingResult:
    coords: np.ndarray
    max_relative_error: float

    @property
    def dims(self) -> int:
        return self.coords.shape[1]


def schoenberg_embed(m: FiniteMetricSpace, p: float, cfg: RunConfig = DEFAULT_CONFIG) -> EmbeddingResult:
    """Point coordinates whose squared Euclidean distances reproduce d^p.

    Classical double centring: eigendecompose -1/2 P H P, clamp
    eigenvalues below 1e-9 of the largest to zero, and scale the
    eigenvectors.  Requires the kernel test to pass at p.
    """
    H = power_matrix(m, p)
    report = is_negative_kernel(H, p=p)
    if not report.is_negative:
        raise KernelNotNegative(
            f"d^{p} is not a negative kernel (max centred eigenvalue "
            f"{report.max_projected_eigenvalue:.3e} > {report.tol:.3e})"
        )
    n = m.size
    G = -0.5 * _center(H)
    w, U = np.linalg.eigh(G)
    w = w[::-1].copy()
    U = U[:, ::-1].copy()
    wmax = float(w[0]) if n else 0.0
    w[w < 1e-9 * max(wmax, 0.0)] = 0.0
    keep = w > 0
    if keep.any():
        coords = U[:, keep] * np.sqrt(w[keep])[None, :]
    else:
        coords = np.zeros((n, 1))
    sq = ((coords[:, None, :] - coords[None, :, :]) ** 2).sum(axis=2)
    denom = np.maximum(H, 1e-12)
    err = float((np.abs(sq - H) / denom).max()) if n > 1 else 0.0
    return EmbeddingResult(coords=coords, max_relative_error=err)


def embedding_csv(result: EmbeddingResult, labels) -> str:
    """CSV text: one row per point, label column then coordinate columns."""
    k = result.dims
    lines = ["label," + ",".join(f"x{i}" for i in range(k))]
    for lab, row in zip(labels, result.coords):
        lines.append(str(lab) + "," + ",".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"
