"""Quadrilateral enumeration and roundness bounds for finite metric spaces.

The roundness inequality compares, at an exponent t, the two diagonals of
a four-point configuration against its four edges.  This module

* enumerates every configuration of four (not necessarily distinct)
  indices up to the relabelling symmetries of the configuration,
* locates each configuration's critical exponent (the first exponent at
  or above the scan start where the inequality fails), and
* reduces them to certified lower/upper bounds for the whole space.

Configurations with identical length data are collapsed into "profiles"
before any exponent work; all searches run on a fixed grid (``cfg.grid``
cells per unit exponent) refined by bisection to ``cfg.tol``.  Scanning
skips grid regions where a profile's sign is provably stable (the
largest surviving length term dominates); the reported results are
identical to scanning every grid point.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .config import DEFAULT_CONFIG, RunConfig
from .errors import InvalidParameter, InvalidQuad
from .metric import FiniteMetricSpace

INF = math.inf

_PACK1_LIMIT = 1024        # distinct lengths packable into one int64 key
_PACK2_LIMIT = 1 << 21     # two-key fallback
_CHUNK_CONFIGS = 1 << 19   # streamed configurations per block (fixed: determinism)
_CHUNK_GRID = 512          # grid points evaluated per block


# ---------------------------------------------------------------------------
# configurations


@dataclass(frozen=True)
class Quad:
    """Four indexed points of a space, split into two diagonal pairs
    {i00, i11} and {i01, i10}; the four cross pairs are the edges."""

    space: FiniteMetricSpace
    i00: int
    i01: int
    i10: int
    i11: int

    @property
    def edge_lengths(self) -> tuple[float, float, float, float]:
        d = self.space.dist
        return (
            float(d[self.i00, self.i01]),
            float(d[self.i00, self.i10]),
            float(d[self.i11, self.i01]),
            float(d[self.i11, self.i10]),
        )

    @property
    def diagonal_lengths(self) -> tuple[float, float]:
        d = self.space.dist
        return (float(d[self.i00, self.i11]), float(d[self.i01, self.i10]))

    @property
    def indices(self) -> tuple[int, int, int, int]:
        return (self.i00, self.i01, self.i10, self.i11)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.space.labels[i] for i in self.indices)

    def deficit(self, t: float) -> float:
        return deficit_from_lengths(self.edge_lengths, self.diagonal_lengths, t)


@dataclass(frozen=True)
class Cube:
    """2^n points indexed by bit vectors; pairs differing in one bit are
    edges, pairs differing in every bit are diagonals."""

    dim: int
    vertices: tuple[int, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidParameter("cube dimension must be >= 1")
        if len(self.vertices) != 1 << self.dim:
            raise InvalidParameter(
                f"a {self.dim}-cube needs {1 << self.dim} vertices, got {len(self.vertices)}"
            )


@dataclass(frozen=True)
class Anomaly:
    """A configuration whose deficit turned positive again above its first
    sign change, with the grid exponent where that was detected."""

    config: object
    t: float


@dataclass(frozen=True)
class RoundnessResult:
    lower: float
    upper: float
    witness: Quad | None
    anomalies: tuple[Anomaly, ...]
    quad_count: int
    elapsed_ms: float


# ---------------------------------------------------------------------------
# deficits

def _pow_sum(lengths, t: float) -> float:
    # 0^t := 0 for every t >= 0: a collapsed side contributes no length
    return float(sum(l ** t for l in lengths if l > 0))


def deficit_from_lengths(edges, diagonals, t: float) -> float:
    """Edge power sum minus diagonal power sum at exponent t."""
    if t < 0:
        raise InvalidParameter(f"exponent must be >= 0, got {t}")
    return _pow_sum(edges, t) - _pow_sum(diagonals, t)


def quad_deficit(q: Quad, t: float) -> float:
    """Non-negative exactly when the roundness inequality holds at t for q."""
    return deficit_from_lengths(q.edge_lengths, q.diagonal_lengths, t)


def _net_terms(edges, diagonals) -> tuple[np.ndarray, np.ndarray]:
    """Collapse raw lengths into (values, net coefficients), dropping zeros."""
    acc: dict[float, float] = {}
    for l in edges:
        if l > 0:
            acc[l] = acc.get(l, 0.0) + 1.0
    for l in diagonals:
        if l > 0:
            acc[l] = acc.get(l, 0.0) - 1.0
    vals = np.array(sorted(v for v, c in acc.items() if c != 0.0))
    coef = np.array([acc[v] for v in vals])
    return vals, coef


def _scalar_scan(vals, coef, t_start: float, cfg: RunConfig):
    """Reference scan of one configuration over the full exponent grid.

    Returns (crossing, reentry_t): crossing is the bisected first sign
    change (INF when the deficit never goes negative on the grid), and
    reentry_t the first later grid point with a strictly positive value.
    Deliberately straightforward; the vectorised scanner is tested
    against this.
    """
    if vals.size == 0:
        return INF, None
    scale = vals[-1]
    v = vals / scale
    h = 1.0 / cfg.grid
    count = int(round((cfg.qmax - t_start) * cfg.grid)) + 1

    def f(t):
        return float(coef @ v ** t)

    first_neg = -1
    reentry = None
    for base in range(0, count, 4096):
        ts = t_start + np.arange(base, min(base + 4096, count)) * h
        vv = coef @ v[:, None] ** ts[None, :]
        if first_neg < 0:
            neg = vv < 0
            if neg.any():
                first_neg = base + int(neg.argmax())
        if first_neg >= 0:
            loc = np.arange(base, base + ts.size)
            pos = (vv > 0) & (loc > first_neg)
            if pos.any():
                reentry = t_start + (base + int(pos.argmax())) * h
                break
    if first_neg < 0:
        return INF, None
    if first_neg == 0:
        return t_start, reentry
    lo = t_start + (first_neg - 1) * h
    hi = t_start + first_neg * h
    while hi - lo > cfg.tol:
        mid = 0.5 * (lo + hi)
        if f(mid) >= 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), reentry


def quad_critical_exponent(q: Quad, cfg: RunConfig = DEFAULT_CONFIG) -> float:
    """Largest t >= 1 below which the inequality holds for this quad alone.

    Located as the first sign change of the deficit on the scan grid,
    refined by bisection; INF when the deficit stays non-negative up to
    cfg.qmax.  Raises InvalidQuad when the deficit is already negative
    beyond tolerance at t = 1 (a non-metric input).
    """
    if quad_deficit(q, 1.0) < -cfg.tol:
        raise InvalidQuad(f"deficit at t=1 is negative for quad {q.indices}")
    vals, coef = _net_terms(q.edge_lengths, q.diagonal_lengths)
    crossing, _ = _scalar_scan(vals, coef, 1.0, cfg)
    return crossing


def enumerate_quads(m: FiniteMetricSpace) -> Iterator[Quad]:
    """Every four-index configuration up to relabelling symmetry.

    A configuration is an unordered pair of unordered index pairs (the
    two diagonals); index repetition is allowed, so degenerate
    configurations such as midpoint triples are included.  Emission
    order is lexicographic in the canonical pair-of-pairs form.  Meant
    for small spaces; the estimators stream the same set internally.
    """
    n = m.size
    pairs = [(a, b) for a in range(n) for b in range(a, n)]
    for k, (a1, b1) in enumerate(pairs):
        for a2, b2 in pairs[k:]:
            yield Quad(m, i00=a1, i01=a2, i10=b2, i11=b1)


def quad_count(n: int) -> int:
    """Number of configurations enumerate_quads yields for an n-point space."""
    pairs = n * (n + 1) // 2
    return pairs * (pairs + 1) // 2


# ---------------------------------------------------------------------------
# profile table: configurations collapsed by their net length terms


@dataclass
class _ProfileTable:
    values: np.ndarray              # (u,) unique raw lengths, ascending
    scaled: np.ndarray              # values / max value; index 0 may be the zero length
    scale: float
    idx: np.ndarray                 # (P, W) sorted value indices, merged slots
    coeff: np.ndarray               # (P, W) net coefficients, 0 for dead slots
    rep_a: np.ndarray               # (P,) first-occurrence config id, major part
    rep_b: np.ndarray               # (P,) minor part
    config_count: int
    make_config: Callable[[int, int], object] = field(repr=False)
    dense: np.ndarray | None = None  # (P, u) coefficient matrix when u is small

    @property
    def rows(self) -> int:
        return self.idx.shape[0]


def _net_rows(idx: np.ndarray, coeff: np.ndarray, zero_index: int | None):
    """Sort each row's value indices and merge equal slots; zero out the
    zero-length column (it never contributes)."""
    order = np.argsort(idx, axis=1, kind="stable")
    idx = np.take_along_axis(idx, order, axis=1)
    coeff = np.take_along_axis(coeff, order, axis=1).astype(np.float64)
    for j in range(idx.shape[1] - 1):
        same = idx[:, j] == idx[:, j + 1]
        coeff[same, j + 1] += coeff[same, j]
        coeff[same, j] = 0.0
    if zero_index is not None:
        coeff[idx == zero_index] = 0.0
    return idx, coeff


def _finish_table(values, idx, coeff, rep_a, rep_b, count, make_config) -> _ProfileTable:
    zero_index = 0 if values.size and values[0] == 0.0 else None
    idx, coeff = _net_rows(np.asarray(idx, dtype=np.int32), np.asarray(coeff), zero_index)
    scale = float(values[-1]) if values.size and values[-1] > 0 else 1.0
    scaled = values / scale
    dense = None
    if values.size <= 64:
        dense = np.zeros((idx.shape[0], values.size))
        rows = np.repeat(np.arange(idx.shape[0]), idx.shape[1])
        np.add.at(dense, (rows, idx.ravel()), coeff.ravel())
    return _ProfileTable(
        values=values,
        scaled=scaled,
        scale=scale,
        idx=idx,
        coeff=coeff,
        rep_a=np.asarray(rep_a, dtype=np.int64),
        rep_b=np.asarray(rep_b, dtype=np.int64),
        config_count=count,
        make_config=make_config,
        dense=dense,
    )


def _sort4(e0, e1, e2, e3):
    lo0 = np.minimum(e0, e1); hi0 = np.maximum(e0, e1)
    lo1 = np.minimum(e2, e3); hi1 = np.maximum(e2, e3)
    s0 = np.minimum(lo0, lo1); t0 = np.maximum(lo0, lo1)
    s1 = np.minimum(hi0, hi1); t1 = np.maximum(hi0, hi1)
    m1 = np.minimum(t0, s1); m2 = np.maximum(t0, s1)
    return s0, m1, m2, t1


def _quad_profile_table(m: FiniteMetricSpace) -> _ProfileTable:
    """Stream every quad configuration, deduplicated by sorted length data."""
    n = m.size
    values, inv = np.unique(m.dist, return_inverse=True)
    u = values.size
    if u > _PACK2_LIMIT:
        raise InvalidParameter("too many distinct distances for exhaustive enumeration")
    iu = inv.reshape(n, n).astype(np.int64)
    flat = iu.ravel()
    A64, B64 = np.triu_indices(n)
    A = A64.astype(np.int64)
    B = B64.astype(np.int64)
    npairs = A.size
    pair_v = iu[A, B]

    key_to_row: dict = {}
    rep_a: list[int] = []
    rep_b: list[int] = []

    k0 = 0
    while k0 < npairs:
        k1, cnt = k0, 0
        while k1 < npairs and cnt < _CHUNK_CONFIGS:
            cnt += npairs - k1
            k1 += 1
        ks = np.arange(k0, k1, dtype=np.int64)
        kk = np.repeat(ks, npairs - ks)
        ll = np.concatenate([np.arange(k, npairs, dtype=np.int64) for k in range(k0, k1)])
        a1, b1 = A[kk], B[kk]
        a2, b2 = A[ll], B[ll]
        e0 = flat[a1 * n + a2]
        e1 = flat[a1 * n + b2]
        e2 = flat[b1 * n + a2]
        e3 = flat[b1 * n + b2]
        s0, m1, m2, t1 = _sort4(e0, e1, e2, e3)
        d1, d2 = pair_v[kk], pair_v[ll]
        dlo = np.minimum(d1, d2)
        dhi = np.maximum(d1, d2)
        if u <= _PACK1_LIMIT:
            key = ((((s0 * u + m1) * u + m2) * u + t1) * u + dlo) * u + dhi
        else:
            hi = (s0 * u + m1) * u + m2
            lo = (t1 * u + dlo) * u + dhi
            key = np.empty(hi.size, dtype=np.complex128)
            key.real = hi.view(np.float64)
            key.imag = lo.view(np.float64)
        uniq, first = np.unique(key, return_index=True)
        if u <= _PACK1_LIMIT:
            uniq_list = uniq.tolist()
        else:
            uniq_list = [bytes(x) for x in uniq.view(np.float64).reshape(-1, 2).view(np.uint8).reshape(-1, 16)]
        for key_val, pos in zip(uniq_list, first.tolist()):
            if key_val not in key_to_row:
                key_to_row[key_val] = len(rep_a)
                rep_a.append(int(kk[pos]))
                rep_b.append(int(ll[pos]))
        k0 = k1

    rk = np.asarray(rep_a, dtype=np.int64)
    rl = np.asarray(rep_b, dtype=np.int64)
    a1, b1 = A[rk], B[rk]
    a2, b2 = A[rl], B[rl]
    idx = np.stack(
        [flat[a1 * n + a2], flat[a1 * n + b2], flat[b1 * n + a2], flat[b1 * n + b2],
         pair_v[rk], pair_v[rl]],
        axis=1,
    )
    coeff = np.tile(np.array([1.0, 1.0, 1.0, 1.0, -1.0, -1.0]), (idx.shape[0], 1))

    def make_config(k: int, l: int) -> Quad:
        return Quad(m, i00=int(A[k]), i01=int(A[l]), i10=int(B[l]), i11=int(B[k]))

    return _finish_table(values, idx, coeff, rep_a, rep_b, quad_count(n), make_config)


_TABLE_CACHE: dict[int, tuple[FiniteMetricSpace, _ProfileTable]] = {}


def _cached_quad_table(m: FiniteMetricSpace) -> _ProfileTable:
    # keyed by object identity; spaces are immutable
    hit = _TABLE_CACHE.get(id(m))
    if hit is not None and hit[0] is m:
        return hit[1]
    table = _quad_profile_table(m)
    if len(_TABLE_CACHE) >= 8:
        _TABLE_CACHE.pop(next(iter(_TABLE_CACHE)))
    _TABLE_CACHE[id(m)] = (m, table)
    return table


# ---------------------------------------------------------------------------
# vectorised scan over the profile table


def _eval_block(table: _ProfileTable, rows: np.ndarray | None, ts: np.ndarray) -> np.ndarray:
    """Scaled deficits for the given profile rows at the given exponents."""
    v = table.scaled
    V = v[:, None] ** ts[None, :]
    V[v == 0.0, :] = 0.0  # 0^0 := 0
    if table.dense is not None:
        C = table.dense if rows is None else table.dense[rows]
        return C @ V
    idx = table.idx if rows is None else table.idx[rows]
    coeff = table.coeff if rows is None else table.coeff[rows]
    out = np.zeros((idx.shape[0], ts.size))
    for j in range(idx.shape[1]):
        out += coeff[:, j, None] * V[idx[:, j], :]
    return out


def _eval_rowwise(table: _ProfileTable, rows: np.ndarray, tvec: np.ndarray) -> np.ndarray:
    """One scaled deficit per row, each at its own exponent."""
    v = table.scaled[table.idx[rows]]           # (m, W)
    powed = np.where(v > 0, v, 1.0) ** tvec[:, None]
    powed[v == 0.0] = 0.0
    return (table.coeff[rows] * powed).sum(axis=1)


def _stability_bounds(table: _ProfileTable):
    """Per row: the top surviving length term (value, |coefficient|) and the
    asymptotic deficit sign it forces.  Once |c_top| v_top^t exceeds the sum
    of the other terms at some t, it does so for every larger t (the top
    value is the largest), so the sign is frozen from that point on."""
    v = np.where(table.coeff != 0.0, table.scaled[table.idx], -1.0)
    P = v.shape[0]
    top = v.argmax(axis=1)
    r = np.arange(P)
    vtop = v[r, top]
    ctop = table.coeff[r, top]
    dead = vtop <= 0.0  # all coefficients cancelled
    asym = np.sign(ctop)
    asym[dead] = 0.0
    return asym, np.abs(ctop), np.where(dead, 1.0, vtop), dead


@dataclass
class _ScanOutcome:
    crossing: float
    witness_row: int
    lower: float
    anomalies: list[tuple[int, float]]
    start_violation_row: int


def _scan_table(table: _ProfileTable, t_start: float, cfg: RunConfig) -> _ScanOutcome:
    """Locate the first sign change over all profiles, the first grid point
    where some deficit drops below -tol, and every grid-visible re-entry."""
    tol, qmax, grid = cfg.tol, cfg.qmax, cfg.grid
    h = 1.0 / grid
    G = int(round((qmax - t_start) * grid)) + 1
    P = table.rows
    scale = table.scale

    def tgrid(i):
        return t_start + i * h

    def thresholds(ts):
        with np.errstate(over="ignore", under="ignore"):
            return -tol * scale ** (-ts)

    asym, ctop_abs, vtop, dead = _stability_bounds(table)
    abs_table = _ProfileTable(
        values=table.values, scaled=table.scaled, scale=table.scale,
        idx=table.idx, coeff=np.abs(table.coeff), rep_a=table.rep_a,
        rep_b=table.rep_b, config_count=table.config_count,
        make_config=table.make_config,
        dense=None if table.dense is None else np.abs(table.dense),
    )
    crossed_at = np.full(P, -1, dtype=np.int64)
    reentry_at = np.full(P, -1, dtype=np.int64)
    global_neg = -1
    global_fail = -1
    start_violation = -1
    cand_rows = np.empty(0, dtype=np.int64)
    active = np.nonzero(~dead)[0]

    base = 0
    while base < G and active.size:
        g = min(max(64, (1 << 24) // max(1, active.size)), _CHUNK_GRID, G - base)
        ts = tgrid(base + np.arange(g))
        vals = _eval_block(table, active, ts)
        thr = thresholds(ts)
        neg = vals < 0
        anyneg = neg.any(axis=1)
        if anyneg.any():
            firstneg = np.where(anyneg, neg.argmax(axis=1), g)
            fresh = anyneg & (crossed_at[active] < 0)
            crossed_at[active[fresh]] = base + firstneg[fresh]
            if global_neg < 0:
                local = int(firstneg[anyneg].min())
                global_neg = base + local
                cand_rows = active[vals[:, local] < 0]
            if base == 0 and start_violation < 0:
                bad0 = vals[:, 0] < thr[0]
                if bad0.any():
                    start_violation = int(active[bad0.argmax()])
        if global_fail < 0:
            fail_cols = (vals < thr[None, :]).any(axis=0)
            if fail_cols.any():
                global_fail = base + int(fail_cols.argmax())
        ca = crossed_at[active]
        watch = (ca >= 0) & (reentry_at[active] < 0)
        if watch.any():
            loc = base + np.arange(g)[None, :]
            allowed = (vals > 0) & (loc > ca[:, None]) & watch[:, None]
            hasre = allowed.any(axis=1)
            reentry_at[active[hasre]] = base + allowed[hasre].argmax(axis=1)
        # freeze rows whose top term already dominates at the chunk end
        t_end = ts[-1]
        total_abs = _eval_block(abs_table, active, np.array([t_end]))[:, 0]
        done = 2.0 * ctop_abs[active] * vtop[active] ** t_end > total_abs
        if done.any():
            rows_done = active[done]
            up = asym[rows_done] > 0
            pending = up & (crossed_at[rows_done] >= 0) & (reentry_at[rows_done] < 0)
            if pending.any() and base + g < G:
                reentry_at[rows_done[pending]] = base + g
            active = active[~done]
        base += g

    # the chunk loop only tracked -tol failures among still-active rows; a
    # frozen row may have failed earlier, so re-resolve the first failure
    # over every crossed row on [global_neg, current global_fail]
    if global_neg >= 0 and global_fail != global_neg:
        crossed_rows = np.nonzero(crossed_at >= 0)[0]
        stop = G if global_fail < 0 else global_fail + 1
        base = global_neg
        found = -1
        while base < stop and found < 0:
            g = min(4 * _CHUNK_GRID, stop - base)
            ts = tgrid(base + np.arange(g))
            vals = _eval_block(table, crossed_rows, ts)
            fail_cols = (vals < thresholds(ts)[None, :]).any(axis=0)
            if fail_cols.any():
                found = base + int(fail_cols.argmax())
            base += g
        if found >= 0:
            global_fail = found

    # bisect the global first crossing, per candidate row (candidates were
    # captured from the scan values themselves, so boundary rounding between
    # BLAS code paths cannot empty the set)
    if global_neg < 0:
        crossing, witness_row = INF, -1
    else:
        cand = cand_rows
        if global_neg == 0:
            crossings = np.full(cand.size, t_start)
        else:
            lo = np.full(cand.size, tgrid(global_neg - 1))
            hi = np.full(cand.size, tgrid(global_neg))
            while float((hi - lo).max()) > tol:
                mid = 0.5 * (lo + hi)
                ok = _eval_rowwise(table, cand, mid) >= 0
                lo = np.where(ok, mid, lo)
                hi = np.where(ok, hi, mid)
            crossings = 0.5 * (lo + hi)
        best = crossings.min()
        tied = cand[crossings == best]
        order = np.lexsort((table.rep_b[tied], table.rep_a[tied]))
        witness_row = int(tied[order[0]])
        crossing = float(best)

    # bisect the first -tol failure of the pointwise minimum
    if global_fail < 0:
        lower = INF
    elif global_fail == 0:
        lower = t_start
    else:
        lo, hi = tgrid(global_fail - 1), tgrid(global_fail)

        def pred(t):
            col = _eval_block(table, None, np.array([t]))[:, 0]
            return float(col.min()) >= float(thresholds(np.array([t]))[0])

        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if pred(mid):
                lo = mid
            else:
                hi = mid
        lower = 0.5 * (lo + hi)

    anomalies = [(int(rw), float(tgrid(int(reentry_at[rw]))))
                 for rw in np.nonzero(reentry_at >= 0)[0]]
    anomalies.sort(key=lambda it: (it[1], int(table.rep_a[it[0]]), int(table.rep_b[it[0]])))
    return _ScanOutcome(crossing, witness_row, lower, anomalies, start_violation)


# ---------------------------------------------------------------------------
# public estimators


def roundness_predicate(
    m: FiniteMetricSpace, t: float, cfg: RunConfig = DEFAULT_CONFIG
) -> tuple[bool, Quad | None]:
    """Does every quad satisfy the inequality at exponent t (within -tol)?

    When false, the returned quad attains the most negative deficit.
    """
    if t < 1:
        raise InvalidParameter(f"roundness predicate needs t >= 1, got {t}")
    table = _cached_quad_table(m)
    col = _eval_block(table, None, np.array([float(t)]))[:, 0]
    with np.errstate(over="ignore", under="ignore"):
        thr = -cfg.tol * table.scale ** (-float(t))
    worst = int(col.argmin())
    if col[worst] >= thr:
        return True, None
    return False, table.make_config(int(table.rep_a[worst]), int(table.rep_b[worst]))


def roundness_estimate(m: FiniteMetricSpace, cfg: RunConfig = DEFAULT_CONFIG) -> RoundnessResult:
    """Certified two-sided roundness bound from exhaustive quad enumeration.

    upper is the least critical exponent over all quads, with an argmin
    witness (ties broken by the lexicographically least canonical index
    pair); lower is the largest exponent below which no quad violates the
    inequality by more than cfg.tol, clamped to upper so the pair always
    brackets.  Both are INF when no deficit ever goes negative up to
    cfg.qmax.  anomalies lists every quad whose deficit re-entered
    positivity above its first sign change, as seen on the scan grid.
    """
    started = time.perf_counter()
    table = _cached_quad_table(m)
    scan = _scan_table(table, 1.0, cfg)
    if scan.start_violation_row >= 0:
        rw = scan.start_violation_row
        bad = table.make_config(int(table.rep_a[rw]), int(table.rep_b[rw]))
        raise InvalidQuad(f"deficit at t=1 is negative for quad {bad.indices}")
    witness = None
    if scan.witness_row >= 0:
        witness = table.make_config(
            int(table.rep_a[scan.witness_row]), int(table.rep_b[scan.witness_row])
        )
    anomalies = tuple(
        Anomaly(table.make_config(int(table.rep_a[rw]), int(table.rep_b[rw])), t)
        for rw, t in scan.anomalies
    )
    lower = min(scan.lower, scan.crossing)
    elapsed = (time.perf_counter() - started) * 1000.0
    return RoundnessResult(
        lower=lower,
        upper=scan.crossing,
        witness=witness,
        anomalies=anomalies,
        quad_count=table.config_count,
        elapsed_ms=elapsed,
    )


def cube_check(
    m: FiniteMetricSpace, cube: Cube, t: float, tol: float = 1e-12
) -> tuple[float, bool]:
    """Deficit of an n-cube at exponent t, plus the min-diagonal bound.

    ratio_ok holds when the shortest diagonal is at most n^(1/t) times
    the longest edge (within a relative slack of tol).
    """
    if t < 1:
        raise InvalidParameter(f"cube check needs t >= 1, got {t}")
    n = cube.dim
    full = (1 << n) - 1
    edges: list[float] = []
    diags: list[float] = []
    d = m.dist
    for i in range(1 << n):
        for j in range(i + 1, 1 << n):
            x = i ^ j
            if x & (x - 1) == 0:
                edges.append(float(d[cube.vertices[i], cube.vertices[j]]))
            elif x == full:
                diags.append(float(d[cube.vertices[i], cube.vertices[j]]))
    deficit = deficit_from_lengths(edges, diags, t)
    d_min = min(diags)
    e_max = max(edges)
    ratio_ok = d_min <= n ** (1.0 / t) * e_max * (1 + tol) + tol
    return deficit, ratio_ok
