"""Built-in reproduction suite: one claim per headline calculation.

Each claim recomputes its target from scratch at the configured
tolerances and reports expected vs computed values; the CLI `repro`
subcommand and the acceptance tests both drive this module.  Randomised
claims use fixed seeds offset by cfg.seed so reports are reproducible.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .cayley import (
    augment_round_one,
    cayley_ball,
    is_sum_closed_triple,
    mask_to_generating_set,
    scan_z2,
    torsion_construction,
)
from .config import DEFAULT_CONFIG, RunConfig
from .engine import roundness_estimate, roundness_predicate
from .errors import UnsupportedOrder
from .groups import (
    Cyclic,
    Free,
    FreeAbelian,
    GroupElement,
    multiply,
    inverse,
    symmetric_closure,
)
from .kernels import gr_upper_search, gr_via_kernel, is_negative_kernel, power_matrix, schoenberg_embed
from .metric import FiniteMetricSpace, WeightedGraph, build_circle, build_from_graph

LOG2_3 = math.log2(3.0)


@dataclass(frozen=True)
class ClaimResult:
    claim_id: str
    expected: str
    computed: str
    passed: bool
    elapsed_ms: float


# --- shared corpora -----------------------------------------------------------


def cycle_graph(n: int) -> WeightedGraph:
    return WeightedGraph(n, tuple((i, (i + 1) % n, 1.0) for i in range(n)))


def complete_graph(n: int) -> WeightedGraph:
    return WeightedGraph(n, tuple((i, j, 1.0) for i in range(n) for j in range(i + 1, n)))


def path_graph(n: int) -> WeightedGraph:
    return WeightedGraph(n, tuple((i, i + 1, 1.0) for i in range(n - 1)))


def random_tree(n: int, rng) -> WeightedGraph:
    """Random recursive tree: vertex i attaches to a uniform earlier vertex."""
    edges = tuple((int(rng.integers(0, i)), i, 1.0) for i in range(1, n))
    return WeightedGraph(n, edges)


def has_midpoint_triple(m: FiniteMetricSpace) -> bool:
    d = m.dist
    n = m.size
    for y in range(n):
        for x in range(n):
            if x == y or d[x, y] <= 0:
                continue
            for z in range(n):
                if z == x or z == y:
                    continue
                if d[x, y] == d[y, z] and d[x, z] == 2 * d[x, y]:
                    return True
    return False


def _edge_bit(i: int, j: int, n: int) -> int:
    # upper-triangle bit layout, row-major
    if i > j:
        i, j = j, i
    return sum(n - 1 - k for k in range(i)) + (j - i - 1)


from functools import lru_cache


@lru_cache(maxsize=4)
def connected_graphs_up_to_iso(max_n: int):
    """Unit-weight connected graphs on 1..max_n vertices, one per isomorphism
    class (canonical form = minimal adjacency bitmask over all relabelings)."""
    from itertools import permutations

    out = []
    for n in range(1, max_n + 1):
        nbits = n * (n - 1) // 2
        masks = np.arange(1 << nbits, dtype=np.int64)
        canon = masks.copy()
        for perm in permutations(range(n)):
            permuted = np.zeros_like(masks)
            for i in range(n):
                for j in range(i + 1, n):
                    b = _edge_bit(i, j, n)
                    pb = _edge_bit(perm[i], perm[j], n)
                    permuted |= ((masks >> b) & 1) << pb
            np.minimum(canon, permuted, out=canon)
        reps = np.nonzero(canon == masks)[0]
        for mask in reps.tolist():
            edges = tuple(
                (i, j, 1.0)
                for i in range(n)
                for j in range(i + 1, n)
                if (mask >> _edge_bit(i, j, n)) & 1
            )
            # connectivity via union of reached vertices
            seen = {0}
            frontier = [0]
            adj = {v: [] for v in range(n)}
            for u, v, _ in edges:
                adj[u].append(v)
                adj[v].append(u)
            while frontier:
                u = frontier.pop()
                for v in adj[u]:
                    if v not in seen:
                        seen.add(v)
                        frontier.append(v)
            if len(seen) == n:
                out.append(build_from_graph(WeightedGraph(n, edges)))
    return tuple(out)


def hexagonal_generators():
    spec = FreeAbelian(2)
    return spec, symmetric_closure(
        spec,
        [GroupElement(spec, (1, 0)), GroupElement(spec, (0, 1)), GroupElement(spec, (1, 1))],
    )


def standard_z2_generators():
    spec = FreeAbelian(2)
    return spec, symmetric_closure(
        spec, [GroupElement(spec, (1, 0)), GroupElement(spec, (0, 1))]
    )


def growth_root(n: int, tol: float = 1e-12) -> float:
    """Root of (n+1)^t - n^t = 2, by plain bisection (independent oracle)."""
    lo, hi = 1.0, 4.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (n + 1) ** mid - n ** mid <= 2.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def f2_standard():
    spec = Free(2)
    x = GroupElement(spec, ((0, 1),))
    y = GroupElement(spec, ((1, 1),))
    return spec, x, y


# --- claims -------------------------------------------------------------------


def _claim(cid, expected, computed, passed) -> ClaimResult:
    return ClaimResult(cid, expected, computed, bool(passed), 0.0)


def _parallel_map(fn, items, cfg: RunConfig):
    """Map a pure function over independent inputs, collected by index, so
    the result never depends on scheduling or worker count."""
    items = list(items)
    if cfg.threads == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        return list(pool.map(fn, items))


def claim_z2_standard(cfg: RunConfig) -> ClaimResult:
    spec, gens = standard_z2_generators()
    ball = cayley_ball(spec, gens, 2, cfg)
    res = roundness_estimate(ball.space, cfg)
    w = res.witness
    ok = abs(res.upper - 1.0) <= 1e-9 and w is not None
    witness_desc = ""
    if w is not None:
        corners = [ball.elements[i].value for i in w.indices]
        # template [0, u, u+v, v] with corners (i00, i01, i10, i11) = (0, u, v, u+v)
        zero, u, v, uv = corners
        template = (
            zero == (0, 0)
            and tuple(a + b for a, b in zip(u, v)) == uv
            and w.edge_lengths == (1.0, 1.0, 1.0, 1.0)
            and w.diagonal_lengths == (2.0, 2.0)
        )
        ok = ok and template
        witness_desc = f"corners {corners}, edges {w.edge_lengths}, diagonals {w.diagonal_lengths}"
    return _claim(
        "z2_standard_roundness",
        "upper 1.0 +-1e-9 with witness [0,u,u+v,v], unit edges, length-2 diagonals",
        f"upper {res.upper!r}; {witness_desc}",
        ok,
    )


def claim_z2_hexagonal(cfg: RunConfig) -> ClaimResult:
    spec, gens = hexagonal_generators()
    uppers = []
    ok = True
    for radius in range(2, 7):
        ball = cayley_ball(spec, gens, radius, cfg)
        res = roundness_estimate(ball.space, cfg)
        uppers.append(res.upper)
        if uppers != sorted(uppers, reverse=True):
            ok = False
        if res.upper > growth_root(radius - 1) + 1e-9:
            ok = False
    if uppers[-1] > 1.30:
        ok = False
    return _claim(
        "z2_hexagonal_bounds",
        "non-increasing uppers for R=2..6, each <= root of (n+1)^t - n^t = 2 at n=R-1; "
        "final <= 1.30",
        f"uppers {[round(u, 6) for u in uppers]}",
        ok,
    )


def claim_random_trees(cfg: RunConfig) -> ClaimResult:
    rng = np.random.default_rng(1000 + cfg.seed)
    trees = [build_from_graph(random_tree(int(rng.integers(3, 41)), rng)) for _ in range(50)]

    def check(m):
        pred, _ = roundness_predicate(m, 2.0, cfg)
        res = roundness_estimate(m, cfg)
        want_two = has_midpoint_triple(m)
        return pred and ((abs(res.upper - 2.0) <= 1e-9) if want_two else True), res.upper, pred

    results = _parallel_map(check, trees, cfg)
    bad = [(k, trees[k].size, up, pred) for k, (ok, up, pred) in enumerate(results) if not ok]
    return _claim(
        "random_trees_roundness",
        "50 seeded trees (n<=40): predicate holds at t=2; upper 2.0 +-1e-9 when a "
        "midpoint triple exists",
        f"failures: {bad!r}" if bad else "all 50 trees pass",
        not bad,
    )


def claim_complete_graphs(cfg: RunConfig) -> ClaimResult:
    uppers = {}
    for n in (3, 4, 5):
        res = roundness_estimate(build_from_graph(complete_graph(n)), cfg)
        uppers[n] = res.upper
    ok = all(math.isinf(u) for u in uppers.values())
    return _claim(
        "complete_graphs_infinite",
        "K3, K4, K5 report upper inf",
        f"uppers {uppers!r}",
        ok,
    )


def claim_cycles(cfg: RunConfig) -> ClaimResult:
    vals = {}
    for n in (3, 4, 5, 6, 7, 8):
        vals[n] = roundness_estimate(build_from_graph(cycle_graph(n)), cfg).upper
    ok = (
        math.isinf(vals[3])
        and all(abs(vals[n] - 1.0) <= 1e-9 for n in (4, 6, 8))
        and all(vals[n] > 1.0 + 1e-6 for n in (5, 7))
    )
    return _claim(
        "cycle_roundness",
        "C4, C6, C8 upper 1.0 +-1e-9; C3 inf; C5, C7 above 1 + 1e-6 (values recorded)",
        f"uppers {{n: {', '.join(f'{n}: {v!r}' for n, v in vals.items())}}}",
        ok,
    )


def claim_circles(cfg: RunConfig) -> ClaimResult:
    uppers = {}
    ok = True
    for m in range(2, 7):
        res = roundness_estimate(build_circle(2 * m, 2.0 * m), cfg)
        uppers[m] = res.upper
        if abs(res.upper - 1.0) > 1e-9 or res.witness is None:
            ok = False
            continue
        # a betweenness witness makes the exponent-1 inequality tight
        if res.witness.deficit(1.0) != 0.0:
            ok = False
    return _claim(
        "circle_samples",
        "even circle samples (k=2m, L=2m, m=2..6) report upper 1.0 +-1e-9 with a "
        "witness tight at exponent 1",
        f"uppers {uppers!r}",
        ok,
    )


def claim_euclidean_plane(cfg: RunConfig) -> ClaimResult:
    from .metric import build_euclidean

    rng = np.random.default_rng(2000 + cfg.seed)
    samples = [build_euclidean(rng.uniform(-1.0, 1.0, size=(12, 2)), 2.0) for _ in range(200)]
    results = _parallel_map(lambda m: roundness_predicate(m, 2.0, cfg)[0], samples, cfg)
    fails = sum(1 for ok in results if not ok)
    return _claim(
        "euclidean_plane_exponent_two",
        "200 seeded 12-point plane samples satisfy the inequality at t=2 (tol 1e-9)",
        f"{200 - fails}/200 samples pass",
        fails == 0,
    )


def claim_f2_augmented(cfg: RunConfig) -> ClaimResult:
    spec, x, y = f2_standard()
    gens = symmetric_closure(spec, [x, y])
    res = augment_round_one(spec, gens, x, y, cfg)
    est = roundness_estimate(res.ball.space, cfg)
    labels = res.witness.labels
    ok = (
        len(res.generating_set) == 12
        and abs(est.upper - 1.0) <= 1e-9
        and labels == ("x", "y", "y^-1", "x^-1")
    )
    return _claim(
        "f2_augmented_roundness_one",
        "six-generator presentation: upper 1.0 with witness on (x, y, x^-1, y^-1)",
        f"set size {len(res.generating_set)}, upper {est.upper!r}, witness {labels}",
        ok,
    )


def claim_f2_zgen(cfg: RunConfig) -> ClaimResult:
    spec, x, y = f2_standard()
    z = multiply(inverse(y), x)
    gens = symmetric_closure(spec, [x, y, z])
    ball = cayley_ball(spec, gens, 3, cfg)
    res = roundness_estimate(ball.space, cfg)
    ok = abs(res.upper - LOG2_3) <= 1e-6
    return _claim(
        "f2_zgen_upper_log2_3",
        f"ball R=3 of F2 with z=y^-1*x reports upper log2(3) = {LOG2_3!r} +-1e-6",
        f"upper {res.upper!r} (exhaustive over {res.quad_count} configurations; "
        "the ball satisfies the four-point condition, see README)",
        ok,
    )


def claim_kernel_cross_validation(cfg: RunConfig) -> ClaimResult:
    spaces = connected_graphs_up_to_iso(6)

    def check(m):
        gr = gr_via_kernel(m, cfg)
        search = gr_upper_search(m, max_n=3, cfg=cfg)
        return gr, search.upper

    results = _parallel_map(check, spaces, cfg)
    bad = [
        (k, gr, upper)
        for k, (gr, upper) in enumerate(results)
        if not (gr <= upper + 1e-6 and upper >= gr - 1e-6)
    ]
    return _claim(
        "kernel_vs_simplex_cross_validation",
        f"{len(spaces)} connected graphs (<=6 vertices, up to isomorphism): kernel "
        "threshold <= exhaustive n<=3 simplex bound + 1e-6, and no simplex crossing "
        "below threshold - 1e-6",
        f"failures: {bad!r}" if bad else f"all {len(spaces)} graphs agree",
        not bad,
    )


def claim_c4_gr_p4_kernel(cfg: RunConfig) -> ClaimResult:
    c4 = build_from_graph(cycle_graph(4))
    gr = gr_via_kernel(c4, cfg)
    p4 = build_from_graph(path_graph(4))
    rep = is_negative_kernel(power_matrix(p4, 1.0), p=1.0)
    ok = abs(gr - 1.0) <= 1e-6 and rep.is_negative
    return _claim(
        "c4_gr_and_p4_kernel",
        "gr(C4) = 1.0 +-1e-6 via kernel bisection; P4 kernel test passes at p=1",
        f"gr(C4) {gr!r}; P4 negative {rep.is_negative} (max eig "
        f"{rep.max_projected_eigenvalue:.3e})",
        ok,
    )


def claim_schoenberg(cfg: RunConfig) -> ClaimResult:
    spaces = list(connected_graphs_up_to_iso(6))

    def embed_error(m):
        return schoenberg_embed(m, gr_via_kernel(m, cfg), cfg).max_relative_error

    errors = _parallel_map(embed_error, spaces, cfg)
    for graph, p in ((cycle_graph(4), 1.0), (path_graph(4), 1.0)):
        errors.append(schoenberg_embed(build_from_graph(graph), p, cfg).max_relative_error)
    worst = max(errors)
    count = len(errors)
    return _claim(
        "schoenberg_reconstruction",
        "every kernel-passing space/exponent pair embeds with relative error <= 1e-6",
        f"{count} embeddings, worst relative error {worst:.3e}",
        worst <= 1e-6,
    )


def claim_z2_box3(cfg: RunConfig) -> ClaimResult:
    summary = scan_z2(3, min_size=4, checks=("star", "pair"), cfg=cfg)
    star_sets = [mask_to_generating_set(3, m) for m in summary.star_true_masks]
    all_size6 = all(len(g) == 6 for g in star_sets)
    all_form = all(is_sum_closed_triple(g) for g in star_sets)
    big_star = [g for g in star_sets if len(g) >= 8]
    ok = all_size6 and all_form and not big_star
    return _claim(
        "z2_box3_generating_sets",
        "box 3: every generating set with |S|>=8 has a non-closed pair; every "
        "star-closed generating set has size 6 and the sum-closed form",
        f"{summary.generating_sets} generating sets, {summary.star_true} star-closed "
        f"(sizes {sorted(len(g) for g in star_sets)}), sum-closed form: {all_form}",
        ok,
    )


def claim_torsion(cfg: RunConfig) -> ClaimResult:
    results = {}
    ok = True
    for modulus in (4, 6, 8, 9):
        spec = Cyclic(modulus)
        gens = symmetric_closure(spec, [GroupElement(spec, 1)])
        res = torsion_construction(spec, gens, GroupElement(spec, 1), cfg)
        est = roundness_estimate(res.ball.space, cfg)
        results[modulus] = est.upper
        if abs(est.upper - 1.0) > 1e-9:
            ok = False
    rejected = []
    for modulus in (2, 3, 5, 7):
        spec = Cyclic(modulus)
        gens = symmetric_closure(spec, [GroupElement(spec, 1)])
        try:
            torsion_construction(spec, gens, GroupElement(spec, 1), cfg)
        except UnsupportedOrder:
            rejected.append(modulus)
    ok = ok and rejected == [2, 3, 5, 7]
    return _claim(
        "torsion_constructions",
        "orders 4, 6, 8, 9 build verified witnesses with upper 1.0; orders 2, 3, 5, 7 "
        "are rejected",
        f"uppers {results!r}; rejected {rejected}",
        ok,
    )


_CLAIMS = (
    ("z2_standard_roundness", claim_z2_standard),
    ("z2_hexagonal_bounds", claim_z2_hexagonal),
    ("random_trees_roundness", claim_random_trees),
    ("complete_graphs_infinite", claim_complete_graphs),
    ("cycle_roundness", claim_cycles),
    ("circle_samples", claim_circles),
    ("euclidean_plane_exponent_two", claim_euclidean_plane),
    ("f2_augmented_roundness_one", claim_f2_augmented),
    ("f2_zgen_upper_log2_3", claim_f2_zgen),
    ("kernel_vs_simplex_cross_validation", claim_kernel_cross_validation),
    ("c4_gr_and_p4_kernel", claim_c4_gr_p4_kernel),
    ("schoenberg_reconstruction", claim_schoenberg),
    ("z2_box3_generating_sets", claim_z2_box3),
    ("torsion_constructions", claim_torsion),
)


def claim_ids() -> list[str]:
    return [cid for cid, _ in _CLAIMS]


def run_claims(cfg: RunConfig = DEFAULT_CONFIG, wanted=None) -> list[ClaimResult]:
    out = []
    for cid, fn in _CLAIMS:
        if wanted is not None and cid not in wanted:
            continue
        started = time.perf_counter()
        result = fn(cfg)
        elapsed = (time.perf_counter() - started) * 1000.0
        out.append(ClaimResult(result.claim_id, result.expected, result.computed,
                               result.passed, elapsed))
    return out
