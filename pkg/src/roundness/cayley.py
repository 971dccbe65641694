"""Cayley balls, roundness-one witness constructions, and the free-abelian
generating-set combinatorics.

Ball metric: a breadth-first table of word lengths is built out to twice
the requested radius, so every pairwise distance inside the ball is the
true distance in the full Cayley graph, not the distorted induced-path
distance of the ball's subgraph.  Witnesses found in a ball are therefore
genuine upper bounds for the whole graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .config import DEFAULT_CONFIG, RunConfig
from .engine import Quad, RoundnessResult, roundness_estimate
from .errors import (
    BallTooLarge,
    DegenerateConstruction,
    EmptyAfterClosure,
    HypothesisViolated,
    InvalidParameter,
    NotGenerating,
    SpecMismatch,
    UnsupportedOrder,
)
from .groups import (
    Cyclic,
    Dihedral,
    DirectProduct,
    Free,
    FreeAbelian,
    FreeProductOfCyclics,
    GeneratingSet,
    GroupElement,
    GroupSpec,
    element_order,
    format_element,
    identity,
    inverse,
    multiply,
    power,
    sort_key,
    symmetric_closure,
)
from .lattice import generates_full_lattice
from .metric import FiniteMetricSpace

_TABLE_GUARD = 5_000_000  # BFS table entries, independent of the ball cap


@dataclass(frozen=True)
class CayleyBall:
    """All group elements of word length <= radius, with exact word metric."""

    spec: GroupSpec
    gens: GeneratingSet
    radius: int
    elements: tuple[GroupElement, ...]
    depths: tuple[int, ...]
    space: FiniteMetricSpace

    def index_of(self, g: GroupElement) -> int:
        try:
            return self.elements.index(g)
        except ValueError:
            raise InvalidParameter(f"{format_element(g)} is not in the ball") from None


def is_generating(gens: GeneratingSet) -> bool:
    """Exact generation test for free abelian specs (via the integer
    normal form of the element matrix)."""
    if not isinstance(gens.spec, FreeAbelian):
        raise SpecMismatch("is_generating is only defined for free abelian specs")
    return generates_full_lattice([g.value for g in gens.elements], gens.spec.rank)


def _mulclose(spec, gens, cap: int):
    els = {identity(spec)}
    frontier = list(els)
    while frontier:
        new = []
        for g in frontier:
            for s in gens:
                h = multiply(g, s)
                if h not in els:
                    els.add(h)
                    new.append(h)
                    if len(els) > cap:
                        return els
        frontier = new
    return els


def _check_generates(spec: GroupSpec, gens: GeneratingSet) -> None:
    """Reject non-generating sets where that is decidable up front."""
    if isinstance(spec, FreeAbelian):
        if not is_generating(gens):
            raise NotGenerating("the set does not span the full integer lattice")
    elif isinstance(spec, Cyclic):
        g = spec.modulus
        for el in gens.elements:
            g = math.gcd(g, el.value)
        if g != 1:
            raise NotGenerating(f"residues have gcd {g} with the modulus")
    elif isinstance(spec, Dihedral):
        closure = _mulclose(spec, gens.elements, 2 * spec.n + 1)
        if len(closure) != 2 * spec.n:
            raise NotGenerating("the set generates a proper dihedral subgroup")
    # Free / free products are checked after BFS (letter reachability);
    # general direct products have no cheap decision procedure here.


def cayley_ball(
    spec: GroupSpec, gens: GeneratingSet, radius: int, cfg: RunConfig = DEFAULT_CONFIG
) -> CayleyBall:
    """Ball of the Cayley graph with its exact word metric.

    Breadth-first search from the identity to depth 2*radius builds the
    length table; the metric entry for (g, h) is the table length of
    g^-1 h, which is at most 2*radius by the triangle inequality.
    """
    if radius < 1:
        raise InvalidParameter(f"radius must be >= 1, got {radius}")
    if gens.spec != spec:
        raise SpecMismatch("generating set belongs to a different spec")
    _check_generates(spec, gens)

    e = identity(spec)
    table: dict[GroupElement, int] = {e: 0}
    frontier = [e]
    for depth in range(1, 2 * radius + 1):
        new = []
        for g in frontier:
            for s in gens.elements:
                h = multiply(g, s)
                if h not in table:
                    table[h] = depth
                    new.append(h)
        if len(table) > _TABLE_GUARD:
            raise BallTooLarge(f"length table exceeded {_TABLE_GUARD} elements")
        frontier = new

    if isinstance(spec, (Free, FreeProductOfCyclics)):
        rank = spec.rank if isinstance(spec, Free) else len(spec.orders)
        for i in range(rank):
            letter = GroupElement(spec, ((i, 1),))
            if letter != e and letter not in table:
                raise NotGenerating(
                    f"standard letter {format_element(letter)} is not reachable "
                    f"within depth {2 * radius}"
                )

    ball = [(d, g) for g, d in table.items() if d <= radius]
    if len(ball) > cfg.ball_cap:
        raise BallTooLarge(f"ball has {len(ball)} elements, cap is {cfg.ball_cap}")
    ball.sort(key=lambda dg: (dg[0], sort_key(dg[1])))
    elements = tuple(g for _, g in ball)
    depths = tuple(d for d, _ in ball)

    n = len(elements)
    dist = np.zeros((n, n))
    inverses = [inverse(g) for g in elements]
    for i in range(n):
        gi = inverses[i]
        row = dist[i]
        for j in range(i + 1, n):
            row[j] = table[multiply(gi, elements[j])]
    dist = np.maximum(dist, dist.T)
    labels = tuple(format_element(g) for g in elements)
    space = FiniteMetricSpace(labels, dist)
    return CayleyBall(spec, gens, radius, elements, depths, space)


# ---------------------------------------------------------------------------
# roundness-one witness constructions


@dataclass(frozen=True)
class ConstructionResult:
    generating_set: GeneratingSet
    witness: Quad
    ball: CayleyBall


def _verify_unit_quadrilateral(ball: CayleyBall, corners) -> Quad:
    """Check the four corners form a quad with unit edges and length-2
    diagonals in the ball metric; corners are (x00, x01, x10, x11)."""
    try:
        idx = [ball.index_of(c) for c in corners]
    except InvalidParameter as exc:
        raise DegenerateConstruction(f"witness corner missing from ball: {exc}") from exc
    q = Quad(ball.space, *idx)
    if q.edge_lengths != (1.0, 1.0, 1.0, 1.0) or q.diagonal_lengths != (2.0, 2.0):
        raise DegenerateConstruction(
            f"witness has edges {q.edge_lengths} and diagonals {q.diagonal_lengths}; "
            "expected unit edges and length-2 diagonals"
        )
    return q


def augment_round_one(
    spec: GroupSpec,
    gens,
    x: GroupElement,
    y: GroupElement,
    cfg: RunConfig = DEFAULT_CONFIG,
) -> ConstructionResult:
    """Extend a generating set so the quadrilateral on x, y, x^-1, y^-1 has
    unit edges and length-2 diagonals, certifying roundness upper bound 1.

    Preconditions (checked exactly): x and y square to non-identity,
    x != y and x != y^-1, and neither cube of one equals the other or its
    inverse.  The advertised witness is then verified against the actual
    ball metric; torsion can silently collapse it, and that surfaces as
    DegenerateConstruction rather than a wrong certificate.
    """
    e = identity(spec)
    if multiply(x, x) == e:
        raise HypothesisViolated("x has order at most 2")
    if multiply(y, y) == e:
        raise HypothesisViolated("y has order at most 2")
    if x == y or x == inverse(y):
        raise HypothesisViolated("x equals y or its inverse")
    x3 = power(x, 3)
    y3 = power(y, 3)
    if x3 == y or x3 == inverse(y):
        raise HypothesisViolated("x^3 equals y or its inverse")
    if y3 == x or y3 == inverse(x):
        raise HypothesisViolated("y^3 equals x or its inverse")

    base = list(gens.elements if isinstance(gens, GeneratingSet) else gens)
    xi, yi = inverse(x), inverse(y)
    links = [multiply(xi, y), multiply(x, y), multiply(x, yi), multiply(xi, yi)]
    squares = {multiply(x, x), multiply(xi, xi), multiply(y, y), multiply(yi, yi)}
    try:
        closed = symmetric_closure(spec, base + [x, y] + links)
        kept = tuple(g for g in closed.elements if g not in squares)
        new_set = GeneratingSet(spec, kept)
        ball = cayley_ball(spec, new_set, 2, cfg)
    except (EmptyAfterClosure, NotGenerating, InvalidParameter) as exc:
        # torsion collisions can strip needed generators or break symmetry
        raise DegenerateConstruction(f"augmented set degenerated: {exc}") from exc
    witness = _verify_unit_quadrilateral(ball, (x, y, yi, xi))
    return ConstructionResult(new_set, witness, ball)


def torsion_construction(
    spec: GroupSpec,
    gens,
    g: GroupElement,
    cfg: RunConfig = DEFAULT_CONFIG,
) -> ConstructionResult:
    """Roundness-one witness built from a torsion element.

    Order 4: adjoin g, drop g^2, and verify the quadrilateral on
    (e, g, g^2, g^3).  Order 6: strip powers of g from the base set and
    delegate the pair (g, g^2).  Order >= 8: find the least power g^k
    compatible with the augmentation hypotheses and delegate (g, g^k).
    Orders 1, 2, 3, 5, 7 and infinite order are rejected.
    """
    n = element_order(g)
    base = list(gens.elements if isinstance(gens, GeneratingSet) else gens)
    if n == 0:
        raise UnsupportedOrder("g has infinite order; use augment_round_one directly")
    if n in (1, 2, 3, 5, 7):
        raise UnsupportedOrder(f"no construction for an element of order {n}")

    if n == 4:
        g2 = multiply(g, g)
        closed = symmetric_closure(spec, base + [g])
        kept = tuple(h for h in closed.elements if h != g2)
        new_set = GeneratingSet(spec, kept)
        ball = cayley_ball(spec, new_set, 2, cfg)
        e = identity(spec)
        witness = _verify_unit_quadrilateral(ball, (e, g, power(g, 3), g2))
        return ConstructionResult(new_set, witness, ball)

    if n == 6:
        powers = {power(g, k) for k in range(1, 6)}
        stripped = [h for h in base if h not in powers]
        return augment_round_one(spec, stripped + [g], g, multiply(g, g), cfg)

    # n >= 8: least exponent k avoiding g^{+-1}, g^{+-3}, involutions and
    # cubes landing on g^{+-1}
    for k in range(2, n - 1):
        if k in (1, 3, n - 3, n - 1):
            continue
        if (2 * k) % n == 0:
            continue
        if (3 * k) % n in (1, n - 1):
            continue
        return augment_round_one(spec, base + [g], g, power(g, k), cfg)
    raise UnsupportedOrder(f"no suitable companion power exists for order {n}")


# ---------------------------------------------------------------------------
# free-abelian generating-set combinatorics


def _as_vectors(gens: GeneratingSet) -> list[tuple[int, ...]]:
    if not isinstance(gens.spec, FreeAbelian):
        raise SpecMismatch("this check is only defined for free abelian specs")
    return [g.value for g in gens.elements]


def _dependent(u, v) -> bool:
    return all(u[i] * v[j] == u[j] * v[i] for i in range(len(u)) for j in range(i + 1, len(u)))


def _vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _vneg(u):
    return tuple(-a for a in u)


def property_star_check(gens: GeneratingSet):
    """Is the set closed under 'sum or difference' for every pair u != +-v?

    Returns (True, None) or (False, violating pair), the pair being the
    lexicographically least witness; such a pair spans a quadrilateral
    with unit edges and length-2 diagonals in the Cayley graph.
    """
    vecs = sorted(_as_vectors(gens))
    have = set(vecs)
    for u, v in combinations(vecs, 2):
        if u == v or u == _vneg(v):
            continue
        if _vadd(u, v) in have or _vsub(u, v) in have:
            continue
        spec = gens.spec
        return False, (GroupElement(spec, u), GroupElement(spec, v))
    return True, None


def property_doublestar_check(gens: GeneratingSet):
    """Exactly one of u+v, u-v present for every linearly independent pair."""
    vecs = sorted(_as_vectors(gens))
    have = set(vecs)
    for u, v in combinations(vecs, 2):
        if _dependent(u, v):
            continue
        if (_vadd(u, v) in have) != (_vsub(u, v) in have):
            continue
        spec = gens.spec
        return False, (GroupElement(spec, u), GroupElement(spec, v))
    return True, None


def find_nonclosed_pair(gens: GeneratingSet):
    """Least pair g, h (g != +-h) with neither g+h nor g-h in the set."""
    if not isinstance(gens.spec, FreeAbelian) or gens.spec.rank != 2:
        raise SpecMismatch("nonclosed-pair search is defined over rank-2 free abelian specs")
    ok, pair = property_star_check(gens)
    return None if ok else pair


_BOX_AUTOMORPHISMS = (
    lambda v: (v[0], v[1]),
    lambda v: (-v[0], v[1]),
    lambda v: (v[0], -v[1]),
    lambda v: (-v[0], -v[1]),
    lambda v: (v[1], v[0]),
    lambda v: (-v[1], v[0]),
    lambda v: (v[1], -v[0]),
    lambda v: (-v[1], -v[0]),
)


def _sign_classes(box: int) -> list[tuple[int, int]]:
    """Antipodal class representatives in the box, lexicographically sorted;
    the representative is the lex-larger of v and -v."""
    reps = []
    for a in range(-box, box + 1):
        for b in range(-box, box + 1):
            v = (a, b)
            if v == (0, 0):
                continue
            if v > (-a, -b):
                reps.append(v)
    reps.sort()
    return reps


def _class_rep(v):
    return v if v > _vneg(v) else _vneg(v)


def enumerate_symmetric_generating_sets(
    box: int,
    min_size: int = 4,
    max_size: int | None = None,
    reduce_by_symmetry: bool = False,
):
    """All symmetric generating sets of the rank-2 lattice drawn from the
    box [-box, box]^2, streamed in lexicographic order of their sorted
    antipodal-class representatives.

    Sizes count elements (twice the class count).  reduce_by_symmetry
    keeps one set per orbit of the eight signed coordinate permutations;
    it is off by default so exhaustive claims stay literal.
    """
    if box < 1:
        raise InvalidParameter("box must be >= 1")
    spec = FreeAbelian(2)
    reps = _sign_classes(box)
    hi = max_size if max_size is not None else 2 * len(reps)
    lo_k = max(2, (min_size + 1) // 2)
    hi_k = min(len(reps), hi // 2)
    for k in range(lo_k, hi_k + 1):
        for combo in combinations(reps, k):
            g = 0
            for u, v in combinations(combo, 2):
                g = math.gcd(g, abs(u[0] * v[1] - u[1] * v[0]))
            if g != 1:
                continue
            if reduce_by_symmetry:
                canon = min(
                    tuple(sorted(_class_rep(f(v)) for v in combo))
                    for f in _BOX_AUTOMORPHISMS
                )
                if canon != combo:
                    continue
            elements = tuple(
                GroupElement(spec, v) for v in combo
            ) + tuple(GroupElement(spec, _vneg(v)) for v in combo)
            yield GeneratingSet(spec, elements)


# ---------------------------------------------------------------------------
# vectorised scan over every symmetric subset of a box (rank 2)


@dataclass(frozen=True)
class Z2ScanSummary:
    box: int
    min_size: int
    class_count: int
    sets_considered: int
    generating_sets: int
    star_true: int
    pair_found: int
    star_true_masks: tuple[int, ...]
    doublestar_true: int | None


def _z2_class_tables(box: int):
    reps = _sign_classes(box)
    index = {v: i for i, v in enumerate(reps)}
    c = len(reps)
    sum_cls = np.full((c, c), -1, dtype=np.int64)
    diff_cls = np.full((c, c), -1, dtype=np.int64)
    dets = np.zeros((c, c), dtype=np.int64)
    for i, u in enumerate(reps):
        for j, v in enumerate(reps):
            s = _class_rep(_vadd(u, v))
            d = _class_rep(_vsub(u, v)) if u != v else None
            if max(abs(s[0]), abs(s[1])) <= box and s in index:
                sum_cls[i, j] = index[s]
            if d is not None and max(abs(d[0]), abs(d[1])) <= box and d in index:
                diff_cls[i, j] = index[d]
            dets[i, j] = abs(u[0] * v[1] - u[1] * v[0])
    return reps, sum_cls, diff_cls, dets


def scan_z2(
    box: int,
    min_size: int = 4,
    checks: tuple[str, ...] = ("star", "pair"),
    cfg: RunConfig = DEFAULT_CONFIG,
) -> Z2ScanSummary:
    """Exhaustive scan of every symmetric subset of the box, vectorised
    over bit masks of antipodal classes.

    Every subset of classes is considered (none are skipped), so the
    summary's claims are literal exhaustive statements about the box.
    Boxes above 3 (more than 24 classes) are rejected: 2^classes masks
    would not be desk-scale.
    """
    reps, sum_cls, diff_cls, dets = _z2_class_tables(box)
    c = len(reps)
    if c > 24:
        raise InvalidParameter(f"box {box} has {c} antipodal classes; scan supports at most 24")
    lo_k = max(2, (min_size + 1) // 2)
    total_masks = 1 << c
    want_doublestar = "doublestar" in checks

    considered = 0
    generating_total = 0
    star_total = 0
    pair_total = 0
    double_total = 0
    star_masks: list[int] = []

    chunk = 1 << 22
    pairs = [(i, j) for i in range(c) for j in range(i + 1, c)]
    uni_pairs = [(i, j) for i, j in pairs if dets[i, j] == 1]
    other_pairs = [(i, j) for i, j in pairs if dets[i, j] != 1]
    for start in range(0, total_masks, chunk):
        masks = np.arange(start, min(start + chunk, total_masks), dtype=np.int32)
        if lo_k > 2:
            pop = np.zeros(masks.size, dtype=np.int8)
            for b in range(c):
                pop += ((masks >> b) & 1).astype(np.int8)
            masks = masks[pop >= lo_k]
            if masks.size == 0:
                continue
        considered += int(masks.size)

        bits = [((masks >> b) & 1).astype(np.uint8) for b in range(c)]
        unimodular = np.zeros(masks.size, dtype=np.uint8)
        star_viol = np.zeros(masks.size, dtype=np.uint8)
        double_viol = np.zeros(masks.size, dtype=np.uint8)
        zero = np.zeros(masks.size, dtype=np.uint8)
        for i, j in pairs:
            active = bits[i] & bits[j]
            if dets[i, j] == 1:
                unimodular |= active
            s, d = int(sum_cls[i, j]), int(diff_cls[i, j])
            s_in = bits[s] if s >= 0 else zero
            d_in = bits[d] if d >= 0 else zero
            star_viol |= active & ~(s_in | d_in)
            if want_doublestar and dets[i, j] != 0:
                double_viol |= active & ~(s_in ^ d_in)
        # masks without a unimodular pair still generate when the pair
        # determinants are globally coprime; resolve those few exactly
        generating = unimodular.astype(bool)
        rest = np.nonzero(~generating)[0]
        if rest.size:
            sub = masks[rest]
            gcds = np.zeros(sub.size, dtype=np.int64)
            for i, j in other_pairs:
                active = ((sub >> i) & 1).astype(bool) & ((sub >> j) & 1).astype(bool)
                gcds = np.gcd(gcds, dets[i, j] * active)
            generating[rest] = gcds == 1
        generating_total += int(generating.sum())
        star_ok = generating & ~star_viol.astype(bool)
        star_total += int(star_ok.sum())
        pair_total += int((generating & star_viol.astype(bool)).sum())
        if want_doublestar:
            double_total += int((generating & ~double_viol.astype(bool)).sum())
        star_masks.extend(int(x) for x in masks[star_ok])

    return Z2ScanSummary(
        box=box,
        min_size=min_size,
        class_count=c,
        sets_considered=considered,
        generating_sets=generating_total,
        star_true=star_total,
        pair_found=pair_total,
        star_true_masks=tuple(sorted(star_masks)),
        doublestar_true=double_total if want_doublestar else None,
    )


def mask_to_generating_set(box: int, mask: int) -> GeneratingSet:
    reps = _sign_classes(box)
    spec = FreeAbelian(2)
    chosen = [reps[i] for i in range(len(reps)) if (mask >> i) & 1]
    elements = tuple(GroupElement(spec, v) for v in chosen) + tuple(
        GroupElement(spec, _vneg(v)) for v in chosen
    )
    return GeneratingSet(spec, elements)


def is_sum_closed_triple(gens: GeneratingSet) -> bool:
    """Does the set equal {+-u, +-v, +-(u+v)} for some independent u, v?"""
    vecs = _as_vectors(gens)
    classes = sorted({_class_rep(v) for v in vecs})
    if len(classes) != 3 or len(vecs) != 6:
        return False
    for u, v, w in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
        a, b, t = classes[u], classes[v], classes[w]
        if _dependent(a, b):
            continue
        if _class_rep(_vadd(a, b)) == t or _class_rep(_vsub(a, b)) == t:
            return True
    return False


# ---------------------------------------------------------------------------
# spectrum sampling


@dataclass(frozen=True)
class SpectrumReport:
    spec: GroupSpec
    radius: int
    rows: tuple[tuple[GeneratingSet, RoundnessResult], ...]


def spectrum_scan(
    spec: GroupSpec,
    sets,
    radius: int,
    cfg: RunConfig = DEFAULT_CONFIG,
) -> SpectrumReport:
    """Roundness bound of the ball for each generating set, in input order.

    Sets are processed independently (in parallel when cfg.threads allows)
    and results are collected by index, so the report never depends on
    scheduling.
    """
    from concurrent.futures import ThreadPoolExecutor

    sets = list(sets)

    def job(gs: GeneratingSet) -> RoundnessResult:
        ball = cayley_ball(spec, gs, radius, cfg)
        return roundness_estimate(ball.space, cfg)

    workers = cfg.threads or None
    if len(sets) <= 1:
        results = [job(gs) for gs in sets]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, sets))
    return SpectrumReport(spec, radius, tuple(zip(sets, results)))
