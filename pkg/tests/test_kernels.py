import math

import numpy as np
import pytest

from roundness.config import RunConfig
from roundness.engine import Quad, quad_deficit, roundness_estimate
from roundness.errors import AsymmetricInput, KernelNotNegative, NonzeroDiagonal
from roundness.kernels import (
    DoubleSimplex,
    gr_upper_search,
    gr_via_kernel,
    is_negative_kernel,
    power_matrix,
    schoenberg_embed,
    simplex_critical_exponent,
    simplex_deficit,
)
from roundness.metric import WeightedGraph, build_euclidean, build_from_graph

CFG = RunConfig()


def graph(n, edges):
    return build_from_graph(WeightedGraph(n, tuple((u, v, 1.0) for u, v in edges)))


def cycle(n):
    return graph(n, [(i, (i + 1) % n) for i in range(n)])


C4 = cycle(4)
P3 = graph(3, [(0, 1), (1, 2)])
P4 = graph(4, [(0, 1), (1, 2), (2, 3)])
K3 = graph(3, [(0, 1), (1, 2), (0, 2)])
SQUARE = build_euclidean([(0, 0), (1, 0), (0, 1), (1, 1)], 2)
TWO = build_euclidean([(0,), (3,)], 2)


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_order_two_simplex_equals_quad(seed):
    rng = np.random.default_rng(seed)
    m = build_euclidean(rng.normal(size=(5, 2)), 2)
    idx = rng.integers(0, 5, size=4)
    s = DoubleSimplex(m, (int(idx[0]), int(idx[1])), (int(idx[2]), int(idx[3])))
    q = Quad(m, i00=int(idx[0]), i11=int(idx[1]), i01=int(idx[2]), i10=int(idx[3]))
    for t in (0.0, 0.5, 1.0, 1.9, 3.0):
        assert simplex_deficit(m, s, t) == pytest.approx(quad_deficit(q, t))


def test_identical_lists_cancel():
    s = DoubleSimplex(P4, (0, 1, 3), (0, 1, 3))
    for t in (0.0, 1.0, 2.0):
        assert simplex_deficit(P4, s, t) == 0.0
    assert math.isinf(simplex_critical_exponent(P4, s, CFG))


def test_c4_simplex():
    s = DoubleSimplex(C4, (0, 2), (1, 3))
    assert simplex_deficit(C4, s, 1.0) == 0.0
    assert simplex_critical_exponent(C4, s, CFG) == pytest.approx(1.0, abs=1e-9)


def test_square_simplex_exponent_two():
    s = DoubleSimplex(SQUARE, (0, 3), (1, 2))
    assert simplex_critical_exponent(SQUARE, s, CFG) == pytest.approx(2.0, abs=1e-9)


def test_gr_upper_search_examples():
    assert gr_upper_search(C4, cfg=CFG).upper <= 1.0 + 1e-9
    assert gr_upper_search(P3, cfg=CFG).upper <= 2.0 + 1e-9
    assert math.isinf(gr_upper_search(TWO, cfg=CFG).upper)


def test_gr_upper_search_witness_attains_bound():
    res = gr_upper_search(C4, cfg=CFG)
    assert simplex_critical_exponent(C4, res.witness, CFG) == pytest.approx(res.upper, abs=2e-9)


def test_gr_upper_search_sampled_sizes():
    # sizes above three are explored by seeded sampling; same seed, same answer
    big = build_euclidean(np.random.default_rng(8).normal(size=(10, 2)), 2)
    a = gr_upper_search(big, max_n=4, budget=500, cfg=CFG)
    b = gr_upper_search(big, max_n=4, budget=500, cfg=CFG)
    assert a.upper == b.upper
    assert a.simplex_count == b.simplex_count > 500
    assert a.seed == CFG.seed
    # sampling can only tighten the two-list bound
    assert a.upper <= gr_upper_search(big, max_n=2, cfg=CFG).upper + 1e-12
    other = gr_upper_search(big, max_n=4, budget=500, cfg=RunConfig(seed=7))
    assert simplex_critical_exponent(big, other.witness, CFG) == pytest.approx(
        other.upper, abs=2e-9
    )


def test_power_matrix():
    assert np.array_equal(power_matrix(C4, 1.0), C4.dist)
    sq = power_matrix(SQUARE, 2.0)
    assert sorted(np.unique(sq[~np.eye(4, dtype=bool)])) == pytest.approx([1.0, 2.0])
    p0 = power_matrix(C4, 0.0)
    assert (np.diag(p0) == 0).all()
    assert (p0[~np.eye(4, dtype=bool)] == 1).all()


def test_negative_kernel_examples():
    assert is_negative_kernel(power_matrix(TWO, 3.7)).is_negative
    assert is_negative_kernel(power_matrix(P4, 1.0), p=1.0).is_negative
    rep = is_negative_kernel(power_matrix(SQUARE, 2.0))
    assert rep.is_negative
    assert abs(rep.max_projected_eigenvalue) <= rep.tol


def test_kernel_input_validation():
    with pytest.raises(AsymmetricInput):
        is_negative_kernel(np.array([[0.0, 1.0], [2.0, 0.0]]))
    with pytest.raises(NonzeroDiagonal):
        is_negative_kernel(np.array([[1.0, 1.0], [1.0, 0.0]]))


def test_gr_via_kernel_values():
    assert gr_via_kernel(C4, CFG) == pytest.approx(1.0, abs=1e-6)
    assert gr_via_kernel(TWO, CFG) == CFG.qmax
    # equilateral triangle passes at p = 2, so its threshold is at least 2
    assert is_negative_kernel(power_matrix(K3, 2.0)).is_negative
    assert gr_via_kernel(K3, CFG) >= 2.0


def test_gr_via_kernel_scale_invariance():
    g = WeightedGraph(4, tuple((i, (i + 1) % 4, 3.0) for i in range(4)))
    assert gr_via_kernel(build_from_graph(g), CFG) == pytest.approx(
        gr_via_kernel(C4, CFG), abs=1e-6
    )


def test_kernel_monotonicity_sampled():
    rng = np.random.default_rng(42)
    for _ in range(100):
        n = int(rng.integers(3, 9))
        m = build_euclidean(rng.normal(size=(n, 3)), 2)
        p = float(rng.uniform(0.1, 4.0))
        p_lo = float(rng.uniform(0.0, p))
        if is_negative_kernel(power_matrix(m, p)).is_negative:
            assert is_negative_kernel(power_matrix(m, p_lo)).is_negative


@pytest.mark.parametrize("m", [C4, P3, P4, K3, SQUARE, TWO])
def test_gr_at_most_roundness(m):
    gr = gr_via_kernel(m, CFG)
    upper = roundness_estimate(m, CFG).upper
    assert gr <= upper + 1e-6


def test_embed_equilateral_triangle():
    emb = schoenberg_embed(K3, 2.0, CFG)
    assert emb.dims == 2
    assert emb.max_relative_error <= 1e-9
    d01 = np.linalg.norm(emb.coords[0] - emb.coords[1])
    d02 = np.linalg.norm(emb.coords[0] - emb.coords[2])
    d12 = np.linalg.norm(emb.coords[1] - emb.coords[2])
    assert d01 == pytest.approx(1.0, abs=1e-9)
    assert d02 == pytest.approx(1.0, abs=1e-9)
    assert d12 == pytest.approx(1.0, abs=1e-9)


def test_embed_path_right_isosceles():
    emb = schoenberg_embed(P3, 1.0, CFG)
    sq = ((emb.coords[:, None, :] - emb.coords[None, :, :]) ** 2).sum(axis=2)
    assert sq[0, 1] == pytest.approx(1.0, abs=1e-9)
    assert sq[1, 2] == pytest.approx(1.0, abs=1e-9)
    assert sq[0, 2] == pytest.approx(2.0, abs=1e-9)
    assert emb.max_relative_error <= 1e-9


def test_embed_two_points():
    emb = schoenberg_embed(TWO, 1.0, CFG)
    assert np.linalg.norm(emb.coords[0] - emb.coords[1]) == pytest.approx(math.sqrt(3), abs=1e-9)


def test_embed_requires_negative_kernel():
    # gr(C4) = 1, so d^2 on C4 is not a negative kernel
    with pytest.raises(KernelNotNegative):
        schoenberg_embed(C4, 2.0, CFG)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_embedding_faithfulness_random(seed):
    rng = np.random.default_rng(seed)
    m = build_euclidean(rng.normal(size=(7, 3)), 2)
    emb = schoenberg_embed(m, 2.0, CFG)
    assert emb.max_relative_error <= 1e-6
