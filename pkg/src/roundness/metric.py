"""Finite metric spaces: construction from graphs, samplers and matrices.

A :class:`FiniteMetricSpace` is an immutable labelled point set with a
symmetric distance matrix.  Degenerate point configurations (repeated
points) are expressed downstream by repeating *indices*, never by
duplicated rows, so a valid space always has strictly positive
off-diagonal distances.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    DisconnectedGraph,
    DuplicateIndex,
    IndexOutOfRange,
    InputFormatError,
    InvalidParameter,
    NotATree,
)

TRIANGLE_TOL = 1e-12


@dataclass(frozen=True)
class FiniteMetricSpace:
    """Labelled finite metric space with a read-only distance matrix."""

    labels: tuple[str, ...]
    dist: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise InvalidParameter("distance matrix must be square")
        if d.shape[0] != len(self.labels):
            raise InvalidParameter("label count does not match matrix size")
        if d.shape[0] < 1:
            raise InvalidParameter("a metric space needs at least one point")
        d = d.copy()
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))

    @property
    def size(self) -> int:
        return len(self.labels)

    def d(self, i: int, j: int) -> float:
        return float(self.dist[i, j])

    def to_json_obj(self) -> dict:
        return {"labels": list(self.labels), "dist": self.dist.tolist()}


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph with positive edge lengths, given as (u, v, w)."""

    vertex_count: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise InvalidParameter("graph needs at least one vertex")
        clean = []
        for u, v, w in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise IndexOutOfRange(f"edge ({u},{v}) out of range")
            if u == v:
                raise InvalidParameter(f"self-loop at vertex {u}")
            if not w > 0:
                raise InvalidParameter(f"edge ({u},{v}) has non-positive length {w}")
            clean.append((int(u), int(v), float(w)))
        object.__setattr__(self, "edges", tuple(clean))


@dataclass(frozen=True)
class Violation:
    """One broken metric axiom: kind is 'diagonal', 'symmetry', 'positivity'
    or 'triangle'; indices identify the offending entries."""

    kind: str
    indices: tuple[int, ...]
    amount: float


def _apsp(n: int, edges) -> np.ndarray:
    """All-pairs shortest path lengths (Floyd-Warshall, vectorised)."""
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for u, v, w in edges:
        if w < d[u, v]:
            d[u, v] = w
            d[v, u] = w
    for k in range(n):
        np.minimum(d, d[:, k][:, None] + d[k, :][None, :], out=d)
    return d


def _default_labels(prefix: str, n: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(n))


def build_from_graph(g: WeightedGraph) -> FiniteMetricSpace:
    """Shortest-path metric of a connected weighted graph."""
    d = _apsp(g.vertex_count, g.edges)
    if np.isinf(d).any():
        i, j = map(int, np.argwhere(np.isinf(d))[0])
        raise DisconnectedGraph(f"vertices {i} and {j} are not connected")
    return FiniteMetricSpace(_default_labels("v", g.vertex_count), d)


def build_circle(k: int, length: float) -> FiniteMetricSpace:
    """k evenly spaced points on a circle of the given circumference,
    with the arc-length metric."""
    if k < 3:
        raise InvalidParameter(f"need at least 3 sample points, got {k}")
    if not length > 0:
        raise InvalidParameter(f"circumference must be positive, got {length}")
    idx = np.arange(k)
    gaps = np.abs(idx[:, None] - idx[None, :])
    steps = np.minimum(gaps, k - gaps)
    return FiniteMetricSpace(_default_labels("p", k), steps * (length / k))


def build_euclidean(points, norm_p: float = 2.0) -> FiniteMetricSpace:
    """Metric of a finite point set under the p-norm (p in [1, inf])."""
    if not norm_p >= 1:
        raise InvalidParameter(f"norm order must be >= 1, got {norm_p}")
    rows = [np.asarray(p, dtype=float).ravel() for p in points]
    if not rows:
        raise InvalidParameter("need at least one point")
    dim = rows[0].size
    for i, r in enumerate(rows):
        if r.size != dim:
            raise DimensionMismatch(f"point {i} has dimension {r.size}, expected {dim}")
    x = np.vstack(rows)
    diff = np.abs(x[:, None, :] - x[None, :, :])
    if math.isinf(norm_p):
        d = diff.max(axis=2)
    else:
        d = (diff ** norm_p).sum(axis=2) ** (1.0 / norm_p)
    np.fill_diagonal(d, 0.0)
    d = np.maximum(d, d.T)  # exact symmetry regardless of summation order
    return FiniteMetricSpace(_default_labels("p", len(rows)), d)


def build_tree_metric(t: WeightedGraph) -> FiniteMetricSpace:
    """Path metric of a finite tree."""
    n = t.vertex_count
    if len(t.edges) != n - 1:
        raise NotATree(f"{len(t.edges)} edges on {n} vertices")
    d = _apsp(n, t.edges)
    if np.isinf(d).any():
        raise NotATree("graph is not connected")
    return FiniteMetricSpace(_default_labels("v", n), d)


def validate(m: FiniteMetricSpace, tol: float = TRIANGLE_TOL) -> list[Violation]:
    """Report every broken metric axiom; an empty list means m is a metric.

    Triangle checks use an absolute tolerance (default 1e-12): builder
    outputs are exact, only hand-written matrices can be noisy.
    """
    d = m.dist
    n = m.size
    out: list[Violation] = []
    for i in range(n):
        if d[i, i] != 0.0:
            out.append(Violation("diagonal", (i,), float(d[i, i])))
    asym = np.argwhere(d != d.T)
    for i, j in asym:
        if i < j:
            out.append(Violation("symmetry", (int(i), int(j)), float(d[i, j] - d[j, i])))
    for i in range(n):
        for j in range(i + 1, n):
            if not d[i, j] > 0:
                out.append(Violation("positivity", (i, j), float(d[i, j])))
    # d[i,j] <= d[i,k] + d[k,j]: vectorised over (i, j) for each k
    for k in range(n):
        slack = d[:, k][:, None] + d[k, :][None, :] - d
        bad = np.argwhere(slack < -tol)
        for i, j in bad:
            if i < j and i != k and j != k:
                out.append(Violation("triangle", (int(i), int(j), int(k)), float(slack[i, j])))
    return out


def restrict(m: FiniteMetricSpace, subset) -> FiniteMetricSpace:
    """Induced metric on a subset of indices (labels carried over)."""
    idx = list(subset)
    seen = set()
    for i in idx:
        if not (0 <= i < m.size):
            raise IndexOutOfRange(f"index {i} out of range for size {m.size}")
        if i in seen:
            raise DuplicateIndex(f"index {i} repeated")
        seen.add(i)
    ii = np.asarray(idx, dtype=int)
    return FiniteMetricSpace(tuple(m.labels[i] for i in idx), m.dist[np.ix_(ii, ii)])


# --- file formats -----------------------------------------------------------
#
# Metric-space JSON : {"labels": [str, ...], "dist": [[num, ...], ...]}
# Graph JSON        : {"n": int, "edges": [[u, v], [u, v, w], ...]} (w defaults to 1.0)


def graph_from_json_obj(obj: dict) -> WeightedGraph:
    try:
        n = int(obj["n"])
        edges = []
        for e in obj["edges"]:
            if len(e) == 2:
                u, v = e
                w = 1.0
            elif len(e) == 3:
                u, v, w = e
            else:
                raise InputFormatError(f"edge entry {e!r} must be [u, v] or [u, v, w]")
            edges.append((int(u), int(v), float(w)))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed graph object: {exc}") from exc
    return WeightedGraph(n, tuple(edges))


def space_from_json_obj(obj: dict) -> FiniteMetricSpace:
    try:
        labels = [str(x) for x in obj["labels"]]
        dist = np.asarray(obj["dist"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed metric-space object: {exc}") from exc
    return FiniteMetricSpace(tuple(labels), dist)


def load_space(path: str) -> FiniteMetricSpace:
    """Load either file format, detected by its keys; graphs are converted
    to their shortest-path metric."""
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise InputFormatError("top-level JSON value must be an object")
    if "dist" in obj:
        return space_from_json_obj(obj)
    if "edges" in obj:
        return build_from_graph(graph_from_json_obj(obj))
    raise InputFormatError("object has neither 'dist' nor 'edges'")
