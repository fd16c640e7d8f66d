"""Z^d-periodic weighted directed graphs with a potential.

A cell of the infinite graph is a pair ``(z, v)`` of an integer offset and a
vertex of the fundamental domain. An :class:`Edge` ``(tail, head, offset,
weight)`` stands for every translate of ``b((0, tail), (offset, head))``.
"""
from __future__ import annotations

import heapq
import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import DegenerateDegree, NoPathInWindow, WindowTooSmall
from .lattice import lattice_index

Offset = tuple[int, ...]
Cell = tuple[Offset, str]
Box = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Edge:
    tail: str
    head: str
    offset: Offset
    weight: float

    @property
    def key(self) -> tuple[str, str, Offset]:
        return self.tail, self.head, self.offset

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head and not any(self.offset)


@dataclass(frozen=True, eq=False)
class PeriodicGraph:
    """Fundamental-domain description of a periodic graph.

    ``allow_self_loops`` admits zero-offset loops ``b(x, x) > 0``; quotient
    constructions produce them. They count towards the degree but never
    change the operator.
    """

    dimension: int
    vertices: tuple[str, ...]
    potential: Mapping[str, float]
    edges: tuple[Edge, ...]
    base_vertex: str
    allow_self_loops: bool = False

    @classmethod
    def build(cls, dimension, vertices, edges, potential=None, base_vertex=None,
              allow_self_loops=False):
        """Convenience constructor from plain tuples.

        ``edges`` holds ``(tail, head, offset, weight)`` records; a missing
        ``potential`` means ``c = 0``.
        """
        vertices = tuple(vertices)
        if potential is None:
            potential = {v: 0.0 for v in vertices}
        elif not isinstance(potential, Mapping):
            potential = dict(zip(vertices, potential))
        es = []
        for e in edges:
            if isinstance(e, Edge):
                es.append(e)
            else:
                t, h, z, w = e
                es.append(Edge(t, h, tuple(int(x) for x in np.atleast_1d(z))
                               if dimension else (), float(w)))
        return cls(int(dimension), vertices, dict(potential), tuple(es),
                   vertices[0] if base_vertex is None else base_vertex,
                   bool(allow_self_loops))

    def with_potential(self, potential) -> "PeriodicGraph":
        if not isinstance(potential, Mapping):
            potential = {v: float(potential) for v in self.vertices}
        return PeriodicGraph(self.dimension, self.vertices, dict(potential), self.edges,
                             self.base_vertex, self.allow_self_loops)

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @cached_property
    def arrays(self):
        """Edge data as ``(tails, heads, offsets, weights)`` numpy arrays."""
        idx = self.index
        tails = np.array([idx[e.tail] for e in self.edges], dtype=np.int64)
        heads = np.array([idx[e.head] for e in self.edges], dtype=np.int64)
        offsets = np.array([e.offset for e in self.edges], dtype=np.int64).reshape(
            len(self.edges), self.dimension)
        weights = np.array([e.weight for e in self.edges], dtype=np.float64)
        return tails, heads, offsets, weights

    @cached_property
    def degrees(self) -> np.ndarray:
        # fsum: correctly rounded, so regrouped edge lists give identical degrees
        terms = {v: [float(self.potential[v])] for v in self.vertices}
        for e in self.edges:
            terms[e.tail].append(e.weight)
        return np.array([math.fsum(terms[v]) for v in self.vertices])

    @cached_property
    def max_degree(self) -> float:
        return float(self.degrees.max())

    @cached_property
    def potential_array(self) -> np.ndarray:
        return np.array([float(self.potential[v]) for v in self.vertices])

    def out_edges(self, v: str) -> list[Edge]:
        return self._out[v]

    @cached_property
    def _out(self) -> dict[str, list[Edge]]:
        out = {v: [] for v in self.vertices}
        for e in self.edges:
            out.setdefault(e.tail, []).append(e)
        return out


# ---------------------------------------------------------------------------
# validation

@dataclass
class Violation:
    kind: str
    message: str
    location: object = None


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind, message, location=None):
        self.violations.append(Violation(kind, message, location))

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


def _cycle_generators(g: PeriodicGraph, edges: Sequence[Edge]) -> tuple[bool, list[Offset]]:
    """Spanning-tree potentials on the quotient; returns (connected, generators)."""
    adj: dict[str, list[Edge]] = {v: [] for v in g.vertices}
    for e in edges:
        adj[e.tail].append(e)
        adj[e.head].append(e)
    root = g.vertices[0]
    pot = {root: (0,) * g.dimension}
    tree = set()
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for e in adj[u]:
            if e.tail == u and e.head not in pot:
                pot[e.head] = tuple(a + b for a, b in zip(pot[u], e.offset))
            elif e.head == u and e.tail not in pot:
                pot[e.tail] = tuple(a - b for a, b in zip(pot[u], e.offset))
            else:
                continue
            tree.add(id(e))
            queue.append(e.head if e.tail == u else e.tail)
    connected = len(pot) == g.n_vertices
    gens = []
    for e in edges:
        if id(e) in tree or e.tail not in pot or e.head not in pot:
            continue
        gen = tuple(z + pt - ph for z, pt, ph in zip(e.offset, pot[e.tail], pot[e.head]))
        if any(gen):
            gens.append(gen)
    return connected, gens


def validate(g: PeriodicGraph) -> ValidationReport:
    """Check every admissibility condition; violations are returned, not raised."""
    rep = ValidationReport()
    d = g.dimension
    if not isinstance(d, int) or d < 0:
        rep.add("dimension", f"dimension must be a nonnegative integer, got {d!r}")
        return rep
    if not g.vertices:
        rep.add("vertices", "vertex set is empty")
        return rep
    seen = set()
    for v in g.vertices:
        if v in seen:
            rep.add("vertices", f"duplicate vertex {v!r}", v)
        seen.add(v)
    if g.base_vertex not in seen:
        rep.add("base_vertex", f"base vertex {g.base_vertex!r} is not a vertex", g.base_vertex)
    for v in g.vertices:
        c = g.potential.get(v)
        if c is None or not math.isfinite(float(c)):
            rep.add("potential", f"vertex {v!r} has no finite potential", v)

    keys = set()
    good: list[Edge] = []
    for i, e in enumerate(g.edges):
        ok = True
        if e.tail not in seen or e.head not in seen:
            rep.add("edge_vertex", f"edge {i} references an unknown vertex", i)
            ok = False
        if len(e.offset) != d:
            rep.add("edge_offset", f"edge {i} offset has length {len(e.offset)}, expected {d}", i)
            ok = False
        if not (math.isfinite(e.weight) and e.weight > 0):
            rep.add("weight", f"edge {i} weight {e.weight!r} is not positive", i)
            ok = False
        if e.key in keys:
            rep.add("duplicate_edge", f"edge {i} repeats key {e.key!r}", i)
            ok = False
        keys.add(e.key)
        if ok and e.is_loop and not g.allow_self_loops:
            rep.add("self_loop", f"edge {i} is a zero-offset self-loop at {e.tail!r}", i)
            ok = False
        if ok:
            good.append(e)
    if rep.violations:
        return rep

    for i, e in enumerate(g.edges):
        rev = (e.head, e.tail, tuple(-z for z in e.offset))
        if rev not in keys:
            rep.add("support_symmetry",
                    f"edge {i} {e.tail}->{e.head} offset {list(e.offset)} has no reverse edge", i)

    connected, gens = _cycle_generators(g, good)
    if not connected:
        rep.add("connectivity", "quotient graph on the fundamental domain is disconnected")
    elif d > 0:
        idx = lattice_index(gens, d)
        if idx != 1:
            what = "is not full rank" if idx == 0 else f"has index {idx}"
            rep.add("connectivity", f"cycle offset lattice {what} in Z^{d}")
    return rep


def symmetrize(g: PeriodicGraph) -> PeriodicGraph:
    """Add every missing reverse edge with the weight of its partner."""
    keys = {e.key for e in g.edges}
    extra = []
    for e in g.edges:
        rev = (e.head, e.tail, tuple(-z for z in e.offset))
        if rev not in keys:
            keys.add(rev)
            extra.append(Edge(rev[0], rev[1], rev[2], e.weight))
    return PeriodicGraph(g.dimension, g.vertices, dict(g.potential), g.edges + tuple(extra),
                         g.base_vertex, g.allow_self_loops)


def degree(g: PeriodicGraph, v: str) -> float:
    """Total outgoing weight plus potential at ``v``."""
    if v not in g.index:
        raise KeyError(v)
    return float(g.degrees[g.index[v]])


# ---------------------------------------------------------------------------
# window functions

def _norm_box(box) -> Box:
    return tuple((int(lo), int(hi)) for lo, hi in box)


@dataclass(frozen=True, eq=False)
class WindowFunction:
    """Values of a function on ``box x V``.

    ``box`` lists an inclusive ``(lo, hi)`` range per axis; ``values`` has
    shape ``(hi_1 - lo_1 + 1, ..., hi_d - lo_d + 1, |V|)``.
    """

    box: Box
    vertices: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        box = _norm_box(self.box)
        object.__setattr__(self, "box", box)
        vals = np.asarray(self.values, dtype=float)
        if any(hi < lo for lo, hi in box):
            raise ValueError("window box is empty")
        if vals.shape != self.shape + (len(self.vertices),):
            raise ValueError(f"values shape {vals.shape} does not match box {box}")
        object.__setattr__(self, "values", vals)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(hi - lo + 1 for lo, hi in self.box)

    @property
    def dimension(self) -> int:
        return len(self.box)

    @classmethod
    def from_callable(cls, box, vertices, fn) -> "WindowFunction":
        box = _norm_box(box)
        vertices = tuple(vertices)
        vals = np.empty(tuple(hi - lo + 1 for lo, hi in box) + (len(vertices),))
        for z in offsets_in(box):
            idx = tuple(a - lo for a, (lo, _) in zip(z, box))
            for j, v in enumerate(vertices):
                vals[idx + (j,)] = fn(z, v)
        return cls(box, vertices, vals)

    def contains(self, z: Offset) -> bool:
        return len(z) == len(self.box) and all(lo <= a <= hi for a, (lo, hi) in zip(z, self.box))

    def __getitem__(self, cell: Cell) -> float:
        z, v = cell
        z = tuple(z)
        if not self.contains(z):
            raise KeyError(cell)
        j = self.vertices.index(v)
        return float(self.values[tuple(a - lo for a, (lo, _) in zip(z, self.box)) + (j,)])

    def cells(self) -> Iterable[Cell]:
        for z in offsets_in(self.box):
            for v in self.vertices:
                yield z, v


def offsets_in(box) -> Iterable[Offset]:
    """All integer points of a box in lexicographic order."""
    return itertools.product(*(range(lo, hi + 1) for lo, hi in box))


def shift(f: WindowFunction, z: Sequence[int]) -> WindowFunction:
    """Translate by ``z``: the result at ``(w, v)`` is ``f(w - z, v)``."""
    z = tuple(int(a) for a in z)
    box = tuple((lo + a, hi + a) for (lo, hi), a in zip(f.box, z))
    return WindowFunction(box, f.vertices, f.values.copy())


def apply_operator(g: PeriodicGraph, f: WindowFunction, at: Cell, lam: float = 0.0) -> float:
    """``(H - lam) f`` at one cell, summing edges in list order."""
    z, v = at
    z = tuple(int(a) for a in z)
    fx = f[z, v]
    total = 0.0
    for e in g.out_edges(v):
        y = tuple(a + b for a, b in zip(z, e.offset))
        if not f.contains(y):
            raise WindowTooSmall(f"neighbour {y}/{e.head} of {z}/{v} is outside the window")
        total += e.weight * (fx - f[y, e.head])
    return total + (float(g.potential[v]) - lam) * fx


def apply_operator_fn(g: PeriodicGraph, fn, at: Cell, lam: float = 0.0) -> float:
    """``(H - lam) f`` at one cell for ``f`` given as a callable ``fn(z, v)``."""
    z, v = at
    z = tuple(int(a) for a in z)
    fx = fn(z, v)
    total = 0.0
    for e in g.out_edges(v):
        y = tuple(a + b for a, b in zip(z, e.offset))
        total += e.weight * (fx - fn(y, e.head))
    return total + (float(g.potential[v]) - lam) * fx


def apply_operator_window(g: PeriodicGraph, f: WindowFunction, lam: float = 0.0) -> np.ndarray:
    """``(H - lam) f`` on every cell of the window; NaN where neighbours leave it.

    Vertex order of ``f`` must match ``g.vertices``.
    """
    if tuple(f.vertices) != g.vertices:
        raise ValueError("window vertex order differs from the graph's")
    tails, heads, offsets, weights = g.arrays
    vals = f.values.reshape(-1, g.n_vertices)
    out = _kernels.apply_window(np.ascontiguousarray(vals), np.array(f.shape, dtype=np.int64),
                                tails, heads, offsets, weights, g.potential_array - lam)
    return out.reshape(f.values.shape)


# ---------------------------------------------------------------------------
# Harnack constants

@dataclass(frozen=True)
class HarnackBound:
    source: Cell
    target: Cell
    lam: float
    constant: float
    witness_path: tuple[Cell, ...]


def default_search_box(source: Cell, target: Cell, margin: int = 2) -> Box:
    return tuple((min(a, b) - margin, max(a, b) + margin)
                 for a, b in zip(source[0], target[0]))


def harnack_bound(g: PeriodicGraph, source: Cell, target: Cell, lam: float = 0.0,
                  search_box=None) -> HarnackBound:
    """Best path-product constant ``C`` with ``f(source) >= C f(target)``.

    Each edge ``x -> y`` contributes ``b(x, y) / (deg(x) - lam)``; the
    maximal product over directed paths inside ``search_box`` is found as a
    shortest path under ``-log`` of those factors. The constant is a valid
    lower bound on the optimal one for every positive
    ``lam``-superharmonic function.
    """
    source = (tuple(int(a) for a in source[0]), source[1])
    target = (tuple(int(a) for a in target[0]), target[1])
    gap = g.degrees - lam
    if np.any(gap <= 0):
        bad = g.vertices[int(np.argmin(gap))]
        raise DegenerateDegree(f"deg({bad}) - lambda = {gap.min():g} is not positive")
    for cell in (source, target):
        if cell[1] not in g.index:
            raise KeyError(cell[1])
    if source == target:
        return HarnackBound(source, target, lam, 1.0, ())
    box = _norm_box(search_box) if search_box is not None else default_search_box(source, target)

    def inside(z):
        return all(lo <= a <= hi for a, (lo, hi) in zip(z, box))

    if not (inside(source[0]) and inside(target[0])):
        raise NoPathInWindow("endpoints lie outside the search box")

    cost = {}
    for e in g.edges:
        if not e.is_loop:
            cost[e.key] = -math.log(e.weight / gap[g.index[e.tail]])
    negative = any(c < 0 for c in cost.values())
    dist, prev = (_bellman_ford if negative else _dijkstra)(g, source, cost, inside)
    if target not in dist:
        raise NoPathInWindow(f"no path from {source} to {target} inside {box}")
    path = [target]
    while path[-1] != source:
        path.append(prev[path[-1]])
    path.reverse()
    # multiply the factors along the witness directly; exp(-sum of logs) would
    # add rounding to otherwise exact products such as 1/2 * 1/2
    weight = {e.key: e.weight for e in g.edges}
    constant = 1.0
    for (z, v), (w, u) in zip(path, path[1:]):
        step = tuple(b - a for a, b in zip(z, w))
        constant *= weight[(v, u, step)] / gap[g.index[v]]
    return HarnackBound(source, target, lam, constant, tuple(path))


def _neighbours(g, cell, cost, inside):
    z, v = cell
    for e in g.out_edges(v):
        if e.is_loop:
            continue
        y = tuple(a + b for a, b in zip(z, e.offset))
        if inside(y):
            yield (y, e.head), cost[e.key]


def _dijkstra(g, source, cost, inside):
    dist = {source: 0.0}
    prev = {}
    counter = itertools.count()
    heap = [(0.0, next(counter), source)]
    done = set()
    while heap:
        du, _, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for y, c in _neighbours(g, u, cost, inside):
            nd = du + c
            if nd < dist.get(y, math.inf):
                dist[y] = nd
                prev[y] = u
                heapq.heappush(heap, (nd, next(counter), y))
    return dist, prev


def _bellman_ford(g, source, cost, inside):
    dist = {source: 0.0}
    prev = {}
    # reachable cells first, so the relaxation bound is the box population
    order = [source]
    seen = {source}
    for u in order:
        for y, _ in _neighbours(g, u, cost, inside):
            if y not in seen:
                seen.add(y)
                order.append(y)
    for _ in range(len(order)):
        changed = False
        for u in order:
            if u not in dist:
                continue
            for y, c in _neighbours(g, u, cost, inside):
                if dist[u] + c < dist.get(y, math.inf) - 1e-15:
                    dist[y] = dist[u] + c
                    prev[y] = u
                    changed = True
        if not changed:
            return dist, prev
    raise DegenerateDegree("a cycle has path product > 1: no positive superharmonic "
                           "function exists at this lambda")
