"""Factoring a periodic graph by a sublattice of its translation group.

The factored weight is ``b_R(Rx, Ry) = sum_{r in R} b(x, r y)`` and the
factored potential ``c_R(Rx) = c(x)``. Weights that land on ``Rx`` itself
become self-loops: they keep degrees intact and contribute ``f(x) - f(x) = 0``
to the operator.

Two cases are supported. A full-rank sublattice gives a finite graph on
``(Z^d / R) x V`` (exported with dimension 0). A saturated sublattice of rank
``k < d`` gives a periodic graph of dimension ``d - k`` after a unimodular
change of coordinates.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import RankError, TorsionError
from .graph import (Edge, PeriodicGraph, WindowFunction, _norm_box, apply_operator_fn,
                    apply_operator_window, offsets_in)
from .lattice import (IntMatrix, as_int_matrix, hermite_normal_form, reduce_mod_hnf,
                      smith_normal_form)


@dataclass(frozen=True)
class Sublattice:
    basis: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = as_int_matrix(self.basis)
        object.__setattr__(self, "basis", tuple(tuple(r) for r in rows))

    @classmethod
    def parse(cls, text: str) -> "Sublattice":
        """Parse ``"1,0;0,2"`` style row lists."""
        rows = [[int(x) for x in part.split(",")] for part in text.split(";") if part.strip()]
        return cls(tuple(tuple(r) for r in rows))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def dimension(self) -> int:
        return len(self.basis[0]) if self.basis else 0


@dataclass(frozen=True, eq=False)
class QuotientGraph:
    """Result of factoring.

    ``kind`` is ``"FiniteTorus"`` or ``"Periodic"``. ``coordinates`` is the
    HNF of the sublattice for tori, and the unimodular ``d x d`` matrix
    ``U`` with ``z -> (z @ U)[k:]`` as the quotient offset for periodic
    quotients.
    """

    kind: str
    graph: PeriodicGraph
    sublattice: Sublattice
    coordinates: IntMatrix
    parent: PeriodicGraph

    def project(self, cell) -> tuple[tuple[int, ...], str]:
        """Quotient cell ``R x`` of a cell ``x = (z, v)`` of the parent graph."""
        z, v = cell
        if self.kind == "FiniteTorus":
            return (), torus_vertex_name(v, reduce_mod_hnf(z, self.coordinates))
        k = self.sublattice.rank
        y = [sum(z[i] * self.coordinates[i][j] for i in range(len(z))) for j in range(len(z))]
        return tuple(y[k:]), v

    def lift_alpha(self, beta) -> np.ndarray:
        """Parent exponent ``alpha`` with ``<alpha, z> = <beta, quotient offset of z>``."""
        if self.kind != "Periodic":
            raise ValueError("exponents only lift through periodic quotients")
        k = self.sublattice.rank
        u = np.array(self.coordinates, dtype=float)
        return u[:, k:] @ np.asarray(beta, dtype=float)


def torus_vertex_name(v: str, coset: Sequence[int]) -> str:
    return f"{v}@({','.join(str(int(c)) for c in coset)})"


def _check_dims(g: PeriodicGraph, lat: Sublattice):
    if lat.rank == 0:
        raise RankError("sublattice needs at least one generator")
    if lat.dimension != g.dimension:
        raise ValueError(f"sublattice lives in Z^{lat.dimension}, graph in Z^{g.dimension}")


def factor_full_rank(g: PeriodicGraph, lat: Sublattice) -> QuotientGraph:
    """Finite quotient by a full-rank sublattice.

    Cosets are represented by the box ``0 <= r_i < h_ii`` of the HNF
    diagonal, enumerated lexicographically; quotient vertices are ordered
    coset-major and named ``"v@(r_1,...,r_d)"``.
    """
    _check_dims(g, lat)
    if lat.rank != g.dimension:
        raise RankError(f"full-rank factoring needs {g.dimension} generators, got {lat.rank}")
    hnf, _ = hermite_normal_form([list(r) for r in lat.basis])
    cosets = list(itertools.product(*(range(hnf[i][i]) for i in range(len(hnf)))))
    names = [torus_vertex_name(v, r) for r in cosets for v in g.vertices]
    weights: dict[tuple[str, str], list[float]] = {}
    for r in cosets:
        for e in g.edges:
            target = reduce_mod_hnf([a + b for a, b in zip(r, e.offset)], hnf)
            key = (torus_vertex_name(e.tail, r), torus_vertex_name(e.head, target))
            weights.setdefault(key, []).append(e.weight)
    edges = tuple(Edge(t, h, (), math.fsum(ws)) for (t, h), ws in weights.items())
    potential = {torus_vertex_name(v, r): float(g.potential[v]) for r in cosets for v in g.vertices}
    base = torus_vertex_name(g.base_vertex, (0,) * g.dimension)
    q = PeriodicGraph(0, tuple(names), potential, edges, base, allow_self_loops=True)
    return QuotientGraph("FiniteTorus", q, lat, hnf, g)


def factor_primitive(g: PeriodicGraph, lat: Sublattice) -> QuotientGraph:
    """Periodic quotient by a saturated sublattice of rank ``k < d``.

    Raises
    ------
    TorsionError
        If ``Z^d / L`` has torsion (some Smith invariant exceeds 1).
    RankError
        If the generators are dependent or ``k >= d``.
    """
    _check_dims(g, lat)
    k, d = lat.rank, g.dimension
    if k >= d:
        raise RankError(f"primitive factoring needs rank < {d}, got {k}")
    _, diag, right = smith_normal_form([list(r) for r in lat.basis])
    if any(x == 0 for x in diag):
        raise RankError("sublattice generators are linearly dependent")
    if any(x != 1 for x in diag):
        raise TorsionError(f"quotient Z^{d}/L has torsion (Smith invariants {diag})")
    weights: dict[tuple[str, str, tuple[int, ...]], list[float]] = {}
    for e in g.edges:
        y = [sum(e.offset[i] * right[i][j] for i in range(d)) for j in range(d)]
        weights.setdefault((e.tail, e.head, tuple(y[k:])), []).append(e.weight)
    edges = tuple(Edge(t, h, z, math.fsum(ws)) for (t, h, z), ws in weights.items())
    q = PeriodicGraph(d - k, g.vertices, dict(g.potential), edges, g.base_vertex,
                      allow_self_loops=True)
    return QuotientGraph("Periodic", q, lat, right, g)


def factor(g: PeriodicGraph, lat: Sublattice) -> QuotientGraph:
    """Dispatch on the rank of the sublattice."""
    if lat.rank == g.dimension:
        return factor_full_rank(g, lat)
    return factor_primitive(g, lat)


def intertwine_check(g: PeriodicGraph, lat: Sublattice, f_quotient: Callable, window,
                     quotient: QuotientGraph | None = None) -> float:
    """Largest discrepancy between ``H`` applied to the lift of ``f_quotient``
    and the lift of ``H_R f_quotient`` over ``window``.

    ``f_quotient(z, v)`` is called with quotient cells: ``((), name)`` for
    tori, ``(z', v)`` for periodic quotients. The lift is tabulated on the
    window grown by the largest edge offset, so every window cell has all its
    neighbours.
    """
    q = quotient if quotient is not None else factor(g, lat)
    box = _norm_box(window)
    reach = max((max((abs(a) for a in e.offset), default=0) for e in g.edges), default=0)
    big = tuple((lo - reach, hi + reach) for lo, hi in box)

    def lifted(z, v):
        qz, qv = q.project((z, v))
        return f_quotient(qz, qv)

    table = WindowFunction.from_callable(big, g.vertices, lifted)
    hf = apply_operator_window(g, table)
    worst = 0.0
    for z in offsets_in(box):
        idx = tuple(a - lo for a, (lo, _) in zip(z, big))
        for j, v in enumerate(g.vertices):
            lhs = hf[idx + (j,)]
            rhs = apply_operator_fn(q.graph, f_quotient, q.project((z, v)))
            worst = max(worst, abs(lhs - rhs))
    return float(worst)


def potential_shift_consistency(g: PeriodicGraph, lat: Sublattice, lam: float) -> bool:
    """Factoring ``(b, c - lam)`` gives exactly ``(b_R, c_R - lam)``."""
    shifted = g.with_potential({v: float(g.potential[v]) - lam for v in g.vertices})
    a = factor(shifted, lat).graph
    b = factor(g, lat).graph
    if a.vertices != b.vertices or a.edges != b.edges:
        return False
    return all(a.potential[v] == float(b.potential[v]) - lam for v in b.vertices)


def finite_operator_matrix(g: PeriodicGraph, lam: float = 0.0) -> np.ndarray:
    """Matrix of ``H - lam`` on a finite (dimension 0) graph; loops cancel."""
    if g.dimension != 0:
        raise ValueError("operator matrix needs a finite graph")
    n = g.n_vertices
    m = np.zeros((n, n))
    for e in g.edges:
        i, j = g.index[e.tail], g.index[e.head]
        m[i, i] += e.weight
        m[i, j] -= e.weight
    m[np.diag_indices(n)] += g.potential_array - lam
    return m
