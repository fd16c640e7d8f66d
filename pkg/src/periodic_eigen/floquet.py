"""Floquet matrices of a periodic graph at a real character exponent."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import PeriodicGraph


@dataclass(frozen=True, eq=False)
class FloquetMatrix:
    alpha: np.ndarray
    entries: np.ndarray
    max_degree: float


def _alpha(g: PeriodicGraph, alpha) -> np.ndarray:
    a = np.atleast_1d(np.asarray(alpha, dtype=float)) if g.dimension else np.zeros(0)
    if a.shape != (g.dimension,):
        raise ValueError(f"alpha must have length {g.dimension}, got shape {a.shape}")
    return a


def assemble_q(g: PeriodicGraph, alpha) -> FloquetMatrix:
    """Nonnegative ``|V| x |V|`` matrix whose Perron pair encodes ``alpha``.

    Entry ``(v, w)`` sums ``weight * exp(<alpha, z>)`` over edges
    ``v -> w``; the diagonal additionally carries ``max_deg - deg(v)``.

    Raises
    ------
    OverflowError
        If some ``|<alpha, z>|`` exceeds 700.
    """
    a = _alpha(g, alpha)
    tails, heads, offsets, weights = g.arrays
    q, bad = _kernels.assemble_q(g.n_vertices, tails, heads, offsets.astype(float),
                                 weights, a, g.max_degree - g.degrees)
    if bad >= 0:
        e = g.edges[bad]
        raise OverflowError(f"exp overflow on edge {e.tail}->{e.head} offset {list(e.offset)} "
                            f"at alpha={a.tolist()}")
    return FloquetMatrix(a, q, g.max_degree)


def assemble_dq(g: PeriodicGraph, alpha) -> np.ndarray:
    """Derivative of the Floquet matrix along each coordinate of alpha."""
    a = _alpha(g, alpha)
    tails, heads, offsets, weights = g.arrays
    return _kernels.assemble_dq(g.n_vertices, tails, heads, offsets.astype(float), weights, a)


def support_strongly_connected(m: np.ndarray) -> bool:
    n = m.shape[0]
    if n == 0:
        return False
    reach = (m > 0) | np.eye(n, dtype=bool)
    for _ in range(max(1, int(np.ceil(np.log2(n))))):
        reach = (reach.astype(np.int64) @ reach.astype(np.int64)) > 0
    return bool(reach.all())


def is_irreducible(m) -> bool:
    """True iff the support digraph of the matrix is strongly connected."""
    entries = m.entries if isinstance(m, FloquetMatrix) else np.asarray(m, dtype=float)
    return support_strongly_connected(entries)


def ground_state_operator(g: PeriodicGraph, alpha) -> np.ndarray:
    """``max_deg * I - Q_alpha``: the operator conjugated by ``exp(<alpha, z>)``
    and restricted to periodic functions."""
    fm = assemble_q(g, alpha)
    return fm.max_degree * np.eye(g.n_vertices) - fm.entries
