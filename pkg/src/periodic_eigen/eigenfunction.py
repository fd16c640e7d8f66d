"""Positive multiplicative generalised eigenfunctions ``f(z, v) = exp(<alpha, z>) phi(v)``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .dispersion import _solve
from .graph import PeriodicGraph, WindowFunction, _norm_box, offsets_in


@dataclass(frozen=True, eq=False)
class MultiplicativeEigenfunction:
    alpha: np.ndarray
    lam: float
    profile: Mapping[str, float]
    graph: PeriodicGraph

    def profile_array(self) -> np.ndarray:
        return np.array([self.profile[v] for v in self.graph.vertices])

    def __call__(self, z, v) -> float:
        return evaluate(self, z, v)


def build_eigenfunction(g: PeriodicGraph, alpha, tol: float = 1e-12,
                        start=None) -> MultiplicativeEigenfunction:
    """The unique positive ``Lambda(alpha)``-harmonic function with character
    ``exp(<alpha, .>)``, normalised to 1 at the base cell."""
    a, pr = _solve(g, alpha, tol, start)
    prof = {v: float(x) for v, x in zip(g.vertices, pr.right)}
    return MultiplicativeEigenfunction(a, g.max_degree - pr.theta, prof, g)


def evaluate(f: MultiplicativeEigenfunction, z: Sequence[int], v: str) -> float:
    if v not in f.profile:
        raise KeyError(v)
    return float(np.exp(np.dot(f.alpha, np.asarray(z, dtype=float)))) * f.profile[v] \
        if len(f.alpha) else f.profile[v]


def tabulate(f: MultiplicativeEigenfunction, box) -> WindowFunction:
    """Values of ``f`` on ``box x V``."""
    box = _norm_box(box)
    g = f.graph
    axes = [np.arange(lo, hi + 1, dtype=float) for lo, hi in box]
    if axes:
        mesh = np.meshgrid(*axes, indexing="ij")
        expo = sum(a * m for a, m in zip(f.alpha, mesh))
        vals = np.exp(expo)[..., None] * f.profile_array()
    else:
        vals = f.profile_array().copy()
    return WindowFunction(box, g.vertices, vals)


def residual(f: MultiplicativeEigenfunction, window) -> float:
    """``max |(H - lam) f| / max(1, |f|)`` over the window.

    Neighbours outside the window are evaluated from the closed form, so no
    boundary layer is lost.
    """
    g = f.graph
    box = _norm_box(window)
    tails, heads, offsets, weights = g.arrays
    prof = f.profile_array()
    axes = [np.arange(lo, hi + 1, dtype=float) for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij") if axes else []
    shape = tuple(len(a) for a in axes)

    def values_at(shift_vec):
        expo = np.zeros(shape)
        for k, m in enumerate(mesh):
            expo = expo + f.alpha[k] * (m + shift_vec[k])
        return np.exp(expo)

    base = values_at(np.zeros(g.dimension))
    fx = base[..., None] * prof
    out = fx * (g.potential_array - f.lam)
    for e in range(len(weights)):
        v, w = tails[e], heads[e]
        fy = values_at(offsets[e]) * prof[w]
        out[..., v] += weights[e] * (fx[..., v] - fy)
    return float(np.max(np.abs(out) / np.maximum(1.0, np.abs(fx))))


def check_multiplicative(f, samples, window, rtol: float = 1e-10) -> bool:
    """Check ``f(w - z, v) == exp(-<alpha, z>) f(w, v)`` for sampled shifts ``z``.

    ``f`` may be a :class:`MultiplicativeEigenfunction` or any object with
    ``alpha`` and a ``__call__(z, v)`` (used for tabulated negative controls).
    """
    box = _norm_box(window)
    vertices = f.graph.vertices if hasattr(f, "graph") else f.vertices
    alpha = np.asarray(f.alpha, dtype=float)
    for z in samples:
        z = np.asarray(z, dtype=float)
        factor = float(np.exp(-np.dot(alpha, z))) if len(alpha) else 1.0
        for w in offsets_in(box):
            shifted = tuple(int(a - b) for a, b in zip(w, z))
            for v in vertices:
                fw = f(w, v)
                if abs(f(shifted, v) - factor * fw) > rtol * abs(fw):
                    return False
    return True


def to_json(f: MultiplicativeEigenfunction) -> dict:
    return {"alpha": [float(x) for x in f.alpha], "lambda": float(f.lam),
            "profile": {v: float(f.profile[v]) for v in f.graph.vertices}}
