"""Hot numeric loops: numba-compiled loop kernels with numpy fallbacks.

Each kernel has two implementations with the same signature and result:

* ``*_loops``: explicit loops, compiled with ``numba.njit``;
* ``*_numpy``: vectorised numpy, used when numba is unavailable or when the
  environment variable ``PERIODIC_EIGEN_DISABLE_NUMBA`` is truthy at import.

The unsuffixed names are bound to whichever path is active.
"""
from __future__ import annotations

import math
import os

import numpy as np

EXP_LIMIT = 700.0

STATUS_OK = 0
STATUS_MAXITER = 1
STATUS_REDUCIBLE = 2

_TINY = 1e-290


def _flag_disabled() -> bool:
    value = os.environ.get("PERIODIC_EIGEN_DISABLE_NUMBA", "")
    return value.strip().lower() in {"1", "true", "yes", "on"}


try:
    if _flag_disabled():
        raise ImportError("disabled by PERIODIC_EIGEN_DISABLE_NUMBA")
    import numba
except ImportError:
    numba = None

NUMBA_AVAILABLE = numba is not None


# --------------------------------------------------------------------------
# Floquet matrix assembly

def assemble_q_numpy(n, tails, heads, offsets, weights, alpha, diag_shift):
    """Dense Floquet matrix; returns ``(q, bad_edge)`` with ``bad_edge=-1`` if ok.

    ``diag_shift[v]`` is ``max_deg - deg(v)``. Terms accumulate in edge order.
    """
    q = np.zeros((n, n))
    expo = offsets @ alpha if offsets.shape[1] else np.zeros(tails.shape[0])
    bad = np.flatnonzero(np.abs(expo) > EXP_LIMIT)
    if bad.size:
        return q, int(bad[0])
    np.add.at(q, (tails, heads), weights * np.exp(expo))
    q[np.diag_indices(n)] += diag_shift
    return q, -1


def assemble_q_loops(n, tails, heads, offsets, weights, alpha, diag_shift):
    q = np.zeros((n, n))
    d = offsets.shape[1]
    for e in range(tails.shape[0]):
        s = 0.0
        for k in range(d):
            s += alpha[k] * offsets[e, k]
        if abs(s) > EXP_LIMIT:
            return q, e
        q[tails[e], heads[e]] += weights[e] * math.exp(s)
    for v in range(n):
        q[v, v] += diag_shift[v]
    return q, -1


def assemble_dq_numpy(n, tails, heads, offsets, weights, alpha):
    """Partial derivatives of the Floquet matrix in alpha, shape ``(d, n, n)``."""
    d = offsets.shape[1]
    dq = np.zeros((d, n, n))
    if d == 0:
        return dq
    terms = weights * np.exp(offsets @ alpha)
    for k in range(d):
        np.add.at(dq[k], (tails, heads), terms * offsets[:, k])
    return dq


def assemble_dq_loops(n, tails, heads, offsets, weights, alpha):
    d = offsets.shape[1]
    dq = np.zeros((d, n, n))
    for e in range(tails.shape[0]):
        s = 0.0
        for k in range(d):
            s += alpha[k] * offsets[e, k]
        t = weights[e] * math.exp(s)
        for k in range(d):
            dq[k, tails[e], heads[e]] += t * offsets[e, k]
    return dq


# --------------------------------------------------------------------------
# Perron power iteration

def power_iteration_numpy(a, x0, y0, shift, tol, max_iter):
    """Simultaneous power iteration on ``a + shift*I`` and its transpose.

    Returns ``(lo, hi, x, y, iters, status)``. ``[lo, hi]`` is the
    intersection of the right and left Collatz-Wielandt enclosures of the
    Perron root of ``a``. Iteration stops once both enclosures are narrower
    than ``tol * max(1, hi)``.
    """
    b = a + shift * np.eye(a.shape[0])
    bt = b.T.copy()
    x = x0 / x0.max()
    y = y0 / y0.max()
    lo, hi = -np.inf, np.inf
    status = STATUS_MAXITER
    it = 0
    while it < max_iter:
        it += 1
        bx = b @ x
        by = bt @ y
        rx = bx / x
        ry = by / y
        lox, hix = rx.min() - shift, rx.max() - shift
        loy, hiy = ry.min() - shift, ry.max() - shift
        lo, hi = max(lox, loy), min(hix, hiy)
        if hi < lo:
            lo, hi = hi, lo
        scale = max(1.0, abs(hi))
        if hix - lox <= tol * scale and hiy - loy <= tol * scale:
            status = STATUS_OK
            break
        x = bx / bx.max()
        y = by / by.max()
        if x.min() < _TINY or y.min() < _TINY:
            status = STATUS_REDUCIBLE
            break
    return lo, hi, x, y, it, status


def power_iteration_loops(a, x0, y0, shift, tol, max_iter):
    n = a.shape[0]
    x = x0 / x0.max()
    y = y0 / y0.max()
    bx = np.empty(n)
    by = np.empty(n)
    lo = -np.inf
    hi = np.inf
    status = STATUS_MAXITER
    it = 0
    while it < max_iter:
        it += 1
        for i in range(n):
            sx = shift * x[i]
            sy = shift * y[i]
            for j in range(n):
                sx += a[i, j] * x[j]
                sy += a[j, i] * y[j]
            bx[i] = sx
            by[i] = sy
        lox = np.inf
        hix = -np.inf
        loy = np.inf
        hiy = -np.inf
        xmax = 0.0
        ymax = 0.0
        for i in range(n):
            rx = bx[i] / x[i]
            ry = by[i] / y[i]
            lox = min(lox, rx)
            hix = max(hix, rx)
            loy = min(loy, ry)
            hiy = max(hiy, ry)
            xmax = max(xmax, bx[i])
            ymax = max(ymax, by[i])
        lox -= shift
        hix -= shift
        loy -= shift
        hiy -= shift
        lo = max(lox, loy)
        hi = min(hix, hiy)
        if hi < lo:
            lo, hi = hi, lo
        scale = max(1.0, abs(hi))
        if hix - lox <= tol * scale and hiy - loy <= tol * scale:
            status = STATUS_OK
            break
        xmin = np.inf
        ymin = np.inf
        for i in range(n):
            x[i] = bx[i] / xmax
            y[i] = by[i] / ymax
            xmin = min(xmin, x[i])
            ymin = min(ymin, y[i])
        if xmin < _TINY or ymin < _TINY:
            status = STATUS_REDUCIBLE
            break
    return lo, hi, x, y, it, status


# --------------------------------------------------------------------------
# Operator on a tabulated window

def apply_window_numpy(values, shape, tails, heads, offsets, weights, diag):
    """``sum_y b(x,y)(f(x) - f(y)) + diag(v) f(x)`` on every cell of a grid.

    ``values`` has shape ``(ncells, nv)``, cells in C order over ``shape``.
    Cells with a neighbour outside the grid come back as NaN. Edge terms
    are added in edge-list order.
    """
    nv = values.shape[1]
    dims = tuple(int(s) for s in shape)
    grid = values.reshape(dims + (nv,))
    out = grid * diag
    for e in range(tails.shape[0]):
        v, w = tails[e], heads[e]
        src = [slice(None)] * len(dims)
        dst = [slice(None)] * len(dims)
        invalid = []
        for k, z in enumerate(offsets[e]):
            z = int(z)
            n = dims[k]
            if z >= 0:
                dst[k] = slice(0, max(n - z, 0))
                src[k] = slice(min(z, n), n)
                invalid.append((k, slice(max(n - z, 0), n)))
            else:
                dst[k] = slice(min(-z, n), n)
                src[k] = slice(0, max(n + z, 0))
                invalid.append((k, slice(0, min(-z, n))))
        dst_t = tuple(dst) + (v,)
        out[dst_t] = out[dst_t] + weights[e] * (grid[dst_t] - grid[tuple(src) + (w,)])
        for k, sl in invalid:
            idx = [slice(None)] * len(dims)
            idx[k] = sl
            out[tuple(idx) + (v,)] = np.nan
    return out.reshape(values.shape)


def apply_window_loops(values, shape, tails, heads, offsets, weights, diag):
    ncells, nv = values.shape
    d = shape.shape[0]
    out = np.empty((ncells, nv))
    strides = np.ones(d, dtype=np.int64)
    for k in range(d - 2, -1, -1):
        strides[k] = strides[k + 1] * shape[k + 1]
    coord = np.zeros(d, dtype=np.int64)
    bad = np.zeros(nv, dtype=np.bool_)
    for c in range(ncells):
        rem = c
        for k in range(d):
            coord[k] = rem // strides[k]
            rem -= coord[k] * strides[k]
        for v in range(nv):
            out[c, v] = diag[v] * values[c, v]
            bad[v] = False
        for e in range(tails.shape[0]):
            v = tails[e]
            tgt = 0
            inside = True
            for k in range(d):
                p = coord[k] + offsets[e, k]
                if p < 0 or p >= shape[k]:
                    inside = False
                    break
                tgt += p * strides[k]
            if not inside:
                bad[v] = True
                continue
            out[c, v] += weights[e] * (values[c, v] - values[tgt, heads[e]])
        for v in range(nv):
            if bad[v]:
                out[c, v] = np.nan
    return out


if NUMBA_AVAILABLE:
    _jit = numba.njit(cache=True, nogil=True)
    assemble_q_compiled = _jit(assemble_q_loops)
    assemble_dq_compiled = _jit(assemble_dq_loops)
    power_iteration_compiled = _jit(power_iteration_loops)
    apply_window_compiled = _jit(apply_window_loops)
    assemble_q = assemble_q_compiled
    assemble_dq = assemble_dq_compiled
    power_iteration = power_iteration_compiled
    apply_window = apply_window_compiled
else:
    assemble_q = assemble_q_numpy
    assemble_dq = assemble_dq_numpy
    power_iteration = power_iteration_numpy
    apply_window = apply_window_numpy


def backend() -> str:
    """Name of the active kernel path, ``"numba"`` or ``"numpy"``."""
    return "numba" if NUMBA_AVAILABLE else "numpy"
