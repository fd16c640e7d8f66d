"""Exact integer lattice algebra: Hermite and Smith normal forms.

Matrices are plain lists of lists of Python ints, so arithmetic never
overflows and never touches floating point. Row vectors generate lattices.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import RankError

IntMatrix = list[list[int]]


def as_int_matrix(rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
    out = []
    for row in rows:
        r = []
        for x in row:
            if isinstance(x, bool) or int(x) != x:
                raise TypeError(f"non-integer lattice entry {x!r}")
            r.append(int(x))
        out.append(r)
    if cols is None:
        cols = len(out[0]) if out else 0
    if any(len(r) != cols for r in out):
        raise ValueError("ragged integer matrix")
    return out


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(a))]


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse_unimodular(m: IntMatrix) -> IntMatrix:
    """Exact inverse of a square integer matrix with determinant +-1."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise RankError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    inv = [row[n:] for row in a]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in inv]


def _row_hnf(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, int]:
    """Row-style HNF of an arbitrary integer matrix.

    Returns ``(a, u, rank)`` with ``a = u @ m``; the first ``rank`` rows of
    ``a`` are in echelon form with positive pivots and the entries above
    each pivot reduced into ``[0, pivot)``; the remaining rows are zero.
    """
    a = [row[:] for row in m]
    n = len(a)
    cols = len(a[0]) if a else 0
    u = identity(n)
    r = 0
    for c in range(cols):
        if r == n:
            break
        while True:
            nz = [i for i in range(r, n) if a[i][c] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: (abs(a[i][c]), i))
            if best != r:
                a[r], a[best] = a[best], a[r]
                u[r], u[best] = u[best], u[r]
            if len(nz) == 1:
                break
            p = a[r][c]
            for i in range(r + 1, n):
                q = a[i][c] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        p = a[r][c]
        for i in range(r):
            q = a[i][c] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return a, u, r


def hermite_normal_form(basis: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Hermite normal form of a lattice basis given as independent rows.

    Parameters
    ----------
    basis : k x d integer matrix with linearly independent rows.

    Returns
    -------
    hnf : k x d echelon matrix, positive pivots, entries above each pivot
        reduced into ``[0, pivot)``.
    unimodular : k x k integer matrix with ``hnf = unimodular @ basis``.

    Raises
    ------
    RankError
        If the rows are linearly dependent.
    """
    m = as_int_matrix(basis)
    a, u, rank = _row_hnf(m)
    if rank < len(m):
        raise RankError(f"basis has rank {rank} < {len(m)} rows")
    return a, u


def pivots(hnf: IntMatrix) -> list[tuple[int, int]]:
    """(column, value) of the leading entry of each nonzero HNF row."""
    out = []
    for row in hnf:
        for j, x in enumerate(row):
            if x:
                out.append((j, x))
                break
    return out


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, list[int], IntMatrix]:
    """Smith normal form ``left @ m @ right = diag(d_1, d_2, ...)``.

    The diagonal has ``min(rows, cols)`` entries, each nonnegative and
    dividing the next; trailing zeros mark rank deficiency. ``left`` and
    ``right`` are unimodular.
    """
    a = as_int_matrix(m)
    rows = len(a)
    cols = len(a[0]) if a else 0
    left = identity(rows)
    right = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + q * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in right:
            row[dst] += q * row[src]

    def move_smallest(t):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            return False
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        return True

    for t in range(min(rows, cols)):
        if not move_smallest(t):
            break
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    add_row(i, t, -q)
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    add_col(j, t, -q)
                if a[t][j]:
                    dirty = True
            if dirty:
                move_smallest(t)
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
    diag = [a[i][i] for i in range(min(rows, cols))]
    return left, diag, right


def lattice_spans_Zd(generators: Sequence[Sequence[int]], d: int) -> bool:
    """True iff the integer span of the generator rows is all of Z^d."""
    if d == 0:
        return True
    gens = as_int_matrix(generators, cols=d)
    if not gens:
        return False
    a, _, rank = _row_hnf(gens)
    return rank == d and all(v == 1 for _, v in pivots(a[:rank]))


def lattice_index(generators: Sequence[Sequence[int]], d: int) -> int:
    """Index of the generated lattice in Z^d (0 when it is not full rank)."""
    if d == 0:
        return 1
    gens = as_int_matrix(generators, cols=d)
    if not gens:
        return 0
    a, _, rank = _row_hnf(gens)
    if rank < d:
        return 0
    idx = 1
    for _, v in pivots(a[:rank]):
        idx *= v
    return idx


def reduce_mod_hnf(z: Sequence[int], hnf: IntMatrix) -> tuple[int, ...]:
    """Canonical coset representative of ``z`` modulo a full-rank square HNF.

    The representative has ``0 <= r_i < hnf[i][i]`` in every coordinate.
    """
    r = [int(x) for x in z]
    for i, row in enumerate(hnf):
        q = r[i] // row[i]
        if q:
            r = [x - q * y for x, y in zip(r, row)]
    return tuple(r)
