"""Exact Gaussian elimination over any field-like element type.

Elements must support +, -, *, /, and expose is_zero().  Used for scalar
matrices, rational-function matrices and coefficient systems alike.
"""

from __future__ import annotations


def rref(rows):
    """Reduced row echelon form (on a copy); returns (rows, pivot_columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(rows)):
            if not rows[i][c].is_zero():
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][c]
        rows[r] = [v / inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(rows):
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows, zero, one):
    """Basis of the right nullspace of the matrix."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [zero] * ncols
        vec[fc] = one
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc]
        basis.append(vec)
    return basis


def solve_affine(rows, rhs, zero, one):
    """All solutions of rows * w = rhs as (particular, nullspace basis).

    Returns (None, []) when inconsistent.
    """
    if not rows:
        return [], []
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None, []
    part = [zero] * ncols
    for r, pc in enumerate(pivots):
        part[pc] = red[r][ncols]
    hom = nullspace([r[:ncols] for r in red], zero, one)
    return part, hom


def det(rows, zero, one):
    """Determinant by fraction-producing Gaussian elimination."""
    n = len(rows)
    rows = [list(r) for r in rows]
    acc = one
    for c in range(n):
        pr = None
        for i in range(c, n):
            if not rows[i][c].is_zero():
                pr = i
                break
        if pr is None:
            return zero
        if pr != c:
            rows[c], rows[pr] = rows[pr], rows[c]
            acc = -acc
        acc = acc * rows[c][c]
        inv = rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c].is_zero():
                continue
            f = rows[i][c] / inv
            rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return acc


def mat_mul(a, b, zero):
    n, k, m = len(a), len(b), len(b[0])
    out = [[zero] * m for _ in range(n)]
    for i in range(n):
        for t in range(k):
            v = a[i][t]
            if v.is_zero():
                continue
            row = b[t]
            oi = out[i]
            for j in range(m):
                if not row[j].is_zero():
                    oi[j] = oi[j] + v * row[j]
    return out

def mat_vec(a, v, zero):
    out = []
    for row in a:
        acc = zero
        for x, y in zip(row, v):
            if not x.is_zero() and not y.is_zero():
                acc = acc + x * y
        out.append(acc)
    return out


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    return [[c * x for x in row] for row in a]


def identity(n, zero, one):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]
