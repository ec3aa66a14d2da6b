"""Small exact integer-matrix utilities: determinants, adjugates, rank,
Smith/Hermite normal forms and unimodular completion.

Everything here targets the tiny matrices of this library (ell <= 5), so
plain fraction-free algorithms win over anything clever.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

from .errors import InconsistentInput


def det(rows) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if any(len(r) != n for r in a):
        raise InconsistentInput("determinant needs a square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1]


def mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    assert len(a[0]) == m
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(m)) for j in range(p))
                 for i in range(n))


def mat_vec(a, v):
    return tuple(sum(r[j] * v[j] for j in range(len(v))) for r in a)


def adjugate(rows):
    """Adjugate matrix: adj(A) A = det(A) I."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if n == 1:
        return ((1,),)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[a[r][c] for c in range(n) if c != j]
                     for r in range(n) if r != i]
            out[j][i] = (-1) ** (i + j) * det(minor)
    return tuple(tuple(r) for r in out)


def rank(rows) -> int:
    a = [[Fraction(v) for v in r] for r in rows]
    rk = 0
    ncols = len(a[0]) if a else 0
    for col in range(ncols):
        piv = next((i for i in range(rk, len(a)) if a[i][col]), None)
        if piv is None:
            continue
        a[rk], a[piv] = a[piv], a[rk]
        inv = 1 / a[rk][col]
        a[rk] = [x * inv for x in a[rk]]
        for i in range(len(a)):
            if i != rk and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[rk])]
        rk += 1
    return rk


def minor_gcds(rows):
    """d_k = gcd of all k x k minors, for k = 1..min(shape); 0 if all vanish."""
    m, n = len(rows), len(rows[0])
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for ri in combinations(range(m), k):
            for ci in combinations(range(n), k):
                sub = [[rows[i][j] for j in ci] for i in ri]
                g = math.gcd(g, abs(det(sub)))
        out.append(g)
    return out


def invariant_factors(rows):
    """Invariant factors of an integer matrix (Smith diagonal, zeros dropped)."""
    d = minor_gcds(rows)
    out = []
    prev = 1
    for g in d:
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def is_basis_extendable(rows) -> bool:
    """True when the k x ell row stack extends to a matrix in GL(ell, Z).

    Equivalent to all invariant factors being 1, i.e. the gcd of the
    maximal minors is 1.
    """
    k = len(rows)
    if k == 0:
        return True
    if rank(rows) < k:
        return False
    return minor_gcds(rows)[k - 1] == 1


def smith_normal_form(rows):
    """(U, S, V) with U A V = S diagonal and U, V unimodular."""
    a = [list(map(int, r)) for r in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, f):
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, f):
        for r in a:
            r[dst] += f * r[src]
        for r in v:
            r[dst] += f * r[src]

    t = 0
    while t < min(m, n):
        # find a nonzero pivot of least absolute value
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        dirty = False
        for i in range(t + 1, m):
            if a[i][t]:
                q = a[i][t] // a[t][t]
                add_row(t, i, -q)
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            if a[t][j]:
                q = a[t][j] // a[t][t]
                add_col(t, j, -q)
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        # enforce divisibility of the remaining block
        p = a[t][t]
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % p:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, t, 1)
            continue
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return (tuple(map(tuple, u)), tuple(map(tuple, a)), tuple(map(tuple, v)))


def hermite_normal_form(rows):
    """(H, U) with U A = H in row-style Hermite normal form, U unimodular."""
    a = [list(map(int, r)) for r in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, m):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        # euclidean sweep in this column
        while True:
            nz = [i for i in range(r, m) if a[i][col]]
            if len(nz) == 1:
                piv = nz[0]
                break
            nz.sort(key=lambda i: abs(a[i][col]))
            small = nz[0]
            for i in nz[1:]:
                q = a[i][col] // a[small][col]
                a[i] = [x - q * y for x, y in zip(a[i], a[small])]
                u[i] = [x - q * y for x, y in zip(u[i], u[small])]
        a[r], a[piv] = a[piv], a[r]
        u[r], u[piv] = u[piv], u[r]
        if a[r][col] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = a[i][col] // a[r][col]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return tuple(map(tuple, a)), tuple(map(tuple, u))


def int_inverse_unimodular(rows):
    """Exact inverse of a matrix with determinant +-1."""
    d = det(rows)
    if d not in (1, -1):
        raise InconsistentInput("matrix is not unimodular (det=%d)" % d)
    adj = adjugate(rows)
    if d == 1:
        return adj
    return tuple(tuple(-x for x in r) for r in adj)


def complete_to_unimodular(rows, ell=None):
    """Extend a k x ell stack with all invariant factors 1 to det +-1.

    Uses the Smith transform A = U^-1 [I|0] V^-1: appending the last
    ell - k rows of V^-1 gives a unimodular square matrix.
    """
    k = len(rows)
    ell = ell if ell is not None else (len(rows[0]) if rows else 0)
    if k == ell:
        if det(rows) not in (1, -1):
            raise InconsistentInput("square stack is not unimodular")
        return tuple(map(tuple, rows))
    if not is_basis_extendable(rows):
        raise InconsistentInput("row stack is not extendable to GL(ell, Z)")
    _, _, v = smith_normal_form(rows)
    vinv = int_inverse_unimodular(v)
    out = [tuple(map(int, r)) for r in rows]
    out.extend(vinv[k:])
    if det(out) not in (1, -1):
        raise InconsistentInput("completion failed")  # pragma: no cover
    return tuple(out)
