"""Exact rational linear algebra on small dense matrices.

All coordinates are exact rationals.  ``Q`` is gmpy2's ``mpq`` when available
(noticeably faster) and falls back to ``fractions.Fraction``; both expose the
same numerator/denominator/arithmetic surface used here.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional, Sequence

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

Vec = tuple  # tuple of Q, one entry per coordinate

QZERO = Q(0)
QONE = Q(1)


def qvec(values: Iterable) -> Vec:
    """Coerce an iterable of ints/strings/rationals into a rational vector."""
    return tuple(Q(v) for v in values)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), QZERO)


def vadd(u: Sequence, v: Sequence) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u: Sequence) -> Vec:
    return tuple(c * a for a in u)


def vneg(u: Sequence) -> Vec:
    return tuple(-a for a in u)


def is_zero_vec(u: Sequence) -> bool:
    return all(a == 0 for a in u)


def mat_det(rows: Sequence[Sequence]):
    """Determinant by fraction-free-ish Gaussian elimination (exact)."""
    n = len(rows)
    m = [list(r) for r in rows]
    det = QONE
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return QZERO
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = QONE / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


def rank(vectors: Sequence[Sequence]) -> int:
    """Rank of the family (rows)."""
    if not vectors:
        return 0
    m = [list(v) for v in vectors]
    nrows, ncols = len(m), len(m[0])
    rk = 0
    for col in range(ncols):
        pivot = next((r for r in range(rk, nrows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rk], m[pivot] = m[pivot], m[rk]
        inv = QONE / m[rk][col]
        for r in range(nrows):
            if r != rk and m[r][col] != 0:
                f = m[r][col] * inv
                for c in range(col, ncols):
                    m[r][c] -= f * m[rk][c]
        rk += 1
        if rk == nrows:
            break
    return rk


def is_independent(vectors: Sequence[Sequence]) -> bool:
    return rank(vectors) == len(vectors)


def solve_combination(vectors: Sequence[Sequence], target: Sequence) -> Optional[Vec]:
    """Solve ``sum_j x_j * vectors[j] = target`` exactly.

    Returns the coefficient tuple, or None when the system is inconsistent.
    For linearly dependent families the solution with free variables set to
    zero is returned (reduced row echelon back-substitution).
    """
    k = len(vectors)
    if k == 0:
        return () if is_zero_vec(target) else None
    n = len(target)
    # augmented system: columns are the vectors
    m = [[Q(vectors[j][i]) for j in range(k)] + [Q(target[i])] for i in range(n)]
    pivots = []
    row = 0
    for col in range(k):
        pivot = next((r for r in range(row, n) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = QONE / m[row][col]
        m[row] = [e * inv for e in m[row]]
        for r in range(n):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
        if row == n:
            break
    for r in range(row, n):
        if m[r][k] != 0:
            return None
    x = [QZERO] * k
    for r, col in enumerate(pivots):
        x[col] = m[r][k]
    return tuple(x)


def in_span(v: Sequence, vectors: Sequence[Sequence]) -> bool:
    return solve_combination(vectors, v) is not None


def primitive(v: Sequence) -> tuple[Vec, "Q"]:
    """Canonical primitive representative of a nonzero rational vector.

    Returns ``(p, c)`` with ``v = c * p`` where p has coprime integer entries
    and positive first nonzero entry.  The scalar c may be negative.
    """
    denoms = [Q(e).denominator for e in v]
    lcm = 1
    for d in denoms:
        lcm = lcm * d // math.gcd(lcm, int(d))
    ints = [int(Q(e) * lcm) for e in v]
    g = 0
    for e in ints:
        g = math.gcd(g, abs(e))
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    ints = [e // g for e in ints]
    sign = 1
    for e in ints:
        if e != 0:
            sign = 1 if e > 0 else -1
            break
    p = tuple(Q(sign * e) for e in ints)
    return p, Q(sign * g, lcm)


def kernel_covector(vectors: Sequence[Sequence], dim: int) -> Vec:
    """Primitive covector annihilating a rank ``dim-1`` family (the wall equation)."""
    if rank(vectors) != dim - 1:
        raise ValueError("family does not span a hyperplane")
    # nullspace of the matrix whose rows are the vectors
    m = [list(map(Q, v)) for v in vectors]
    nrows = len(m)
    pivots: dict[int, int] = {}
    row = 0
    for col in range(dim):
        pivot = next((r for r in range(row, nrows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = QONE / m[row][col]
        m[row] = [e * inv for e in m[row]]
        for r in range(nrows):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[row])]
        pivots[col] = row
        row += 1
    free = next(c for c in range(dim) if c not in pivots)
    z = [QZERO] * dim
    z[free] = QONE
    for col, r in pivots.items():
        z[col] = -m[r][free]
    p, _ = primitive(z)
    return p


def fourier_motzkin_witness(rows: Sequence[Sequence]) -> Optional[Vec]:
    """Exact witness of the strict homogeneous system ``<row, x> > 0`` for all rows.

    Classic Fourier-Motzkin elimination on the last variable, with
    back-substitution choosing interval midpoints.  Returns None when the
    system is infeasible.  Intended for desk-scale inputs (a dozen rows or
    so in dimension <= 3); eliminated systems are deduplicated to limit
    intermediate growth.
    """
    rows = [qvec(r) for r in rows]
    n = len(rows[0]) if rows else 0
    if n == 0:
        return ()
    stack = [rows]
    system = rows
    for var in range(n - 1, 0, -1):
        lower = [r for r in system if r[var] > 0]
        upper = [r for r in system if r[var] < 0]
        keep = [r for r in system if r[var] == 0]
        new = list(keep)
        for lo in lower:
            for up in upper:
                comb = vsub(vscale(lo[var], up[:var]), vscale(up[var], lo[:var]))
                new.append(comb)
        trimmed = []
        seen = set()
        for r in new:
            r = r[:var]
            if is_zero_vec(r):
                return None  # 0 > 0 is infeasible
            p, c = primitive(r)
            key = p if c > 0 else vneg(p)
            if key not in seen:
                seen.add(key)
                trimmed.append(qvec(key))
        system = trimmed
        stack.append(system)
    # dimension 1: rows are single coefficients c with c*x > 0
    ones = stack[-1]
    if any(r[0] > 0 for r in ones) and any(r[0] < 0 for r in ones):
        return None
    if not ones:
        x = [QONE]
    elif ones[0][0] > 0:
        x = [QONE]
    else:
        x = [-QONE]
    # back-substitute through the saved systems (skip the last, already solved)
    for var in range(1, n):
        system = stack[n - 1 - var]
        lo, hi = None, None
        for r in system:
            c = r[var]
            if c == 0:
                continue
            bound = -dot(r[:var], x) / c
            if c > 0:
                lo = bound if lo is None or bound > lo else lo
            else:
                hi = bound if hi is None or bound < hi else hi
        if lo is None and hi is None:
            val = QZERO
        elif lo is None:
            val = hi - 1
        elif hi is None:
            val = lo + 1
        else:
            if lo >= hi:
                return None
            val = (lo + hi) / 2
        x.append(val)
    witness = tuple(x)
    if all(dot(r, witness) > 0 for r in rows):
        return witness
    return None


def integerize(v: Sequence) -> Vec:
    """Scale a vector by a positive rational so entries are coprime integers."""
    if is_zero_vec(v):
        return qvec(v)
    p, c = primitive(v)
    return p if c > 0 else vneg(p)
