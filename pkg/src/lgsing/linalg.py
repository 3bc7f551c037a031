"""Dense exact linear algebra over a coefficient field.

Prime fields go through the F_p kernel (compiled when available); the
rationals use Fraction elimination.
"""
from __future__ import annotations

from fractions import Fraction

from . import kernels
from .poly.ring import Field


def _rref_q(rows, ncols):
    a = [[Fraction(x) for x in row[:ncols]] for row in rows]
    n = len(a)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == n:
            break
        piv = next((i for i in range(r, n) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        rr = a[r]
        inv = 1 / rr[c]
        for j in range(c, ncols):
            if rr[j]:
                rr[j] *= inv
        for i in range(n):
            if i != r:
                ri = a[i]
                fac = ri[c]
                if fac:
                    for j in range(c, ncols):
                        if rr[j]:
                            ri[j] -= fac * rr[j]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rref(rows, field: Field, ncols: int):
    if field.p:
        p = field.p
        return kernels.rref_modp([[x % p for x in r] for r in rows], p, ncols)
    rows = [list(r) for r in rows]
    return _rref_q(rows, ncols)


def rank(rows, field: Field, ncols: int) -> int:
    if not rows or not ncols:
        return 0
    return len(rref(rows, field, ncols)[1])


def nullspace(rows, field: Field, ncols: int):
    """Basis of ``{x : A x = 0}`` where ``A`` has the given rows."""
    red, pivots = rref(rows, field, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    p = field.p
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(red, pivots):
            v[pc] = (-row[fc]) % p if p else -row[fc]
        basis.append([field.coerce(x) for x in v])
    return basis


def solve(rows, b, field: Field, ncols: int):
    """Some ``x`` with ``A x = b``, or None."""
    aug = [list(r) + [bi] for r, bi in zip(rows, b)]
    red, pivots = rref(aug, field, ncols + 1) if aug else ([], [])
    if ncols in pivots:
        return None
    x = [0] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return [field.coerce(v) for v in x]


def matmul(A, B, field: Field):
    p = field.p
    out = []
    for r in A:
        row = []
        for j in range(len(B[0]) if B else 0):
            s = sum(r[k] * B[k][j] for k in range(len(r)))
            row.append(s % p if p else s)
        out.append(row)
    return out
