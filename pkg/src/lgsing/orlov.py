"""Folding Koszul modules into matrix factorizations, and back via stabilization."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractionInvalid, IdentityViolation, PeriodicityNotReached
from .koszul import KoszulModule, convolve_ext
from .mf import (GradedHom, LGPair, MatrixFactorization, box_basis, box_product, change_field,
                 find_homotopy_equivalence, hom_cohomology_dims, hom_diff, identity_hom)
from .poly import PolyMatrix, solve_linear, syzygies


def fold_basis(M: KoszulModule):
    """Labels ``(degree, index)`` of the even and odd pieces, degrees ascending."""
    even = [(i, k) for i in M.degrees() if i % 2 == 0 for k in range(M.rank(i))]
    odd = [(i, k) for i in M.degrees() if i % 2 == 1 for k in range(M.rank(i))]
    return even, odd


def _assemble(M: KoszulModule, src, dst, pieces):
    """Matrix from basis ``src`` to ``dst`` built from degreewise maps.

    ``pieces`` is a list of functions ``i -> (target degree, matrix from M^i)``.
    """
    ctx = M.ctx
    z = ctx.zero()
    out = [[z] * len(src) for _ in dst]
    pos = {lab: n for n, lab in enumerate(dst)}
    for c, (i, k) in enumerate(src):
        for piece in pieces:
            j, mat = piece(i)
            if mat is None or mat.cols == 0 or mat.rows == 0:
                continue
            for r in range(mat.rows):
                e = mat.entries[r][k]
                if not e.is_zero():
                    row = pos[(j, r)]
                    out[row][c] = out[row][c] + e
    return PolyMatrix(ctx, len(dst), len(src), out)


def fold(M: KoszulModule) -> MatrixFactorization:
    """Collapse to a 2-periodic object with ``delta = d + h``."""
    even, odd = fold_basis(M)
    pieces = [lambda i: (i + 1, M.d_at(i)), lambda i: (i - 1, M.h_at(i))]
    d0 = _assemble(M, even, odd, pieces)
    d1 = _assemble(M, odd, even, pieces)
    try:
        return MatrixFactorization(M.lg, d0, d1)
    except IdentityViolation as exc:  # pragma: no cover - a valid module always folds
        raise AssertionError(f"fold produced an invalid factorization: {exc}") from exc


def fold_graded_map(M: KoszulModule, maps: dict, shift: int) -> PolyMatrix:
    """Total matrix on ``even (+) odd`` of a degreewise map ``M^i -> M^(i+shift)``."""
    even, odd = fold_basis(M)
    basis = even + odd
    return _assemble(M, basis, basis, [lambda i: (i + shift, maps.get(i))])


def _total(E: MatrixFactorization) -> PolyMatrix:
    ctx = E.ctx
    return PolyMatrix.block(ctx, [[None, E.d1], [E.d0, None]], [E.rank0, E.rank1], [E.rank0, E.rank1])


def _split_odd(E: MatrixFactorization, T: PolyMatrix) -> GradedHom:
    r0, r1 = E.rank0, E.rank1
    c0 = T.submatrix(r0, r0 + r1, 0, r0)
    c1 = T.submatrix(0, r0, r0, r0 + r1)
    return GradedHom(E, E, 1, c0, c1)


def _box_labels(M, N):
    """Labels ``(a, i, b, j)`` for the even and odd bases of ``fold M (x) fold N``."""
    eM, oM = fold_basis(M)
    eN, oN = fold_basis(N)
    pieces = {0: (eM, eN), 1: (oM, oN)}
    ev, od = [], []
    E = type("R", (), {"rank0": len(eM), "rank1": len(oM)})
    F = type("R", (), {"rank0": len(eN), "rank1": len(oN)})
    b_even, b_odd = box_basis(E, F)
    for src, dst in ((b_even, ev), (b_odd, od)):
        for (pa, ia), (pb, ib) in src:
            a, i = pieces[pa][0][ia]
            b, j = pieces[pb][1][ib]
            dst.append((a, i, b, j))
    return ev, od


def _convolve_labels(M, N):
    C = convolve_ext(M, N)
    per_degree = {}
    for n in C.degrees():
        labs = []
        for a in M.degrees():
            b = n - a
            if N.lo <= b <= N.hi:
                labs.extend((a, i, b, j) for i in range(M.rank(a)) for j in range(N.rank(b)))
        per_degree[n] = labs
    ev = [lab for n in C.degrees() if n % 2 == 0 for lab in per_degree[n]]
    od = [lab for n in C.degrees() if n % 2 == 1 for lab in per_degree[n]]
    return C, ev, od


def _sorted_perm(labels):
    return sorted(range(len(labels)), key=lambda k: labels[k])


@dataclass
class MonoidalityReport:
    equal: bool
    folded: MatrixFactorization
    boxed: MatrixFactorization
    first_difference: tuple | None = None


def fold_monoidality_report(M: KoszulModule, N: KoszulModule) -> MonoidalityReport:
    C, ev_l, od_l = _convolve_labels(M, N)
    L = fold(C)
    R = box_product(fold(M), fold(N))
    ev_r, od_r = _box_labels(M, N)
    pe_l, po_l = _sorted_perm(ev_l), _sorted_perm(od_l)
    pe_r, po_r = _sorted_perm(ev_r), _sorted_perm(od_r)
    if [ev_l[k] for k in pe_l] != [ev_r[k] for k in pe_r] or [od_l[k] for k in po_l] != [od_r[k] for k in po_r]:
        return MonoidalityReport(False, L, R, None)
    L0, L1 = L.d0.permute(po_l, pe_l), L.d1.permute(pe_l, po_l)
    R0, R1 = R.d0.permute(po_r, pe_r).embed(L.ctx), R.d1.permute(pe_r, po_r).embed(L.ctx)
    diff = L0.first_difference(R0)
    if diff is None:
        diff = L1.first_difference(R1)
    return MonoidalityReport(diff is None, L, R, diff)


def fold_monoidality_check(M: KoszulModule, N: KoszulModule) -> bool:
    """Exact comparison of ``fold(M conv N)`` with ``fold M (x) fold N`` after sorting
    both bases by ``(degree in M, degree in N)``."""
    return fold_monoidality_report(M, N).equal


@dataclass
class ContractionWitness:
    homotopy: GradedHom
    nilpotence: int
    u: PolyMatrix


def check_contraction(M: KoszulModule, k: dict):
    ctx = M.ctx
    for i in M.degrees():
        ki = k.get(i, PolyMatrix(ctx, M.rank(i - 1), M.rank(i)))
        ki1 = k.get(i + 1, PolyMatrix(ctx, M.rank(i), M.rank(i + 1)))
        if ki.shape != (M.rank(i - 1), M.rank(i)) or ki1.shape != (M.rank(i), M.rank(i + 1)):
            raise ContractionInvalid(f"contraction has the wrong shape at degree {i}")
        lhs = M.d_at(i - 1) @ ki + ki1 @ M.d_at(i)
        if lhs != PolyMatrix.identity(ctx, M.rank(i)):
            raise ContractionInvalid(f"dk + kd is not the identity in degree {i}")


def contraction_witness(M: KoszulModule, k: dict) -> ContractionWitness:
    """Null-homotopy of the identity of ``fold(M)`` from a contraction ``k`` of ``(E, d)``.

    With ``u = hk + kh`` (degree -2, nilpotent), ``H = k (1 + u)^(-1)`` satisfies
    ``delta H + H delta = 1``.
    """
    check_contraction(M, k)
    E = fold(M)
    ctx = M.ctx
    n = E.rank0 + E.rank1
    K = fold_graded_map(M, k, -1)
    Hh = fold_graded_map(M, {i: M.h_at(i) for i in M.degrees()}, -1)
    u = Hh @ K + K @ Hh
    ident = PolyMatrix.identity(ctx, n)
    series, power, nil = ident, ident, 0
    while True:
        power = power @ u
        nil += 1
        if power.is_zero():
            break
        series = series + (power if nil % 2 == 0 else -power)
    H = K @ series
    delta = _total(E)
    assert delta @ H + H @ delta == ident, "contraction certificate failed"
    hom = _split_odd(E, H)
    assert hom_diff(hom) == identity_hom(E)
    return ContractionWitness(hom, nil, u)


# ---------------------------------------------------------------------------
# stabilization over the hypersurface ring

def _prune(cols, ctx, rank, f):
    """Drop columns lying in the span of the others together with ``f``."""
    cols = [c for c in cols if any(not (e.is_zero()) for e in c)]
    fI = [[f if r == s else ctx.zero() for r in range(rank)] for s in range(rank)]
    k = len(cols) - 1
    while k >= 0:
        others = cols[:k] + cols[k + 1:] + fI
        A = PolyMatrix(ctx, rank, len(others), [[c[r] for c in others] for r in range(rank)])
        if solve_linear(A, cols[k]) is not None:
            cols.pop(k)
        k -= 1
    return cols


def _from_cols(ctx, rank, cols):
    return PolyMatrix(ctx, rank, len(cols), [[c[r] for c in cols] for r in range(rank)])


def resolution_step(A: PolyMatrix, f):
    """Minimal generators of ``ker(A)`` over ``B/(f)``, as a matrix over ``B``."""
    ctx = A.ctx
    r = A.rows
    aug = PolyMatrix.block(ctx, [[A, PolyMatrix.identity(ctx, r, f)]], [r], [A.cols, r])
    S = syzygies(aug)
    cols = [[S.entries[i][j] for i in range(A.cols)] for j in range(S.cols)]
    cols = _prune(cols, ctx, A.cols, f)
    return _from_cols(ctx, A.cols, cols)


def stabilize(presentation: PolyMatrix, lg: LGPair, cap: int | None = None) -> MatrixFactorization:
    """Matrix factorization from the 2-periodic tail of a free resolution over ``B/(f)``.

    ``presentation`` has one row per generator; the module is its cokernel over
    ``B/(f)``. The first square differential ``A`` for which ``A X = f`` has a
    solution with ``X A = f`` is returned as ``(A | X)``, so ``coker(d0)`` is
    the corresponding syzygy module.
    """
    ctx, f = lg.ctx, lg.f
    if f.is_zero():
        raise ValueError("stabilization needs a nonzero potential")
    if cap is None:
        cap = 2 * ctx.nvars + 4
    rank = presentation.rows
    cols = [[presentation.entries[i][j] for i in range(rank)] for j in range(presentation.cols)]
    A = _from_cols(ctx, rank, _prune(cols, ctx, rank, f))
    for _ in range(cap):
        if A.cols == 0:
            z = PolyMatrix(ctx, 0, 0)
            return MatrixFactorization(lg, z, z)
        if A.rows == A.cols:
            X = []
            for j in range(A.rows):
                col = [f if i == j else ctx.zero() for i in range(A.rows)]
                x = solve_linear(A, col)
                if x is None:
                    break
                X.append(x)
            else:
                Xm = _from_cols(ctx, A.rows, X)
                if Xm @ A == PolyMatrix.identity(ctx, A.rows, f):
                    return MatrixFactorization(lg, A, Xm)
        A = resolution_step(A, f)
    raise PeriodicityNotReached(f"resolution not 2-periodic within {cap} steps")


@dataclass
class EquivalenceCertificate:
    dims_match: bool
    dims: tuple
    modular: bool | None
    witness: tuple | None


def certify_equivalence(X: MatrixFactorization, Y: MatrixFactorization, prime: int = 101) -> EquivalenceCertificate:
    """Necessary dims test over the given field plus, for integral input, an
    exhaustive closed-inverse search after reduction mod ``prime``."""
    dims = (hom_cohomology_dims(X, X), hom_cohomology_dims(Y, Y),
            hom_cohomology_dims(X, Y), hom_cohomology_dims(Y, X))
    match = len(set(dims)) == 1
    modular = witness = None
    if match:
        from .poly import Field
        field = Field(prime)
        try:
            Xp, Yp = change_field(X, field), change_field(Y, field)
        except (ZeroDivisionError, ValueError):
            Xp = Yp = None
        if Xp is not None:
            witness = find_homotopy_equivalence(Xp, Yp)
            modular = witness is not None
    return EquivalenceCertificate(match, dims, modular, witness)
