"""Strict dg-modules over the Koszul algebra K(B, f).

A module is a bounded cochain complex of free modules ``(E, d)`` with an
operator ``h`` of degree -1 satisfying ``h h = 0`` and ``d h + h d = f``.
Degrees are cohomological. Point-case modules (no variables, ``f = 0``) also
feed the twisted functor into graded modules over ``A[u]`` with ``deg u = 2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .errors import ContextMismatch, IdentityViolation, WindowTooSmall
from .mf import LGPair
from .poly import Poly, PolyMatrix, QQ, RingCtx


class KoszulModule:
    """``lo`` is the lowest degree; ``ranks[k]`` is the rank in degree ``lo + k``.

    ``d[k]`` maps degree ``lo+k`` to ``lo+k+1``; ``h[k]`` maps degree ``lo+k+1``
    to ``lo+k``.
    """

    __slots__ = ("lg", "lo", "ranks", "d", "h")

    def __init__(self, lg: LGPair, lo: int, ranks, d, h, check=True):
        ranks = tuple(int(r) for r in ranks)
        if not ranks:
            raise ValueError("a module needs at least one degree")
        if len(d) != len(ranks) - 1 or len(h) != len(ranks) - 1:
            raise ContextMismatch("need one d and one h matrix per consecutive pair of degrees")
        for k in range(len(ranks) - 1):
            if d[k].shape != (ranks[k + 1], ranks[k]):
                raise ContextMismatch(f"d from degree {lo + k} has shape {d[k].shape}")
            if h[k].shape != (ranks[k], ranks[k + 1]):
                raise ContextMismatch(f"h from degree {lo + k + 1} has shape {h[k].shape}")
            if d[k].ctx != lg.ctx or h[k].ctx != lg.ctx:
                raise ContextMismatch("matrix over a different ring")
        self.lg = lg
        self.lo = lo
        self.ranks = ranks
        self.d = tuple(d)
        self.h = tuple(h)
        if check:
            self.validate()

    @property
    def ctx(self):
        return self.lg.ctx

    @property
    def hi(self):
        return self.lo + len(self.ranks) - 1

    @property
    def width(self):
        return len(self.ranks)

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def rank(self, i):
        return self.ranks[i - self.lo] if self.lo <= i <= self.hi else 0

    def d_at(self, i) -> PolyMatrix:
        """``d: E^i -> E^(i+1)`` (a zero matrix outside the window)."""
        if self.lo <= i < self.hi:
            return self.d[i - self.lo]
        return PolyMatrix(self.ctx, self.rank(i + 1), self.rank(i))

    def h_at(self, i) -> PolyMatrix:
        """``h: E^i -> E^(i-1)``."""
        if self.lo < i <= self.hi:
            return self.h[i - self.lo - 1]
        return PolyMatrix(self.ctx, self.rank(i - 1), self.rank(i))

    def validate(self):
        f = self.lg.f
        for i in self.degrees():
            r = self.rank(i)
            dd = self.d_at(i + 1) @ self.d_at(i)
            diff = dd.first_difference(PolyMatrix(self.ctx, *dd.shape))
            if diff is not None:
                raise IdentityViolation("d*d = 0", diff, degree=i)
            hh = self.h_at(i - 1) @ self.h_at(i)
            diff = hh.first_difference(PolyMatrix(self.ctx, *hh.shape))
            if diff is not None:
                raise IdentityViolation("h*h = 0", diff, degree=i)
            comm = self.d_at(i - 1) @ self.h_at(i) + self.h_at(i + 1) @ self.d_at(i)
            diff = comm.first_difference(PolyMatrix.identity(self.ctx, r, f) if r else comm)
            if diff is not None:
                raise IdentityViolation("d*h + h*d = f", diff, degree=i)
        return self

    def __eq__(self, other):
        if not isinstance(other, KoszulModule):
            return NotImplemented
        return (self.lg, self.lo, self.ranks, self.d, self.h) == (other.lg, other.lo, other.ranks, other.d, other.h)

    def __hash__(self):
        return hash((self.lg, self.lo, self.ranks, self.d, self.h))

    def __repr__(self):
        return (f"KoszulModule(lo={self.lo}, ranks={self.ranks}, f={self.lg.f}, "
                f"d={[m.to_strings() for m in self.d]}, h={[m.to_strings() for m in self.h]})")


def new_koszul(lg: LGPair, lo: int, ranks, d, h) -> KoszulModule:
    """Validated module; matrices may be PolyMatrix or nested lists of expressions."""
    ranks = list(ranks)
    conv = []
    for mats, shape in ((d, lambda k: (ranks[k + 1], ranks[k])), (h, lambda k: (ranks[k], ranks[k + 1]))):
        out = []
        for k, m in enumerate(mats):
            if not isinstance(m, PolyMatrix):
                rows, cols = shape(k)
                m = PolyMatrix.from_rows(lg.ctx, m, cols) if rows else PolyMatrix(lg.ctx, 0, cols)
            out.append(m)
        conv.append(out)
    return KoszulModule(lg, lo, ranks, conv[0], conv[1])


def point_ctx(field=QQ) -> RingCtx:
    return RingCtx(field, ())


def point_lg(field=QQ) -> LGPair:
    ctx = point_ctx(field)
    return LGPair(ctx, ctx.zero())


def trivial_module(field=QQ) -> KoszulModule:
    """The field in degree 0 with zero d and h, over ``(field, 0)``."""
    return KoszulModule(point_lg(field), 0, (1,), (), ())


def koszul_algebra(lg: LGPair) -> KoszulModule:
    """``K(B, f)``: ``B.eps -> B`` in degrees ``[-1, 0]`` with ``d = f`` and ``h = 1``."""
    ctx = lg.ctx
    return KoszulModule(lg, -1, (1, 1), (PolyMatrix(ctx, 1, 1, [[lg.f]]),),
                        (PolyMatrix.identity(ctx, 1),))


def residue_representative(lg: LGPair, var: str) -> KoszulModule:
    """``B --x--> B`` with ``h = f / x``; requires ``x`` to divide ``f``."""
    ctx = lg.ctx
    x = ctx.var(var)
    from .poly import solve_linear
    q = solve_linear(PolyMatrix(ctx, 1, 1, [[x]]), [lg.f])
    if q is None:
        raise ValueError(f"{var} does not divide the potential")
    return KoszulModule(lg, -1, (1, 1), (PolyMatrix(ctx, 1, 1, [[x]]),), (PolyMatrix(ctx, 1, 1, [[q[0]]]),))


def forget(M: KoszulModule) -> KoszulModule:
    """Restriction of scalars to ``B``: same complex, potential 0, ``h = 0``."""
    ctx = M.ctx
    lg0 = LGPair(ctx, ctx.zero())
    h0 = [PolyMatrix(ctx, *m.shape) for m in M.h]
    return KoszulModule(lg0, M.lo, M.ranks, M.d, h0, check=False)


def shift_koszul(M: KoszulModule, n: int = 1) -> KoszulModule:
    """``M[n]``: degree ``i`` holds ``M^(i+n)``; ``d`` and ``h`` pick up ``(-1)^n``."""
    s = -1 if n % 2 else 1
    return KoszulModule(M.lg, M.lo - n, M.ranks, [m.scale(s) for m in M.d], [m.scale(s) for m in M.h], check=False)


def pull_push(M: KoszulModule) -> KoszulModule:
    """``forget(M) (x)_B K(B, f)`` with ``h`` the epsilon-action on the right factor.

    Degree ``i`` is ``M^i (x) 1  (+)  M^(i+1) (x) eps`` in that order; the signs are
    ``d(x (x) eps) = dx (x) eps + (-1)^|x| f x (x) 1`` and ``h(x (x) 1) = (-1)^|x| x (x) eps``.
    """
    ctx, f = M.ctx, M.lg.f
    lo, hi = M.lo - 1, M.hi
    ranks = [M.rank(i) + M.rank(i + 1) for i in range(lo, hi + 1)]
    d, h = [], []
    for i in range(lo, hi):
        a, b = M.rank(i), M.rank(i + 1)
        c = M.rank(i + 2)
        sign = -1 if (i + 1) % 2 else 1
        fI = PolyMatrix.identity(ctx, b, f.scale(sign)) if b else None
        d.append(PolyMatrix.block(ctx, [[M.d_at(i), fI], [None, M.d_at(i + 1)]], [b, c], [a, b]))
        # h from degree i+1 to degree i: (M^(i+1) (x) 1) -> (M^(i+1) (x) eps)
        sign_h = -1 if (i + 1) % 2 else 1
        hb = PolyMatrix.identity(ctx, b).scale(sign_h) if b else None
        h.append(PolyMatrix.block(ctx, [[None, None], [hb, None]], [a, b], [b, c]))
    return KoszulModule(M.lg, lo, ranks, d, h)


def tensor_labels(M: KoszulModule, N: KoszulModule):
    """Per total degree, the ordered summand list ``[(a, b), ...]`` with ``a`` ascending."""
    out = {}
    for n in range(M.lo + N.lo, M.hi + N.hi + 1):
        out[n] = [(a, n - a) for a in M.degrees() if N.lo <= n - a <= N.hi]
    return out


def convolve_ext(M: KoszulModule, N: KoszulModule) -> KoszulModule:
    """Tensor product over the field with ``d = d (x) 1 + 1 (x) d`` and
    ``h = h (x) 1 + 1 (x) k`` (Koszul signs), over ``(B (x) C, f + g)``."""
    ctx = M.ctx.union(N.ctx)
    lg = LGPair(ctx, M.lg.f.embed(ctx) + N.lg.f.embed(ctx))
    labels = tensor_labels(M, N)
    lo, hi = M.lo + N.lo, M.hi + N.hi
    ranks = [sum(M.rank(a) * N.rank(b) for a, b in labels[n]) for n in range(lo, hi + 1)]
    emb = {}

    def E(mat):
        key = id(mat)
        if key not in emb:
            emb[key] = (mat, mat.embed(ctx))
        return emb[key][1]

    def I(n):
        return PolyMatrix.identity(ctx, n)

    d, h = [], []
    for n in range(lo, hi):
        src, dst = labels[n], labels[n + 1]
        blocks = [[None] * len(src) for _ in dst]
        for cj, (a, b) in enumerate(src):
            for ri, (a2, b2) in enumerate(dst):
                if (a2, b2) == (a + 1, b):
                    blocks[ri][cj] = E(M.d_at(a)).kron(I(N.rank(b)))
                elif (a2, b2) == (a, b + 1):
                    s = -1 if a % 2 else 1
                    blocks[ri][cj] = I(M.rank(a)).kron(E(N.d_at(b))).scale(s)
        d.append(PolyMatrix.block(ctx, blocks, [M.rank(x) * N.rank(y) for x, y in dst],
                                  [M.rank(x) * N.rank(y) for x, y in src]))
        # h from degree n+1 to n
        src, dst = labels[n + 1], labels[n]
        blocks = [[None] * len(src) for _ in dst]
        for cj, (a, b) in enumerate(src):
            for ri, (a2, b2) in enumerate(dst):
                if (a2, b2) == (a - 1, b):
                    blocks[ri][cj] = E(M.h_at(a)).kron(I(N.rank(b)))
                elif (a2, b2) == (a, b - 1):
                    s = -1 if a % 2 else 1
                    blocks[ri][cj] = I(M.rank(a)).kron(E(N.h_at(b))).scale(s)
        h.append(PolyMatrix.block(ctx, blocks, [M.rank(x) * N.rank(y) for x, y in dst],
                                  [M.rank(x) * N.rank(y) for x, y in src]))
    return KoszulModule(lg, lo, ranks, d, h)


def _is_point(M: KoszulModule) -> bool:
    return M.ctx.nvars == 0 and M.lg.f.is_zero()


def act_point(F: KoszulModule, M: KoszulModule) -> KoszulModule:
    """Action of a module over ``(field, 0)`` on a module over ``(B, f)``."""
    if not _is_point(F):
        raise ContextMismatch("acting module must live over the point with zero potential")
    if F.ctx.field != M.ctx.field:
        raise ContextMismatch("field mismatch")
    out = convolve_ext(F, M)
    return KoszulModule(M.lg, out.lo, out.ranks, out.d, out.h, check=False)


def pull_push_comparison(M: KoszulModule):
    """Per-degree isomorphism ``Phi: pull_push(M) -> act_point(K(A,0), M)``.

    ``Phi(x (x) 1) = 1 (x) x`` and ``Phi(x (x) eps) = (-1)^|x| (eps (x) x + 1 (x) h x)``:
    the summand swap together with the unitriangular correction by ``h``.
    """
    ctx = M.ctx
    phi = {}
    for n in range(M.lo - 1, M.hi + 1):
        a, b = M.rank(n), M.rank(n + 1)
        s = -1 if (n + 1) % 2 else 1
        top = PolyMatrix.identity(ctx, b).scale(s) if b else None
        bottom_right = M.h_at(n + 1).scale(s) if (a and b) else None
        ident = PolyMatrix.identity(ctx, a) if a else None
        # rows: (eps (x) M^(n+1), 1 (x) M^n); cols: (M^n (x) 1, M^(n+1) (x) eps)
        phi[n] = PolyMatrix.block(ctx, [[None, top], [ident, bottom_right]], [b, a], [a, b])
    return phi


def intertwines(phi: dict, X: KoszulModule, Y: KoszulModule) -> bool:
    """True when ``phi: X -> Y`` commutes with both ``d`` and ``h`` in every degree."""
    for n in X.degrees():
        if n + 1 in phi:
            if Y.d_at(n) @ phi[n] != phi[n + 1] @ X.d_at(n):
                return False
        if n - 1 in phi:
            if Y.h_at(n) @ phi[n] != phi[n - 1] @ X.h_at(n):
                return False
    return True


def telescope(n: int, field=QQ) -> KoszulModule:
    """Free graded eps-module of rank ``n`` on generators in degrees ``0, -2, ..., -2n+2``.

    ``d: E^i -> E^(i+1)`` is the identity for even ``i`` and zero for odd ``i``;
    ``h: E^i -> E^(i-1)`` is the identity for even ``i`` and zero for odd ``i``.
    """
    if n < 1:
        raise ValueError("telescope index must be at least 1")
    lg = point_lg(field)
    ctx = lg.ctx
    lo = -2 * n + 1
    one, zero = PolyMatrix.identity(ctx, 1), PolyMatrix(ctx, 1, 1)
    d = [one if i % 2 == 0 else zero for i in range(lo, 0)]
    h = [one if i % 2 == 0 else zero for i in range(lo + 1, 1)]
    return KoszulModule(lg, lo, [1] * (2 * n), d, h)


def telescope_inclusion(n: int, field=QQ) -> dict:
    """Degreewise matrices of the inclusion ``T_n -> T_(n+1)``."""
    ctx = point_ctx(field)
    return {i: PolyMatrix.identity(ctx, 1) for i in range(-2 * n + 1, 1)}


def cone_koszul(phi: dict, M: KoszulModule, N: KoszulModule) -> KoszulModule:
    """Cone of a K-linear chain map ``phi: M -> N``; degree ``i`` is ``N^i (+) M^(i+1)``."""
    if M.lg != N.lg:
        raise ContextMismatch("cone between modules over different LG pairs")
    ctx = M.ctx
    lo = min(N.lo, M.lo - 1)
    hi = max(N.hi, M.hi - 1)

    def phi_at(i):
        m = phi.get(i)
        return m if m is not None else PolyMatrix(ctx, N.rank(i), M.rank(i))

    ranks = [N.rank(i) + M.rank(i + 1) for i in range(lo, hi + 1)]
    d, h = [], []
    for i in range(lo, hi):
        rows = [N.rank(i + 1), M.rank(i + 2)]
        cols = [N.rank(i), M.rank(i + 1)]
        d.append(PolyMatrix.block(ctx, [[N.d_at(i), phi_at(i + 1)], [None, -M.d_at(i + 1)]], rows, cols))
        rows_h = [N.rank(i), M.rank(i + 1)]
        cols_h = [N.rank(i + 1), M.rank(i + 2)]
        h.append(PolyMatrix.block(ctx, [[N.h_at(i + 1), None], [None, -M.h_at(i + 2)]], rows_h, cols_h))
    return KoszulModule(M.lg, lo, ranks, d, h)


def identity_map(M: KoszulModule) -> dict:
    return {i: PolyMatrix.identity(M.ctx, M.rank(i)) for i in M.degrees()}


def cone_identity_contraction(M: KoszulModule) -> dict:
    """Canonical contraction ``k`` of ``cone(id_M)``: ``N^i -> M^i``, i.e. degree ``i -> i-1``."""
    C = cone_koszul(identity_map(M), M, M)
    ctx = M.ctx
    k = {}
    for i in C.degrees():
        if C.rank(i - 1) == 0 and C.rank(i) == 0:
            continue
        rows = [M.rank(i - 1), M.rank(i)]
        cols = [M.rank(i), M.rank(i + 1)]
        ident = PolyMatrix.identity(ctx, M.rank(i)) if M.rank(i) else None
        k[i] = PolyMatrix.block(ctx, [[None, None], [ident, None]], rows, cols)
    return C, k


# ---------------------------------------------------------------------------
# Hom complexes of point-case modules (finite-dimensional linear algebra)

def _scalars(m: PolyMatrix):
    return [[e.constant_coeff() for e in row] for row in m.entries]


def point_hom_dims(P: KoszulModule, M: KoszulModule, degrees) -> dict:
    """Cohomology dimensions of the complex of K-linear maps ``P -> M``, point case.

    A degree-``j`` map ``phi`` satisfies ``phi h = (-1)^j h phi``; the differential
    is ``D phi = d phi - (-1)^j phi d``.
    """
    if not (_is_point(P) and _is_point(M)):
        raise ContextMismatch("point-case modules required")
    field = P.ctx.field
    p = field.p

    def space(j):
        """Coordinates: concatenation over i of maps P^i -> M^(i+j), row-major."""
        slots = []
        off = 0
        for i in P.degrees():
            r, c = M.rank(i + j), P.rank(i)
            slots.append((i, r, c, off))
            off += r * c
        return slots, off

    def constraint_rows(j):
        slots, n = space(j)
        index = {i: (r, c, off) for i, r, c, off in slots}
        sign = -1 if j % 2 else 1
        rows = []
        # (phi h - sign h phi) on P^i -> M^(i-1+j)
        for i in P.degrees():
            src_r = P.rank(i)
            tgt = M.rank(i - 1 + j)
            if not src_r or not tgt:
                continue
            hP = _scalars(P.h_at(i))   # P^i -> P^(i-1)
            hM = _scalars(M.h_at(i + j))  # M^(i+j) -> M^(i+j-1)
            for a in range(tgt):
                for b in range(src_r):
                    row = [0] * n
                    if i - 1 in index:
                        r, c, off = index[i - 1]
                        for k in range(c):
                            if hP[k][b]:
                                row[off + a * c + k] += hP[k][b]
                    r, c, off = index[i]
                    for k in range(r):
                        if hM[a][k]:
                            row[off + k * c + b] -= sign * hM[a][k]
                    rows.append([x % p if p else x for x in row])
        return rows, n

    def diff_images(j, basis):
        slots, n = space(j)
        slots1, n1 = space(j + 1)
        index1 = {i: (r, c, off) for i, r, c, off in slots1}
        sign = -1 if j % 2 else 1
        out = []
        for v in basis:
            w = [0] * n1
            for i, r, c, off in slots:
                if not r or not c:
                    continue
                phi = [v[off + a * c: off + (a + 1) * c] for a in range(r)]
                # d_M phi : P^i -> M^(i+j+1)
                dM = _scalars(M.d_at(i + j))
                r1, c1, off1 = index1[i]
                for a in range(r1):
                    for b in range(c1):
                        w[off1 + a * c1 + b] += sum(dM[a][k] * phi[k][b] for k in range(r))
                # - sign * phi d_P : P^(i-1) -> M^(i+j)
                if i - 1 in index1:
                    dP = _scalars(P.d_at(i - 1))
                    r1, c1, off1 = index1[i - 1]
                    for a in range(r1):
                        for b in range(c1):
                            w[off1 + a * c1 + b] -= sign * sum(phi[a][k] * dP[k][b] for k in range(c))
            out.append([x % p if p else x for x in w])
        return out, n1

    cache = {}

    def L(j):
        if j not in cache:
            rows, n = constraint_rows(j)
            cache[j] = (linalg.nullspace(rows, field, n) if rows else
                        [[1 if k == i else 0 for k in range(n)] for i in range(n)], n)
        return cache[j]

    def rank_D(j):
        basis, n = L(j)
        if not basis:
            return 0
        imgs, n1 = diff_images(j, basis)
        return linalg.rank(imgs, field, n1)

    out = {}
    for j in degrees:
        basis, _ = L(j)
        out[j] = len(basis) - rank_D(j) - rank_D(j - 1)
    return out


# ---------------------------------------------------------------------------
# graded modules over A[u]

@dataclass
class AuModule:
    """Free graded ``A[u]``-module on generators ``gens[j]`` (rank in degree ``j``)
    with differential given on generators and a finite window of levels.

    ``gen_diff[(j, idx)]`` maps to ``{(j', idx', upow): coeff}``: the image of the
    generator as a combination of ``generator * u^upow``. Level ``n`` has basis
    ``(j, idx, i)`` with ``j + 2 i = n``, ordered by ``i`` then ``idx``.
    """

    ctx: RingCtx
    gens: dict
    gen_diff: dict
    window: tuple
    safe: tuple
    notes: list = field(default_factory=list)

    def level(self, n):
        out = []
        for j in sorted(self.gens, reverse=True):
            if j <= n and (n - j) % 2 == 0:
                out.extend((j, idx, (n - j) // 2) for idx in range(self.gens[j]))
        return out

    def _matrix(self, src, dst, image):
        index = {lab: k for k, lab in enumerate(dst)}
        field_ = self.ctx.field
        cols = []
        for lab in src:
            col = [0] * len(dst)
            for lab2, c in image(lab).items():
                col[index[lab2]] += c
            cols.append([field_.coerce(x) for x in col])
        ctx = self.ctx
        return PolyMatrix(ctx, len(dst), len(src),
                          [[ctx.const(cols[j][i]) for j in range(len(src))] for i in range(len(dst))])

    def apply_diff(self, lab):
        j, idx, i = lab
        return {(j2, idx2, u + i): c for (j2, idx2, u), c in self.gen_diff[(j, idx)].items()}

    def differential(self, n) -> PolyMatrix:
        """Level ``n -> n+1``."""
        return self._matrix(self.level(n), self.level(n + 1), self.apply_diff)

    def u_map(self, n, power=1) -> PolyMatrix:
        """Multiplication by ``u^power`` from level ``n`` to ``n + 2 power``."""
        return self._matrix(self.level(n), self.level(n + 2 * power),
                            lambda lab: {(lab[0], lab[1], lab[2] + power): 1})

    def cohomology_dim(self, n) -> int:
        field_ = self.ctx.field
        dim = len(self.level(n))
        r_out = linalg.rank(_scalars(self.differential(n)), field_, dim)
        r_in = linalg.rank(_scalars(self.differential(n - 1)), field_, len(self.level(n - 1)))
        return dim - r_out - r_in

    def cohomology_dims(self) -> dict:
        lo, hi = self.safe
        return {n: self.cohomology_dim(n) for n in range(lo, hi + 1)}

    def check(self):
        """``D^2 = 0`` and ``u D = D u`` on every level of the window."""
        lo, hi = self.window
        for n in range(lo, hi - 1):
            if not (self.differential(n + 1) @ self.differential(n)).is_zero():
                return False
            if self.u_map(n + 1) @ self.differential(n) != self.differential(n + 2) @ self.u_map(n):
                return False
        return True


def _au_window(N: int):
    return (-2 * N - 1, 2 * N + 1), (-2 * N, 2 * N)


def _check_window(M: KoszulModule, N: int):
    if not _is_point(M):
        raise ContextMismatch("point-case module required (no variables, zero potential)")
    if N < 1 or N < M.width - 1 or M.lo < -2 * N or M.hi > 2 * N:
        raise WindowTooSmall(f"window {N} too small for a module in degrees [{M.lo}, {M.hi}]")


def _twist(M: KoszulModule, N: int) -> AuModule:
    gens = {j: M.rank(j) for j in M.degrees() if M.rank(j)}
    gen_diff = {}
    for j in M.degrees():
        d = _scalars(M.d_at(j))
        h = _scalars(M.h_at(j))
        for idx in range(M.rank(j)):
            img = {}
            for a in range(M.rank(j + 1)):
                if d[a][idx]:
                    img[(j + 1, a, 0)] = d[a][idx]
            for a in range(M.rank(j - 1)):
                if h[a][idx]:
                    img[(j - 1, a, 1)] = h[a][idx]
            gen_diff[(j, idx)] = img
    window, safe = _au_window(N)
    return AuModule(M.ctx, gens, gen_diff, window, safe)


def twisted_E(M: KoszulModule, N: int) -> AuModule:
    """``(E (x) A[u], d + eps)`` with levels ``[-2N-1, 2N+1]``; cohomology is exact on
    the safe window ``[-2N, 2N]``."""
    _check_window(M, N)
    return _twist(M, N)


def au_tensor(P: AuModule, Q: AuModule) -> AuModule:
    """Tensor product over ``A[u]`` of two free modules, read off their level matrices."""
    def gen_images(A):
        out = {}
        for j, r in A.gens.items():
            src = A.level(j)
            dst = A.level(j + 1)
            D = _scalars(A.differential(j))
            for idx in range(r):
                col = src.index((j, idx, 0))
                out[(j, idx)] = {dst[a]: D[a][col] for a in range(len(dst)) if D[a][col]}
        return out

    DP, DQ = gen_images(P), gen_images(Q)
    degs = sorted({a + b for a in P.gens for b in Q.gens})
    gens, offsets = {}, {}
    for n in degs:
        off = 0
        for a in sorted(P.gens):
            b = n - a
            if b in Q.gens:
                offsets[(a, b)] = off
                off += P.gens[a] * Q.gens[b]
        gens[n] = off

    def label(a, i, b, j):
        return a + b, offsets[(a, b)] + i * Q.gens[b] + j

    gen_diff = {}
    for (a, b), off in offsets.items():
        for i in range(P.gens[a]):
            for j in range(Q.gens[b]):
                img = {}
                for (a2, i2, u), c in DP[(a, i)].items():
                    n2, k2 = label(a2, i2, b, j)
                    img[(n2, k2, u)] = img.get((n2, k2, u), 0) + c
                s = -1 if a % 2 else 1
                for (b2, j2, u), c in DQ[(b, j)].items():
                    n2, k2 = label(a, i, b2, j2)
                    img[(n2, k2, u)] = img.get((n2, k2, u), 0) + s * c
                gen_diff[label(a, i, b, j)] = {k: v for k, v in img.items() if v}
    lo = min(P.window[0], Q.window[0])
    hi = max(P.window[1], Q.window[1])
    return AuModule(P.ctx, gens, gen_diff, (lo, hi), (lo + 1, hi - 1))


def rhom_trivial_dims(M: KoszulModule, N: int) -> dict:
    """Degree -> dimension of ``RHom_K(A, M)``, computed through ``twisted_E``."""
    return twisted_E(M, N).cohomology_dims()


@dataclass
class UConeReport:
    window: tuple
    cone_dims: dict
    pull_push_dims: dict
    passed: bool


def u_cone_dims(A: AuModule) -> dict:
    """Cohomology of the cone of ``u: A[-2] -> A``; degree ``n`` is ``A^n (+) A^(n-1)``."""
    field_ = A.ctx.field
    ctx = A.ctx

    def cone_diff(n):
        Dn = A.differential(n)
        u = A.u_map(n - 1)
        Dm = A.differential(n - 1)
        rows = [len(A.level(n + 1)), len(A.level(n))]
        cols = [len(A.level(n)), len(A.level(n - 1))]
        return PolyMatrix.block(ctx, [[Dn, u], [None, -Dm]], rows, cols)

    lo, hi = A.window
    out = {}
    for n in range(lo + 2, hi):
        dim = len(A.level(n)) + len(A.level(n - 1))
        r_out = linalg.rank(_scalars(cone_diff(n)), field_, dim)
        r_in = linalg.rank(_scalars(cone_diff(n - 1)), field_, len(A.level(n - 1)) + len(A.level(n - 2)))
        out[n] = dim - r_out - r_in
    return out


def u_cone_check(M: KoszulModule, N: int) -> UConeReport:
    """Compare the cone of ``u`` on ``twisted_E(M)`` with ``twisted_E(pull_push(M))[-1]``."""
    _check_window(M, N)
    cone = u_cone_dims(_twist(M, N))
    P = _twist(pull_push(M), N)
    lo, hi = -2 * N + 1, 2 * N
    pp = {n: P.cohomology_dim(n - 1) for n in range(lo, hi + 1)}
    cone = {n: cone[n] for n in range(lo, hi + 1)}
    return UConeReport((lo, hi), cone, pp, cone == pp)


def u_power_nullhomotopy(A: AuModule, n: int):
    """Solve ``D s + s D = u^n`` for an ``A[u]``-linear ``s`` of degree ``2n - 1``.

    Returns the images of the generators as dicts, or None if no homotopy exists.
    """
    field_ = A.ctx.field
    p = field_.p
    gens = [(j, idx) for j in sorted(A.gens) for idx in range(A.gens[j])]
    unknowns = []
    for g in gens:
        for lab in A.level(g[0] + 2 * n - 1):
            unknowns.append((g, lab))
    uindex = {key: k for k, key in enumerate(unknowns)}
    rows, rhs = [], []
    for g in gens:
        j, idx = g
        target = A.level(j + 2 * n)
        tindex = {lab: k for k, lab in enumerate(target)}
        eqs = [[0] * len(unknowns) for _ in target]
        # D(s(g)) = sum_lab c_lab D(lab)
        for lab in A.level(j + 2 * n - 1):
            col = uindex[(g, lab)]
            for lab2, c in A.apply_diff(lab).items():
                eqs[tindex[lab2]][col] += c
        # s(D g): D g = sum c g' u^a, s(g' u^a) = s(g') u^a
        for (j2, idx2, a), c in A.gen_diff[g].items():
            for lab in A.level(j2 + 2 * n - 1):
                col = uindex[((j2, idx2), lab)]
                shifted = (lab[0], lab[1], lab[2] + a)
                eqs[tindex[shifted]][col] += c
        b = [0] * len(target)
        b[tindex[(j, idx, n)]] = 1
        for e, bb in zip(eqs, b):
            rows.append([x % p if p else x for x in e])
            rhs.append(bb)
    if not unknowns:
        return None if any(rhs) else {}
    sol = linalg.solve(rows, rhs, field_, len(unknowns))
    if sol is None:
        return None
    out = {}
    for (g, lab), v in zip(unknowns, sol):
        if v:
            out.setdefault(g, {})[lab] = v
    return out
