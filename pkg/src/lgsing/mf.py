"""Matrix factorizations: objects, Z/2-graded Hom complexes, cohomology,
null-homotopy certificates, box products and base change."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ContextMismatch, IdentityViolation, NotClosed, ResourceCapExceeded
from .poly import INFINITE, ImageSolver, Poly, PolyMatrix, RingCtx, groebner_module
from .poly.groebner import column_to_vec


@dataclass(frozen=True)
class LGPair:
    """A polynomial ring with a chosen potential ``f``."""

    ctx: RingCtx
    f: Poly

    def __post_init__(self):
        if self.f.ctx != self.ctx:
            raise ContextMismatch("potential does not belong to the ring")

    @classmethod
    def make(cls, ctx: RingCtx, f) -> "LGPair":
        if isinstance(f, str):
            f = ctx.parse(f)
        elif not isinstance(f, Poly):
            f = ctx.const(f)
        return cls(ctx, f)

    def __str__(self):
        return f"({self.ctx}, {self.f})"


def _f_identity(lg: LGPair, n: int) -> PolyMatrix:
    return PolyMatrix.identity(lg.ctx, n, lg.f) if n else PolyMatrix(lg.ctx, 0, 0)


class MatrixFactorization:
    """``d0: E0 -> E1`` (``rank1 x rank0``) and ``d1: E1 -> E0`` with
    ``d1 d0 = f Id`` and ``d0 d1 = f Id``; validated on construction."""

    __slots__ = ("lg", "d0", "d1")

    def __init__(self, lg: LGPair, d0: PolyMatrix, d1: PolyMatrix, check: bool = True):
        if d0.ctx != lg.ctx or d1.ctx != lg.ctx:
            raise ContextMismatch("differentials are not over the LG pair's ring")
        if d0.rows != d1.cols or d0.cols != d1.rows:
            raise ContextMismatch(f"incompatible shapes d0 {d0.shape}, d1 {d1.shape}")
        self.lg = lg
        self.d0 = d0
        self.d1 = d1
        if check:
            self.validate()

    @property
    def ctx(self):
        return self.lg.ctx

    @property
    def rank0(self):
        return self.d0.cols

    @property
    def rank1(self):
        return self.d0.rows

    def validate(self):
        for name, prod, n in (("d1*d0 = f*Id", self.d1 @ self.d0, self.rank0),
                              ("d0*d1 = f*Id", self.d0 @ self.d1, self.rank1)):
            diff = prod.first_difference(_f_identity(self.lg, n))
            if diff is not None:
                raise IdentityViolation(name, diff)
        return self

    def __eq__(self, other):
        if not isinstance(other, MatrixFactorization):
            return NotImplemented
        return self.lg == other.lg and self.d0 == other.d0 and self.d1 == other.d1

    def __hash__(self):
        return hash((self.lg, self.d0, self.d1))

    def __repr__(self):
        return f"MF(ranks=({self.rank0},{self.rank1}), d0={self.d0.to_strings()}, d1={self.d1.to_strings()})"


def new_mf(lg: LGPair, d0, d1) -> MatrixFactorization:
    """Validated factorization; ``d0``/``d1`` may be PolyMatrix or nested lists."""
    if not isinstance(d0, PolyMatrix):
        d0 = PolyMatrix.from_rows(lg.ctx, d0)
    if not isinstance(d1, PolyMatrix):
        d1 = PolyMatrix.from_rows(lg.ctx, d1)
    return MatrixFactorization(lg, d0, d1)


def rank_one(lg: LGPair, a, b) -> MatrixFactorization:
    """The rank-(1,1) factorization ``(a | b)`` with ``d0 = a``, ``d1 = b``."""
    return new_mf(lg, [[a]], [[b]])


def unit_mf(ctx: RingCtx) -> MatrixFactorization:
    lg = LGPair(ctx, ctx.zero())
    return MatrixFactorization(lg, PolyMatrix(ctx, 0, 1), PolyMatrix(ctx, 1, 0))


def shift_mf(E: MatrixFactorization) -> MatrixFactorization:
    """Swap the graded pieces and negate both differentials."""
    return MatrixFactorization(E.lg, -E.d1, -E.d0, check=False)


def direct_sum(E: MatrixFactorization, F: MatrixFactorization) -> MatrixFactorization:
    if E.lg != F.lg:
        raise ContextMismatch("direct sum over different LG pairs")
    ctx = E.ctx
    d0 = PolyMatrix.block(ctx, [[E.d0, None], [None, F.d0]], [E.rank1, F.rank1], [E.rank0, F.rank0])
    d1 = PolyMatrix.block(ctx, [[E.d1, None], [None, F.d1]], [E.rank0, F.rank0], [E.rank1, F.rank1])
    return MatrixFactorization(E.lg, d0, d1, check=False)


# ---------------------------------------------------------------------------
# Hom complexes

@dataclass(frozen=True)
class StableDims:
    even: object
    odd: object

    @property
    def total(self):
        return self.even + self.odd

    def convolve(self, other: "StableDims") -> "StableDims":
        """Z/2-graded tensor product of dimension vectors (Kuenneth)."""
        return StableDims(self.even * other.even + self.odd * other.odd,
                          self.even * other.odd + self.odd * other.even)

    def as_dict(self):
        def enc(v):
            return "INFINITE" if v is INFINITE else v
        return {"even": enc(self.even), "odd": enc(self.odd)}


def _hom_shapes(E, F, parity):
    if parity == 0:
        return (F.rank0, E.rank0), (F.rank1, E.rank1)
    return (F.rank1, E.rank0), (F.rank0, E.rank1)


@dataclass(frozen=True)
class GradedHom:
    """Homogeneous element of ``Hom(E, F)``.

    Even: ``c0 = t0: E0 -> F0``, ``c1 = t1: E1 -> F1``.
    Odd: ``c0 = s0: E0 -> F1``, ``c1 = s1: E1 -> F0``.
    """

    source: MatrixFactorization
    target: MatrixFactorization
    parity: int
    c0: PolyMatrix
    c1: PolyMatrix

    def __post_init__(self):
        if self.source.ctx != self.target.ctx:
            raise ContextMismatch("source and target over different rings")
        s0, s1 = _hom_shapes(self.source, self.target, self.parity)
        if self.c0.shape != s0 or self.c1.shape != s1:
            raise ContextMismatch(f"component shapes {self.c0.shape}, {self.c1.shape}; expected {s0}, {s1}")

    def _same(self, other):
        if (other.source, other.target, other.parity) != (self.source, self.target, self.parity):
            raise ContextMismatch("homs of different type")

    def __add__(self, other):
        self._same(other)
        return GradedHom(self.source, self.target, self.parity, self.c0 + other.c0, self.c1 + other.c1)

    def __sub__(self, other):
        self._same(other)
        return GradedHom(self.source, self.target, self.parity, self.c0 - other.c0, self.c1 - other.c1)

    def __neg__(self):
        return GradedHom(self.source, self.target, self.parity, -self.c0, -self.c1)

    def scale(self, s):
        return GradedHom(self.source, self.target, self.parity, self.c0.scale(s), self.c1.scale(s))

    def is_zero(self):
        return self.c0.is_zero() and self.c1.is_zero()

    def vector(self):
        return [a for r in self.c0.entries for a in r] + [a for r in self.c1.entries for a in r]


def zero_hom(E, F, parity) -> GradedHom:
    s0, s1 = _hom_shapes(E, F, parity)
    return GradedHom(E, F, parity, PolyMatrix(E.ctx, *s0), PolyMatrix(E.ctx, *s1))


def hom_from_vector(E, F, parity, vec) -> GradedHom:
    (a, b), (c, d) = _hom_shapes(E, F, parity)
    vec = list(vec)
    m0 = [vec[i * b:(i + 1) * b] for i in range(a)]
    off = a * b
    m1 = [vec[off + i * d: off + (i + 1) * d] for i in range(c)]
    return GradedHom(E, F, parity, PolyMatrix(E.ctx, a, b, m0), PolyMatrix(E.ctx, c, d, m1))


def identity_hom(E) -> GradedHom:
    return GradedHom(E, E, 0, PolyMatrix.identity(E.ctx, E.rank0), PolyMatrix.identity(E.ctx, E.rank1))


def delta_hom(E) -> GradedHom:
    """The differential of ``E`` as an odd endomorphism."""
    return GradedHom(E, E, 1, E.d0, E.d1)


def hom_diff(t: GradedHom) -> GradedHom:
    """``d(t) = t.delta - (-1)^deg(t) delta.t``."""
    E, F = t.source, t.target
    if t.parity == 0:
        s0 = t.c1 @ E.d0 - F.d0 @ t.c0
        s1 = t.c0 @ E.d1 - F.d1 @ t.c1
        return GradedHom(E, F, 1, s0, s1)
    t0 = t.c1 @ E.d0 + F.d1 @ t.c0
    t1 = t.c0 @ E.d1 + F.d0 @ t.c1
    return GradedHom(E, F, 0, t0, t1)


def compose(b: GradedHom, a: GradedHom) -> GradedHom:
    """``b o a`` for ``a: E -> F`` and ``b: F -> G``."""
    if a.target != b.source:
        raise ContextMismatch("homs are not composable")
    if a.parity == 0:
        c0, c1 = b.c0 @ a.c0, b.c1 @ a.c1
    else:
        # an odd ``a`` lands E0 in F1 and E1 in F0
        c0, c1 = b.c1 @ a.c0, b.c0 @ a.c1
    return GradedHom(a.source, b.target, (a.parity + b.parity) % 2, c0, c1)


def hom_basis(E, F, parity):
    """Matrix-unit basis of ``Hom(E, F)`` in the given parity, as GradedHoms."""
    (a, b), (c, d) = _hom_shapes(E, F, parity)
    n = a * b + c * d
    one, zero = E.ctx.one(), E.ctx.zero()
    return [hom_from_vector(E, F, parity, [one if k == i else zero for k in range(n)]) for i in range(n)]


def hom_complex(E: MatrixFactorization, F: MatrixFactorization):
    """The two differentials ``(D_even: even -> odd, D_odd: odd -> even)`` as matrices
    acting on coordinate vectors."""
    if E.lg != F.lg:
        raise ContextMismatch("Hom complex between different LG pairs")
    mats = []
    for parity in (0, 1):
        basis = hom_basis(E, F, parity)
        cols = [hom_diff(t).vector() for t in basis]
        (a, b), (c, d) = _hom_shapes(E, F, 1 - parity)
        rows = a * b + c * d
        mats.append(PolyMatrix(E.ctx, rows, len(cols), [[cols[j][i] for j in range(len(cols))] for i in range(rows)]))
    return mats[0], mats[1]


class HomCohomology:
    """One parity of cohomology of ``Hom(E, F)``: generators of the cocycles, a
    Groebner basis of their relations modulo coboundaries, and a field basis."""

    def __init__(self, E, F, parity, complex_=None):
        self.E, self.F, self.parity = E, F, parity
        D_even, D_odd = complex_ or hom_complex(E, F)
        D_out, D_in = (D_even, D_odd) if parity == 0 else (D_odd, D_even)
        ctx = E.ctx
        n = D_out.cols
        self.n = n
        if D_out.rows == 0 or D_out.is_zero():
            Z = PolyMatrix.identity(ctx, n)
        else:
            Z = ImageSolver(D_out).syzygies()
        self.Z = Z
        s = Z.cols
        self.s = s
        big = PolyMatrix.block(ctx, [[Z, D_in]], [n], [s, D_in.cols])
        self._solver = ImageSolver(big) if big.cols else None
        if self._solver is not None and s:
            S = self._solver.syzygies()
            rel_cols = [S.col(j)[:s] for j in range(S.cols)]
        else:
            rel_cols = []
        self.relations = groebner_module(rel_cols, ctx, rank=s)
        self._std = self.relations.standard_monomials()

    @property
    def dim(self):
        return INFINITE if self._std is INFINITE else len(self._std)

    def basis(self):
        """Cocycles whose classes form a field basis of the cohomology."""
        if self._std is INFINITE:
            raise ValueError("cohomology is not finite-dimensional")
        ctx = self.E.ctx
        out = []
        for pos, e in self._std:
            mono = Poly(ctx, {e: ctx.field.coerce(1)})
            vec = [mono * q for q in self.Z.col(pos)]
            out.append(hom_from_vector(self.E, self.F, self.parity, vec))
        return out

    def coordinates(self, t: GradedHom):
        """Coordinates of the class of the cocycle ``t`` in the basis above."""
        if self._std is INFINITE:
            raise ValueError("cohomology is not finite-dimensional")
        if t.parity != self.parity:
            raise ContextMismatch("parity mismatch")
        vec = t.vector()
        if all(q.is_zero() for q in vec):
            return [0] * len(self._std)
        if self._solver is None:
            raise NotClosed("not a cocycle")
        a = self._solver.solve(vec)
        if a is None:
            raise NotClosed("not a cocycle")
        nf = self.relations.normal_form_vec(column_to_vec(a[: self.s]))
        return [nf.get(k, 0) for k in self._std]


def hom_cohomology_dims(E: MatrixFactorization, F: MatrixFactorization) -> StableDims:
    cx = hom_complex(E, F)
    return StableDims(HomCohomology(E, F, 0, cx).dim, HomCohomology(E, F, 1, cx).dim)


def is_closed(t: GradedHom) -> bool:
    return hom_diff(t).is_zero()


def is_null_homotopic(t: GradedHom):
    """``(True, s)`` with ``hom_diff(s) == t`` or ``(False, None)``."""
    if not is_closed(t):
        raise NotClosed("morphism is not closed")
    E, F = t.source, t.target
    D_even, D_odd = hom_complex(E, F)
    D = D_odd if t.parity == 0 else D_even
    if D.cols == 0:
        return (t.is_zero(), zero_hom(E, F, 1 - t.parity) if t.is_zero() else None)
    x = ImageSolver(D).solve(t.vector())
    if x is None:
        return (False, None)
    s = hom_from_vector(E, F, 1 - t.parity, x)
    assert hom_diff(s) == t, "null-homotopy certificate failed"
    return (True, s)


def cone_mf(t: GradedHom) -> MatrixFactorization:
    """Cone of a closed even morphism ``t: E -> F``: ``F (+) E[1]``."""
    if t.parity != 0:
        raise ValueError("cone requires an even morphism")
    if not is_closed(t):
        raise NotClosed("cone of a morphism that is not closed")
    E, F = t.source, t.target
    ctx = E.ctx
    d0 = PolyMatrix.block(ctx, [[F.d0, t.c1], [None, -E.d1]], [F.rank1, E.rank0], [F.rank0, E.rank1])
    d1 = PolyMatrix.block(ctx, [[F.d1, t.c0], [None, -E.d0]], [F.rank0, E.rank1], [F.rank1, E.rank0])
    return MatrixFactorization(F.lg, d0, d1)


def box_basis(E, F):
    """Labels ``((parity_E, i), (parity_F, j))`` of the even and odd bases of E boxtimes F."""
    even = [((0, i), (0, j)) for i in range(E.rank0) for j in range(F.rank0)]
    even += [((1, i), (1, j)) for i in range(E.rank1) for j in range(F.rank1)]
    odd = [((1, i), (0, j)) for i in range(E.rank1) for j in range(F.rank0)]
    odd += [((0, i), (1, j)) for i in range(E.rank0) for j in range(F.rank1)]
    return even, odd


def box_product(E: MatrixFactorization, F: MatrixFactorization) -> MatrixFactorization:
    """External tensor product over ``(B (x) C, f + g)`` with the Koszul sign rule."""
    ctx = E.ctx.union(F.ctx)
    lg = LGPair(ctx, E.lg.f.embed(ctx) + F.lg.f.embed(ctx))
    e0, e1 = E.d0.embed(ctx), E.d1.embed(ctx)
    f0, f1 = F.d0.embed(ctx), F.d1.embed(ctx)
    IE0, IE1 = PolyMatrix.identity(ctx, E.rank0), PolyMatrix.identity(ctx, E.rank1)
    IF0, IF1 = PolyMatrix.identity(ctx, F.rank0), PolyMatrix.identity(ctx, F.rank1)
    rows_odd = [E.rank1 * F.rank0, E.rank0 * F.rank1]
    cols_even = [E.rank0 * F.rank0, E.rank1 * F.rank1]
    d0 = PolyMatrix.block(ctx, [[e0.kron(IF0), -IE1.kron(f1)],
                                [IE0.kron(f0), e1.kron(IF1)]], rows_odd, cols_even)
    d1 = PolyMatrix.block(ctx, [[e1.kron(IF0), IE0.kron(f1)],
                                [-IE1.kron(f0), e0.kron(IF1)]], cols_even, rows_odd)
    return MatrixFactorization(lg, d0, d1)


def base_change_mf(E: MatrixFactorization, images: dict, target: RingCtx) -> MatrixFactorization:
    """Entrywise substitution along the ring map ``var -> images[var]``."""
    f = E.lg.f.substitute(images, target)
    lg = LGPair(target, f)
    return MatrixFactorization(lg, E.d0.substitute(images, target), E.d1.substitute(images, target))


def change_field(E: MatrixFactorization, field) -> MatrixFactorization:
    """Reduce an integral factorization to another coefficient field."""
    ctx = E.ctx.with_field(field)
    conv = lambda q: Poly.from_terms(ctx, q.terms.items())
    lg = LGPair(ctx, conv(E.lg.f))
    return MatrixFactorization(lg, E.d0.map(conv, ctx), E.d1.map(conv, ctx))


# ---------------------------------------------------------------------------
# homotopy equivalences over finite fields

def find_homotopy_equivalence(X: MatrixFactorization, Y: MatrixFactorization, max_candidates: int = 200_000):
    """Exhaustive search for closed ``phi: X -> Y``, ``psi: Y -> X`` inverse up to homotopy.

    Runs over ``phi`` in the finite even cohomology ``H0(X, Y)`` and solves the
    linear condition ``psi o phi ~ id`` for ``psi``. Prime fields only. Returns
    ``(phi, psi)`` or None when no pair exists.
    """
    field = X.ctx.field
    if not field.p:
        raise ValueError("exhaustive search needs a finite field")
    from . import linalg

    HXY = HomCohomology(X, Y, 0)
    HYX = HomCohomology(Y, X, 0)
    HXX = HomCohomology(X, X, 0)
    HYY = HomCohomology(Y, Y, 0)
    for H in (HXY, HYX, HXX, HYY):
        if H.dim is INFINITE:
            raise ValueError("stable Hom spaces are not finite")
    m1, m2 = HXY.dim, HYX.dim
    if field.p ** m1 > max_candidates:
        raise ResourceCapExceeded(f"search space {field.p}^{m1} exceeds {max_candidates}")
    phis, psis = HXY.basis(), HYX.basis()
    idX = HXX.coordinates(identity_hom(X))
    idY = HYY.coordinates(identity_hom(Y))
    # C[i][j] = coords of psi_j o phi_i in H(X,X); K[i][j] = coords of phi_i o psi_j in H(Y,Y)
    C = [[HXX.coordinates(compose(psis[j], phis[i])) for j in range(m2)] for i in range(m1)]
    K = [[HYY.coordinates(compose(phis[i], psis[j])) for j in range(m2)] for i in range(m1)]
    p = field.p
    for a in itertools.product(range(p), repeat=m1):
        if not any(a):
            continue
        rows = []
        rhs = []
        for k in range(len(idX)):
            rows.append([sum(a[i] * C[i][j][k] for i in range(m1)) % p for j in range(m2)])
            rhs.append(idX[k])
        for k in range(len(idY)):
            rows.append([sum(a[i] * K[i][j][k] for i in range(m1)) % p for j in range(m2)])
            rhs.append(idY[k])
        b = linalg.solve(rows, rhs, field, m2)
        if b is None:
            continue
        phi = _combine(phis, a, X, Y)
        psi = _combine(psis, b, Y, X)
        return phi, psi
    return None


def _combine(homs, coeffs, E, F):
    acc = zero_hom(E, F, 0)
    for c, t in zip(coeffs, homs):
        if c:
            acc = acc + t.scale(c)
    return acc
