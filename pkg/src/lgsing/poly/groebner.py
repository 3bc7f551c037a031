"""Buchberger's algorithm for submodules of free modules, and the linear algebra
built on it: normal forms, membership, lifts, syzygies and quotient dimensions.

Module elements are handled internally as dicts ``{(position, exponent): coeff}``
ordered position-over-term (a smaller position index is larger), refined by the
ring's monomial order.
"""
from __future__ import annotations

import contextlib
import contextvars
import heapq
import itertools
from dataclasses import dataclass

from ..errors import ContextMismatch, ResourceCapExceeded
from .matrix import PolyMatrix
from .polynomial import Poly
from .ring import RingCtx


class _Infinite:
    """Dimension of a module that is not finite over the field."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INFINITE"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinite, ())

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __mul__(self, other):
        return 0 if other == 0 else self

    __rmul__ = __mul__

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("INFINITE")


INFINITE = _Infinite()


@dataclass(frozen=True)
class Caps:
    """Budgets for a single Groebner computation."""

    max_pairs: int = 200_000
    max_basis: int = 20_000


_CAPS = contextvars.ContextVar("lgsing_caps", default=Caps())


def current_caps() -> Caps:
    return _CAPS.get()


@contextlib.contextmanager
def resource_caps(max_pairs=None, max_basis=None):
    """Temporarily tighten or loosen the Groebner budgets."""
    old = _CAPS.get()
    tok = _CAPS.set(Caps(max_pairs or old.max_pairs, max_basis or old.max_basis))
    try:
        yield _CAPS.get()
    finally:
        _CAPS.reset(tok)


# ---------------------------------------------------------------------------
# vector conversions

def column_to_vec(col, offset=0) -> dict:
    v = {}
    for i, q in enumerate(col):
        for e, c in q.terms.items():
            v[(i + offset, e)] = c
    return v


def vec_to_column(v: dict, ctx: RingCtx, rank: int, offset=0) -> list:
    parts = [dict() for _ in range(rank)]
    for (pos, e), c in v.items():
        parts[pos - offset][e] = c
    return [Poly(ctx, d) for d in parts]


class _Element:
    __slots__ = ("vec", "pos", "exp", "sugar")

    def __init__(self, vec, pos, exp):
        self.vec = vec
        self.pos = pos
        self.exp = exp


class _Engine:
    """Polynomial-vector arithmetic for one ring; holds no cross-call state."""

    def __init__(self, ctx: RingCtx):
        self.ctx = ctx
        self.p = ctx.field.p
        self.field = ctx.field
        okey = ctx.key
        self.okey = okey
        self.mkey = lambda k: (-k[0], okey(k[1]))

    def lead(self, v):
        k = max(v, key=self.mkey)
        return k

    def monic(self, v):
        k = self.lead(v)
        c = v[k]
        if c == 1:
            return v
        inv = self.field.inv(c)
        if self.p:
            p = self.p
            return {t: a * inv % p for t, a in v.items()}
        return {t: self.field.coerce(a * inv) for t, a in v.items()}

    def sub_shifted(self, v, coef, shift, g):
        """v -= coef * x^shift * g, in place."""
        p = self.p
        for (pos, e), c in g.items():
            t = (pos, tuple(a + b for a, b in zip(e, shift)))
            val = v.get(t, 0) - coef * c
            if p:
                val %= p
            if val:
                v[t] = val
            else:
                v.pop(t, None)

    def reduce(self, v, by_pos, full=True):
        """Remainder of ``v`` on division by the monic elements ``by_pos``."""
        work = dict(v)
        rem = {}
        mkey = self.mkey
        while work:
            k = max(work, key=mkey)
            c = work[k]
            pos, e = k
            for g in by_pos.get(pos, ()):
                ge = g.exp
                if all(a >= b for a, b in zip(e, ge)):
                    shift = tuple(a - b for a, b in zip(e, ge))
                    self.sub_shifted(work, c, shift, g.vec)
                    break
            else:
                if not full:
                    rem.update(work)
                    return rem
                rem[k] = c
                del work[k]
        return rem

    def spoly(self, gi: _Element, gj: _Element):
        lcm = tuple(max(a, b) for a, b in zip(gi.exp, gj.exp))
        si = tuple(a - b for a, b in zip(lcm, gi.exp))
        sj = tuple(a - b for a, b in zip(lcm, gj.exp))
        v = {}
        p = self.p
        for (pos, e), c in gi.vec.items():
            v[(pos, tuple(a + b for a, b in zip(e, si)))] = c
        self.sub_shifted(v, 1, sj, gj.vec)
        return v


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _buchberger(engine: _Engine, vecs, rank, caps: Caps, product_criterion=False):
    G: list[_Element] = []
    by_pos: dict = {}
    pairs = []  # heap of (degree, orderkey, i, j)
    live = set()
    counter = itertools.count()

    def add(vec):
        vec = engine.monic(vec)
        pos, exp = engine.lead(vec)
        el = _Element(vec, pos, exp)
        n = len(G)
        for i, g in enumerate(G):
            if g.pos != pos:
                continue
            lcm = tuple(max(a, b) for a, b in zip(g.exp, exp))
            if product_criterion and all(min(a, b) == 0 for a, b in zip(g.exp, exp)):
                continue
            heapq.heappush(pairs, (sum(lcm), engine.okey(lcm), next(counter), i, n))
            live.add((i, n))
        G.append(el)
        by_pos.setdefault(pos, []).append(el)
        if len(G) > caps.max_basis:
            raise ResourceCapExceeded(f"Groebner basis exceeded {caps.max_basis} elements")

    for v in vecs:
        if v:
            r = engine.reduce(v, by_pos)
            if r:
                add(r)

    processed = 0
    while pairs:
        _, _, _, i, j = heapq.heappop(pairs)
        live.discard((i, j))
        gi, gj = G[i], G[j]
        lcm = tuple(max(a, b) for a, b in zip(gi.exp, gj.exp))
        # Buchberger's chain criterion
        skip = False
        for k, gk in enumerate(G):
            if k in (i, j) or gk.pos != gi.pos or not _divides(gk.exp, lcm):
                continue
            if (min(i, k), max(i, k)) not in live and (min(j, k), max(j, k)) not in live:
                skip = True
                break
        if skip:
            continue
        processed += 1
        if processed > caps.max_pairs:
            raise ResourceCapExceeded(f"Groebner computation exceeded {caps.max_pairs} S-pairs")
        s = engine.spoly(gi, gj)
        if s:
            r = engine.reduce(s, by_pos)
            if r:
                add(r)

    # minimalize, then interreduce
    keep = []
    for idx, g in enumerate(G):
        redundant = False
        for jdx, h in enumerate(G):
            if jdx == idx or h.pos != g.pos or not _divides(h.exp, g.exp):
                continue
            if h.exp != g.exp or jdx < idx:
                redundant = True
                break
        if not redundant:
            keep.append(g)
    reduced = []
    for g in keep:
        others: dict = {}
        for h in keep:
            if h is not g:
                others.setdefault(h.pos, []).append(h)
        r = engine.reduce(g.vec, others)
        r = engine.monic(r)
        pos, exp = engine.lead(r)
        reduced.append(_Element(r, pos, exp))
    reduced.sort(key=lambda el: engine.mkey((el.pos, el.exp)), reverse=True)
    return reduced


def _group(elements):
    by_pos: dict = {}
    for el in elements:
        by_pos.setdefault(el.pos, []).append(el)
    return by_pos


# ---------------------------------------------------------------------------
# public API

class GroebnerBasis:
    """Reduced Groebner basis of a submodule of ``ctx^rank``."""

    def __init__(self, ctx: RingCtx, rank: int, elements):
        self.ctx = ctx
        self.rank = rank
        self._elements = list(elements)
        self._by_pos = _group(self._elements)
        self._engine = _Engine(ctx)

    @property
    def generators(self):
        return [tuple(vec_to_column(el.vec, self.ctx, self.rank)) for el in self._elements]

    @property
    def leading(self):
        return [(el.pos, el.exp) for el in self._elements]

    def __len__(self):
        return len(self._elements)

    def normal_form_vec(self, v: dict) -> dict:
        return self._engine.reduce(v, self._by_pos)

    def normal_form(self, column):
        return normal_form(column, self)

    def contains(self, column) -> bool:
        return all(q.is_zero() for q in normal_form(column, self))

    def standard_monomials(self):
        """List of ``(position, exponent)`` outside the leading module, or INFINITE."""
        return _standard_monomials(self.leading, self.ctx.nvars, self.rank)

    def quotient_dim(self):
        sm = self.standard_monomials()
        return sm if sm is INFINITE else len(sm)


def _columns_of(gens, rank):
    cols = []
    for g in gens:
        g = list(g)
        if len(g) != rank:
            raise ContextMismatch(f"generator of length {len(g)} in a rank-{rank} module")
        cols.append(g)
    return cols


def groebner_module(gens, ctx: RingCtx, rank: int | None = None, caps: Caps | None = None) -> GroebnerBasis:
    """Reduced position-over-term Groebner basis of the submodule spanned by ``gens``.

    ``gens`` is a list of columns (sequences of Poly) or a PolyMatrix whose columns
    are the generators.
    """
    if isinstance(gens, PolyMatrix):
        rank = gens.rows if rank is None else rank
        gens = gens.columns()
    gens = list(gens)
    if rank is None:
        if not gens:
            raise ValueError("rank must be given for an empty generator list")
        rank = len(gens[0])
    cols = _columns_of(gens, rank)
    for c in cols:
        for q in c:
            if q.ctx != ctx:
                raise ContextMismatch("generator from a different ring")
    engine = _Engine(ctx)
    caps = caps or current_caps()
    els = _buchberger(engine, [column_to_vec(c) for c in cols], rank, caps,
                      product_criterion=(rank == 1))
    return GroebnerBasis(ctx, rank, els)


def normal_form(column, gb: GroebnerBasis):
    column = list(column)
    if len(column) != gb.rank:
        raise ContextMismatch(f"vector of length {len(column)} against a rank-{gb.rank} basis")
    r = gb.normal_form_vec(column_to_vec(column))
    return tuple(vec_to_column(r, gb.ctx, gb.rank))


class ImageSolver:
    """Groebner data for the column span of ``M`` with lift bookkeeping.

    Computes a basis of the rows-plus-columns tagged module so that membership
    tests return explicit coefficients and the tag-only elements give syzygies.
    """

    def __init__(self, M: PolyMatrix, caps: Caps | None = None):
        self.M = M
        self.ctx = M.ctx
        r, m = M.rows, M.cols
        self.r, self.m = r, m
        engine = _Engine(M.ctx)
        one = M.ctx.field.coerce(1)
        zero_exp = (0,) * M.ctx.nvars
        vecs = []
        for j in range(m):
            v = column_to_vec(M.col(j))
            v[(r + j, zero_exp)] = one
            vecs.append(v)
        caps = caps or current_caps()
        self._engine = engine
        self._elements = _buchberger(engine, vecs, r + m, caps)
        main = [el for el in self._elements if el.pos < r]
        self._by_pos = _group(self._elements)
        self.image_basis = GroebnerBasis(
            M.ctx, r, [_strip_tags(el, r) for el in main])

    def solve(self, b):
        """A column ``x`` with ``M x = b``, or None when ``b`` is not in the image."""
        b = list(b)
        if len(b) != self.r:
            raise ContextMismatch(f"right-hand side of length {len(b)} for {self.r} rows")
        rem = self._engine.reduce(column_to_vec(b), self._by_pos)
        if any(pos < self.r for (pos, _) in rem):
            return None
        tail = vec_to_column(rem, self.ctx, self.m, offset=self.r)
        return [-q for q in tail]

    def syzygies(self) -> PolyMatrix:
        """Matrix whose columns generate the kernel of ``M``."""
        cols = []
        for el in self._elements:
            if el.pos >= self.r:
                cols.append(vec_to_column(el.vec, self.ctx, self.m, offset=self.r))
        return PolyMatrix(self.ctx, self.m, len(cols),
                          [[cols[j][i] for j in range(len(cols))] for i in range(self.m)])


def _strip_tags(el, r):
    v = {k: c for k, c in el.vec.items() if k[0] < r}
    return _Element(v, el.pos, el.exp)


def solve_linear(M: PolyMatrix, b):
    """Exact polynomial solution of ``M x = b`` or None (a proof of non-membership)."""
    if isinstance(b, PolyMatrix):
        b = b.col(0)
    return ImageSolver(M).solve(b)


def syzygies(M: PolyMatrix) -> PolyMatrix:
    if M.cols == 0:
        return PolyMatrix(M.ctx, 0, 0)
    return ImageSolver(M).syzygies()


def _standard_monomials(leading, nvars, rank):
    by_pos: dict = {}
    for pos, e in leading:
        by_pos.setdefault(pos, []).append(e)
    out = []
    for pos in range(rank):
        lts = by_pos.get(pos, [])
        if any(not any(e) for e in lts):
            continue
        if nvars == 0:
            out.append((pos, ()))
            continue
        bounds = []
        for i in range(nvars):
            pure = [e[i] for e in lts if all(a == 0 for k, a in enumerate(e) if k != i)]
            if not pure:
                return INFINITE
            bounds.append(min(pure))
        for e in itertools.product(*(range(b) for b in bounds)):
            if not any(_divides(l, e) for l in lts):
                out.append((pos, e))
    return out


def quotient_k_dim(presentation, rank: int | None = None):
    """Field dimension of ``ctx^rank / span(columns)``, or INFINITE."""
    if isinstance(presentation, PolyMatrix):
        gb = groebner_module(presentation, presentation.ctx)
    else:
        gb = presentation
    return gb.quotient_dim()


def homology_dim(D_out: PolyMatrix, D_in: PolyMatrix):
    """Field dimension of ``ker D_out / im D_in`` (requires ``D_out D_in = 0``)."""
    return homology_presentation(D_out, D_in)[1].quotient_dim()


def homology_presentation(D_out: PolyMatrix, D_in: PolyMatrix):
    """Generators ``Z`` of ``ker D_out`` and a Groebner basis of the relations among
    them modulo ``im D_in``; the homology is ``ring^s / relations``."""
    ctx = D_out.ctx
    n = D_out.cols
    if D_in.rows != n:
        raise ContextMismatch("composable maps required")
    if D_out.rows == 0 or D_out.is_zero():
        Z = PolyMatrix.identity(ctx, n)
    else:
        Z = syzygies(D_out)
    s = Z.cols
    if s == 0:
        return Z, GroebnerBasis(ctx, 0, [])
    if D_in.cols == 0:
        rel = GroebnerBasis(ctx, s, [])
        return Z, rel
    big = PolyMatrix.block(ctx, [[Z, D_in]], [n], [s, D_in.cols])
    S = syzygies(big)
    rel_cols = [S.col(j)[:s] for j in range(S.cols)]
    rel = groebner_module(rel_cols, ctx, rank=s)
    return Z, rel
