"""Problem files: a TOML document describing a ring, a potential and named objects.

Grammar (TOML tables; matrices are nested arrays of expression strings)::

    [ring]            field = "Q" | "F<p>" | "F" (with modulus), modulus = int,
                      vars = [names], order = "degrevlex" | "deglex" | "lex"
    [potential]       f = expression
    [objects.NAME]    kind = "mf" | "koszul" | "matrix" | "morphism" | "builtin"
                      | "cone_identity", plus kind-specific keys (see README)
    [params]          free scalar keys (window, cap, seed, ...)
"""
from __future__ import annotations

from dataclasses import dataclass, field

try:
    import tomllib as tomli
except ImportError:  # Python 3.10
    import tomli
import tomli_w

from .errors import ContextMismatch, LGError, ParseError
from .koszul import (KoszulModule, cone_identity_contraction, koszul_algebra, new_koszul,
                     residue_representative, shift_koszul, telescope, trivial_module)
from .mf import GradedHom, LGPair, MatrixFactorization
from .poly import PolyMatrix, RingCtx

KINDS = ("mf", "koszul", "matrix", "morphism", "builtin", "cone_identity")
BUILTINS = ("koszul_algebra", "trivial", "telescope", "k_representative")


@dataclass
class ProblemFile:
    ring: dict
    potential: str
    objects: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def to_dict(self):
        out = {"ring": dict(self.ring), "potential": {"f": self.potential}}
        if self.objects:
            out["objects"] = {k: dict(v) for k, v in self.objects.items()}
        if self.params:
            out["params"] = dict(self.params)
        return out


def parse_problem(text: str) -> ProblemFile:
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ParseError(f"malformed problem file: {exc}") from None
    unknown = set(data) - {"ring", "potential", "objects", "params"}
    if unknown:
        raise ParseError(f"unknown section(s): {', '.join(sorted(unknown))}")
    ring = data.get("ring", {})
    if not isinstance(ring, dict):
        raise ParseError("[ring] must be a table")
    for key in ring:
        if key not in ("field", "modulus", "vars", "order"):
            raise ParseError(f"unknown key ring.{key}")
    pot = data.get("potential", {})
    if not isinstance(pot, dict) or set(pot) - {"f"}:
        raise ParseError("[potential] takes the single key f")
    f = pot.get("f", "0")
    if not isinstance(f, str):
        raise ParseError("potential.f must be a string")
    objects = data.get("objects", {})
    for name, spec in objects.items():
        if not isinstance(spec, dict):
            raise ParseError(f"objects.{name} must be a table")
        if spec.get("kind") not in KINDS:
            raise ParseError(f"objects.{name}.kind must be one of {', '.join(KINDS)}")
    params = data.get("params", {})
    return ProblemFile(ring, f, objects, params)


def dump_problem(pf: ProblemFile) -> str:
    return tomli_w.dumps(pf.to_dict())


def load_problem(path) -> ProblemFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_problem(fh.read())


# ---------------------------------------------------------------------------
# building library objects

class Workspace:
    """Ring, LG pair and lazily built objects of a problem file."""

    def __init__(self, pf: ProblemFile, overrides: dict | None = None):
        ring = dict(pf.ring)
        for key, value in (overrides or {}).items():
            if value is not None:
                ring[key] = value
        try:
            self.ctx = RingCtx.make(ring.get("field", "Q"), ring.get("vars", ()),
                                    ring.get("order", "degrevlex"), ring.get("modulus"))
        except (ValueError, KeyError) as exc:
            raise ParseError(f"ring: {exc}") from None
        self.pf = pf
        self.lg = LGPair(self.ctx, self._poly(pf.potential, "potential.f"))
        self._cache = {}
        self.contractions = {}

    def _poly(self, text, where, ctx=None):
        if not isinstance(text, (str, int)):
            raise ParseError(f"{where}: expected an expression string")
        try:
            return (ctx or self.ctx).parse(str(text))
        except ParseError as exc:
            err = ParseError(f"{where}: {exc}")
            err.position = exc.position
            raise err from None

    def _matrix(self, rows, where, shape=None, ctx=None):
        if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
            raise ParseError(f"{where}: expected a list of rows")
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ParseError(f"{where}: ragged rows")
        ncols = widths.pop() if widths else (shape[1] if shape else 0)
        if shape is not None and (len(rows), ncols) != tuple(shape):
            raise ParseError(f"{where}: shape {(len(rows), ncols)} but expected {tuple(shape)}")
        ctx = ctx or self.ctx
        entries = [[self._poly(e, f"{where}[{i}][{j}]", ctx) for j, e in enumerate(r)] for i, r in enumerate(rows)]
        return PolyMatrix(ctx, len(rows), ncols, entries)

    def _local(self, spec, where):
        """Objects may carry their own ``vars`` and ``f`` (same field and order)."""
        if "vars" not in spec and "f" not in spec:
            return self.ctx, self.lg
        ctx = RingCtx(self.ctx.field, tuple(spec.get("vars", self.ctx.vars)), self.ctx.order)
        return ctx, LGPair(ctx, self._poly(spec.get("f", "0"), f"{where}.f", ctx))

    def names(self):
        return list(self.pf.objects)

    def get(self, name):
        if name not in self.pf.objects:
            raise ParseError(f"undefined object {name!r}")
        if name not in self._cache:
            try:
                self._cache[name] = self._build(name, self.pf.objects[name])
            except LGError:
                raise
            except (ValueError, TypeError) as exc:
                raise ParseError(f"objects.{name}: {exc}") from None
        return self._cache[name]

    def _build(self, name, spec):
        where = f"objects.{name}"
        kind = spec["kind"]
        ctx, lg = self._local(spec, where)
        if kind == "mf":
            ranks = spec.get("ranks")
            r0 = ranks[0] if ranks else None
            r1 = ranks[1] if ranks else None
            d0 = self._matrix(spec.get("d0", []), f"{where}.d0", (r1, r0) if ranks else None, ctx)
            d1 = self._matrix(spec.get("d1", []), f"{where}.d1", (r0, r1) if ranks else None, ctx)
            if d0.shape != (d1.cols, d1.rows):
                raise ParseError(f"{where}: d0 is {d0.shape} but d1 is {d1.shape}")
            return MatrixFactorization(lg, d0, d1)
        if kind == "koszul":
            lo = spec.get("lo")
            ranks = spec.get("ranks")
            if not isinstance(lo, int) or not isinstance(ranks, list) or not ranks:
                raise ParseError(f"{where}: koszul objects need integer lo and a ranks list")
            n = len(ranks) - 1
            d, h = spec.get("d", []), spec.get("h", [])
            if len(d) != n or len(h) != n:
                raise ParseError(f"{where}: need {n} d and {n} h matrices")
            dm = [self._matrix(m, f"{where}.d[{k}]", (ranks[k + 1], ranks[k]), ctx) for k, m in enumerate(d)]
            hm = [self._matrix(m, f"{where}.h[{k}]", (ranks[k], ranks[k + 1]), ctx) for k, m in enumerate(h)]
            M = KoszulModule(lg, lo, ranks, dm, hm)
            if "k" in spec:
                ks = spec["k"]
                if len(ks) != len(ranks):
                    raise ParseError(f"{where}.k: need one matrix per degree")
                self.contractions[name] = {
                    lo + k: self._matrix(m, f"{where}.k[{k}]", (M.rank(lo + k - 1), M.rank(lo + k)), ctx)
                    for k, m in enumerate(ks)}
            return M
        if kind == "matrix":
            return self._matrix(spec.get("rows", []), f"{where}.rows", spec.get("shape"), ctx)
        if kind == "morphism":
            src, tgt = self.get(spec.get("source")), self.get(spec.get("target"))
            parity = spec.get("parity", 0)
            if parity not in (0, 1):
                raise ParseError(f"{where}.parity must be 0 or 1")
            shapes = ((tgt.rank0, src.rank0), (tgt.rank1, src.rank1)) if parity == 0 else \
                ((tgt.rank1, src.rank0), (tgt.rank0, src.rank1))
            c0 = self._matrix(spec.get("c0", []), f"{where}.c0", shapes[0], src.ctx)
            c1 = self._matrix(spec.get("c1", []), f"{where}.c1", shapes[1], src.ctx)
            return GradedHom(src, tgt, parity, c0, c1)
        if kind == "builtin":
            which = spec.get("name")
            if which not in BUILTINS:
                raise ParseError(f"{where}.name must be one of {', '.join(BUILTINS)}")
            if which == "koszul_algebra":
                M = koszul_algebra(lg)
            elif which == "trivial":
                M = trivial_module(ctx.field)
            elif which == "telescope":
                M = telescope(int(spec.get("n", 1)), ctx.field)
            else:
                M = residue_representative(lg, spec.get("var", ctx.vars[0] if ctx.vars else ""))
            shift = int(spec.get("shift", 0))
            return shift_koszul(M, shift) if shift else M
        if kind == "cone_identity":
            base = self.get(spec.get("of"))
            if not isinstance(base, KoszulModule):
                raise ParseError(f"{where}.of must name a koszul object")
            C, k = cone_identity_contraction(base)
            self.contractions[name] = k
            return C
        raise ParseError(f"{where}: unknown kind")  # pragma: no cover
