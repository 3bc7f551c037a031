"""Sparse multivariate polynomials with exact coefficients, and the expression parser."""
from __future__ import annotations

import re
from fractions import Fraction

from ..errors import ContextMismatch, ParseError
from .ring import RingCtx


class Poly:
    """Immutable sparse polynomial over a :class:`RingCtx`.

    ``terms`` maps exponent tuples to nonzero coefficients. Callers must not
    mutate it.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: RingCtx, terms: dict):
        self.ctx = ctx
        self.terms = terms

    # construction helpers -------------------------------------------------
    @classmethod
    def from_terms(cls, ctx: RingCtx, items) -> "Poly":
        field = ctx.field
        acc: dict = {}
        n = ctx.nvars
        for exp, c in items:
            exp = tuple(exp)
            if len(exp) != n:
                raise ContextMismatch(f"exponent {exp} has wrong length for {ctx}")
            acc[exp] = acc.get(exp, 0) + field.coerce(c)
        p = field.p
        out = {}
        for e, c in acc.items():
            if p:
                c %= p
            if c:
                out[e] = field.coerce(c)
        return cls(ctx, out)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ctx != self.ctx:
                raise ContextMismatch(f"ring mismatch: {self.ctx} vs {other.ctx}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.const(other)
        return NotImplemented

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ctx.field.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if p:
                v %= p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.field.p
        if p:
            return Poly(self.ctx, {e: p - c for e, c in self.terms.items()})
        return Poly(self.ctx, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return Poly(self.ctx, {})
        p = self.ctx.field.p
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        if p:
            out = {e: c % p for e, c in out.items() if c % p}
        else:
            out = {e: c for e, c in out.items() if c}
        return Poly(self.ctx, out)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        field = self.ctx.field
        c = field.coerce(c)
        if not c:
            return Poly(self.ctx, {})
        if field.p:
            return Poly(self.ctx, {e: v * c % field.p for e, v in self.terms.items()})
        return Poly(self.ctx, {e: v * c for e, v in self.terms.items()})

    def __truediv__(self, c):
        if isinstance(c, Poly):
            if not c.is_constant() or c.is_zero():
                raise ZeroDivisionError("only division by nonzero constants is supported")
            c = c.constant_coeff()
        return self.scale(self.ctx.field.inv(self.ctx.field.coerce(c)))

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # predicates and accessors --------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_coeff(self):
        return self.terms.get((0,) * self.ctx.nvars, 0)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def sorted_terms(self):
        """Terms from largest to smallest in the ring's monomial order."""
        key = self.ctx.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            return None
        key = self.ctx.key
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def support_vars(self) -> set:
        used = set()
        for e in self.terms:
            used.update(i for i, a in enumerate(e) if a)
        return {self.ctx.vars[i] for i in used}

    def diff(self, var: str) -> "Poly":
        i = self.ctx.index(var)
        p = self.ctx.field.p
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                v = c * e[i]
                if p:
                    v %= p
                if v:
                    ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                    out[ne] = v
        return Poly(self.ctx, out)

    # ring maps ---------------------------------------------------------------
    def substitute(self, images: dict, target: RingCtx | None = None) -> "Poly":
        """Evaluate the ring map sending each variable to ``images[var]``."""
        used = self.support_vars()
        missing = [v for v in self.ctx.vars if v in used and v not in images]
        if missing:
            raise ValueError(f"no image for variable(s) {missing}")
        if target is None:
            found = [q.ctx for q in images.values() if isinstance(q, Poly)]
            if not found:
                raise ValueError("cannot infer target ring")
            target = found[0]
        imgs = []
        for v in self.ctx.vars:
            q = images.get(v)
            if q is None:
                imgs.append(None)
                continue
            if not isinstance(q, Poly):
                q = target.const(q)
            if q.ctx != target:
                raise ContextMismatch("images live in different rings")
            imgs.append(q)
        powers: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = imgs[i] ** k
            return powers[key]

        result = target.zero()
        for e, c in self.terms.items():
            t = target.const(c)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            result = result + t
        return result

    def embed(self, target: RingCtx) -> "Poly":
        """Include into a ring whose variable list contains ours."""
        if target == self.ctx:
            return self
        if target.field != self.ctx.field:
            raise ContextMismatch("cannot embed across fields")
        idx = [target.index(v) for v in self.ctx.vars]
        n = target.nvars
        out = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for i, a in zip(idx, e):
                ne[i] = a
            out[tuple(ne)] = c
        return Poly(target, out)

    # printing -----------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if a == 1 else f"{v}^{a}" for v, a in zip(self.ctx.vars, e) if a
            )
            c = Fraction(c)
            if self.ctx.field.p and c > self.ctx.field.p // 2:
                c -= self.ctx.field.p
            neg = c < 0
            c = abs(c)
            cs = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
            if mono:
                body = mono if cs == "1" else f"{cs}*{mono}"
            else:
                body = cs
            parts.append(("-" if neg else "+", body))
        s = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"Poly({str(self)!r}, {self.ctx})"


# --------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(\d+/\d+|\d+)|([a-zA-Z][a-zA-Z0-9_]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("num", m.group(1), start))
        elif m.group(2):
            toks.append(("id", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^()":
                raise ParseError(f"unexpected character {ch!r}", start, text)
            toks.append((ch, ch, start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text, ctx):
        self.text = text
        self.ctx = ctx
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2], self.text)
        self.i += 1
        return tok

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0, self.text)
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2], self.text)
        return p

    def expr(self):
        p = self.term()
        while self.peek()[0] in "+-" and self.peek()[0] != "end":
            op = self.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek()[0] == "*":
            self.take()
            p = p * self.unary()
        return p

    def unary(self):
        tok = self.peek()
        if tok[0] == "-":
            self.take()
            return -self.unary()
        if tok[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "num" or "/" in tok[1]:
                raise ParseError("exponent must be a nonnegative integer literal", tok[2], self.text)
            self.take()
            base = base ** int(tok[1])
            if self.peek()[0] == "^":
                raise ParseError("chained exponents are not allowed", self.peek()[2], self.text)
        return base

    def atom(self):
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            if "/" in tok[1]:
                n, d = tok[1].split("/")
                if int(d) == 0 or (self.ctx.field.p and int(d) % self.ctx.field.p == 0):
                    raise ParseError(f"coefficient {tok[1]} not representable in {self.ctx.field}", tok[2], self.text)
                return self.ctx.const(Fraction(int(n), int(d)))
            return self.ctx.const(int(tok[1]))
        if tok[0] == "id":
            self.take()
            if tok[1] not in self.ctx.vars:
                raise ParseError(f"unknown variable {tok[1]!r}", tok[2], self.text)
            nxt = self.peek()
            if nxt[0] in ("id", "num", "("):
                raise ParseError("implicit multiplication is not allowed", nxt[2], self.text)
            return self.ctx.var(tok[1])
        if tok[0] == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        what = "end of input" if tok[0] == "end" else repr(tok[1])
        raise ParseError(f"unexpected {what}", tok[2], self.text)


def parse_poly(text: str, ctx: RingCtx) -> Poly:
    """Parse an expression in the ``+ - * ^`` grammar into a canonical Poly."""
    if not isinstance(text, str):
        raise ParseError(f"expression must be a string, got {type(text).__name__}")
    return _Parser(text, ctx).parse()
