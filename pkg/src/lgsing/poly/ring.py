"""Coefficient fields, monomial orders and ring contexts."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ContextMismatch, ParseError, VariableCollision

ORDERS = ("degrevlex", "deglex", "lex")
_IDENT = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class Field:
    """The rationals (``p == 0``) or the prime field F_p.

    Rational elements are ``int`` or ``Fraction``; prime-field elements are
    ints in ``range(p)``.
    """

    p: int = 0

    def __post_init__(self):
        if self.p:
            if not (_is_prime(self.p) and self.p < 2**31):
                raise ValueError(f"modulus {self.p} is not a prime below 2^31")
            if self.p == 2:
                raise ValueError("characteristic 2 is not supported")

    @classmethod
    def parse(cls, spec: str, modulus: int | None = None) -> "Field":
        s = spec.strip()
        if s in ("Q", "QQ"):
            if modulus:
                raise ValueError("--modulus given for the rational field")
            return cls(0)
        m = re.fullmatch(r"(?:F|GF|F_|Fp)\(?(\d*)\)?", s)
        if m is None:
            raise ValueError(f"unknown field {spec!r}")
        p = int(m.group(1)) if m.group(1) else modulus
        if not p:
            raise ValueError("prime field needs a modulus")
        if modulus and modulus != p:
            raise ValueError("conflicting moduli")
        return cls(p)

    @property
    def char(self) -> int:
        return self.p

    def __str__(self):
        return f"F{self.p}" if self.p else "Q"

    def coerce(self, value):
        if self.p:
            if isinstance(value, Fraction):
                return value.numerator * pow(value.denominator, -1, self.p) % self.p
            return int(value) % self.p
        if isinstance(value, Fraction):
            return value.numerator if value.denominator == 1 else value
        return int(value)

    def inv(self, a):
        if self.p:
            return pow(a, -1, self.p)
        r = Fraction(1) / a
        return r.numerator if r.denominator == 1 else r

    def div(self, a, b):
        if self.p:
            return a * pow(b, -1, self.p) % self.p
        r = Fraction(a) / b
        return r.numerator if r.denominator == 1 else r

    def to_int_or_str(self, a):
        """JSON-friendly rendering of an element."""
        if isinstance(a, Fraction) and a.denominator != 1:
            return str(a)
        return int(a)


QQ = Field(0)


def degrevlex_key(exp):
    return (sum(exp), tuple(-e for e in reversed(exp)))


def deglex_key(exp):
    return (sum(exp), exp)


def lex_key(exp):
    return exp


_KEYS = {"degrevlex": degrevlex_key, "deglex": deglex_key, "lex": lex_key}


@dataclass(frozen=True)
class RingCtx:
    """A polynomial ring ``field[vars]`` together with a monomial order."""

    field: Field
    vars: tuple
    order: str = "degrevlex"

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if self.order not in ORDERS:
            raise ValueError(f"unsupported monomial order {self.order!r}")
        for v in self.vars:
            if not isinstance(v, str) or not _IDENT.match(v):
                raise ValueError(f"invalid variable name {v!r}")
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("variable names must be unique")

    @classmethod
    def make(cls, field="Q", vars=(), order="degrevlex", modulus=None) -> "RingCtx":
        if isinstance(field, str):
            field = Field.parse(field, modulus)
        elif isinstance(field, int):
            field = Field(field)
        if isinstance(vars, str):
            vars = tuple(v.strip() for v in vars.split(",") if v.strip())
        return cls(field, tuple(vars), order)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    @property
    def key(self):
        return _KEYS[self.order]

    def index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise ParseError(f"unknown variable {name!r}") from None

    def check_same(self, other: "RingCtx"):
        if self != other:
            raise ContextMismatch(f"ring mismatch: {self} vs {other}")

    def union(self, other: "RingCtx") -> "RingCtx":
        """Ring on the concatenated variable list (tensor product over the field)."""
        if self.field != other.field:
            raise ContextMismatch(f"field mismatch: {self.field} vs {other.field}")
        clash = set(self.vars) & set(other.vars)
        if clash:
            raise VariableCollision(f"shared variables {sorted(clash)}")
        return RingCtx(self.field, self.vars + other.vars, self.order)

    def with_field(self, field: Field) -> "RingCtx":
        return RingCtx(field, self.vars, self.order)

    # convenience constructors; imported lazily to avoid a cycle
    def zero(self):
        from .polynomial import Poly
        return Poly(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        from .polynomial import Poly
        c = self.field.coerce(c)
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name: str):
        from .polynomial import Poly
        i = self.index(name)
        exp = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Poly(self, {exp: self.field.coerce(1)})

    def gens(self):
        return [self.var(v) for v in self.vars]

    def parse(self, text: str):
        from .polynomial import parse_poly
        return parse_poly(text, self)

    def __str__(self):
        return f"{self.field}[{','.join(self.vars)}]"
