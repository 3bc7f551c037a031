"""Dense matrices of polynomials: the carrier for every map of free modules."""
from __future__ import annotations

from ..errors import ContextMismatch
from .polynomial import Poly, parse_poly
from .ring import RingCtx


class PolyMatrix:
    """Immutable ``rows x cols`` matrix over a single ring.

    Zero-sized shapes are legal and carry their dimensions explicitly.
    """

    __slots__ = ("ctx", "rows", "cols", "entries")

    def __init__(self, ctx: RingCtx, rows: int, cols: int, entries=None):
        self.ctx = ctx
        self.rows = rows
        self.cols = cols
        if entries is None:
            z = ctx.zero()
            entries = tuple(tuple(z for _ in range(cols)) for _ in range(rows))
        else:
            entries = tuple(tuple(r) for r in entries)
            if len(entries) != rows or any(len(r) != cols for r in entries):
                raise ContextMismatch(f"entries do not form a {rows}x{cols} grid")
            for r in entries:
                for e in r:
                    if not isinstance(e, Poly) or e.ctx != ctx:
                        raise ContextMismatch("matrix entry from a different ring")
        self.entries = entries

    @classmethod
    def from_rows(cls, ctx, rows, ncols=None) -> "PolyMatrix":
        """Build from nested lists of Poly, ints or expression strings."""
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        conv = []
        for r in rows:
            out = []
            for e in r:
                if isinstance(e, str):
                    e = parse_poly(e, ctx)
                elif not isinstance(e, Poly):
                    e = ctx.const(e)
                out.append(e)
            conv.append(out)
        return cls(ctx, len(conv), ncols, conv)

    @classmethod
    def zeros(cls, ctx, rows, cols) -> "PolyMatrix":
        return cls(ctx, rows, cols)

    @classmethod
    def identity(cls, ctx, n, scalar=None) -> "PolyMatrix":
        one = ctx.one() if scalar is None else scalar
        z = ctx.zero()
        return cls(ctx, n, n, [[one if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def column(cls, ctx, vec) -> "PolyMatrix":
        return cls(ctx, len(vec), 1, [[v] for v in vec])

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def col(self, j):
        return [self.entries[i][j] for i in range(self.rows)]

    def columns(self):
        return [self.col(j) for j in range(self.cols)]

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.ctx == other.ctx and self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.ctx, self.shape, self.entries))

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.entries for e in r)

    def _check(self, other):
        if not isinstance(other, PolyMatrix):
            raise TypeError("expected a PolyMatrix")
        if other.ctx != self.ctx:
            raise ContextMismatch(f"ring mismatch: {self.ctx} vs {other.ctx}")

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ContextMismatch(f"shape mismatch {self.shape} vs {other.shape}")
        return PolyMatrix(self.ctx, self.rows, self.cols,
                          [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self):
        return PolyMatrix(self.ctx, self.rows, self.cols, [[-a for a in r] for r in self.entries])

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise ContextMismatch(f"cannot multiply {self.shape} by {other.shape}")
        z = self.ctx.zero()
        out = []
        ocols = [other.col(j) for j in range(other.cols)]
        for r in self.entries:
            row = []
            for c in ocols:
                acc = z
                for a, b in zip(r, c):
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.ctx, self.rows, other.cols, out)

    def scale(self, s) -> "PolyMatrix":
        if isinstance(s, Poly):
            return PolyMatrix(self.ctx, self.rows, self.cols, [[s * a for a in r] for r in self.entries])
        return PolyMatrix(self.ctx, self.rows, self.cols, [[a.scale(s) for a in r] for r in self.entries])

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.ctx, self.cols, self.rows, [self.col(j) for j in range(self.cols)])

    def map(self, fn, ctx=None) -> "PolyMatrix":
        ctx = ctx or self.ctx
        return PolyMatrix(ctx, self.rows, self.cols, [[fn(a) for a in r] for r in self.entries])

    def embed(self, target: RingCtx) -> "PolyMatrix":
        return self.map(lambda a: a.embed(target), target)

    def substitute(self, images, target) -> "PolyMatrix":
        return self.map(lambda a: a.substitute(images, target), target)

    def kron(self, other) -> "PolyMatrix":
        self._check(other)
        rows = self.rows * other.rows
        cols = self.cols * other.cols
        out = [[None] * cols for _ in range(rows)]
        for i in range(self.rows):
            for j in range(self.cols):
                a = self.entries[i][j]
                for k in range(other.rows):
                    for l in range(other.cols):
                        out[i * other.rows + k][j * other.cols + l] = a * other.entries[k][l]
        return PolyMatrix(self.ctx, rows, cols, out)

    def permute(self, row_perm, col_perm) -> "PolyMatrix":
        """Entry (i, j) of the result is entry (row_perm[i], col_perm[j]) of self."""
        return PolyMatrix(self.ctx, len(row_perm), len(col_perm),
                          [[self.entries[r][c] for c in col_perm] for r in row_perm])

    def first_difference(self, other):
        """``(row, col, self - other)`` at the first differing entry, or None."""
        for i in range(self.rows):
            for j in range(self.cols):
                if self.entries[i][j] != other.entries[i][j]:
                    return (i, j, self.entries[i][j] - other.entries[i][j])
        return None

    @staticmethod
    def block(ctx, blocks, row_sizes, col_sizes) -> "PolyMatrix":
        """Assemble from a grid of blocks; ``None`` stands for a zero block."""
        rows = sum(row_sizes)
        cols = sum(col_sizes)
        z = ctx.zero()
        out = [[z] * cols for _ in range(rows)]
        r0 = 0
        for bi, rs in enumerate(row_sizes):
            c0 = 0
            for bj, cs in enumerate(col_sizes):
                b = blocks[bi][bj]
                if b is not None:
                    if b.shape != (rs, cs):
                        raise ContextMismatch(f"block ({bi},{bj}) has shape {b.shape}, expected {(rs, cs)}")
                    for i in range(rs):
                        for j in range(cs):
                            out[r0 + i][c0 + j] = b.entries[i][j]
                c0 += cs
            r0 += rs
        return PolyMatrix(ctx, rows, cols, out)

    def submatrix(self, r0, r1, c0, c1) -> "PolyMatrix":
        return PolyMatrix(self.ctx, r1 - r0, c1 - c0, [row[c0:c1] for row in self.entries[r0:r1]])

    def to_strings(self):
        return [[str(a) for a in r] for r in self.entries]

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols}, {self.to_strings()})"
