"""Exact rational matrices, the position order, and normalized bases.

Everything here is over arbitrary-precision rationals (fractions.Fraction);
no floating point anywhere.  The position order on matrix entries is the
total order

    (i, j) <= (i', j')   iff   i > i',  or  i = i' and j <= j',

so positions are swept bottom row first, left to right inside a row.  The
leading entry of a matrix is its least nonzero position in this order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence


def frac(x) -> Fraction:
    """Coerce ints, strings like '2/3', and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, (int,)):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to a rational")


def frac_str(x: Fraction) -> str:
    """Serialize as 'p/q', or just 'p' when the denominator is 1."""
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def position_key(pos):
    """Sort key realizing the position order: row descending, column ascending."""
    i, j = pos
    return (-i, j)


def position_leq(p, q) -> bool:
    """p precedes-or-equals q in the position order."""
    return position_key(p) <= position_key(q)


class Mat:
    """Dense matrix over Fraction.  Rows are lists; indices are 0-based."""

    __slots__ = ("rows", "cols", "a")

    def __init__(self, rows: int, cols: int, data=None):
        self.rows = rows
        self.cols = cols
        if data is None:
            self.a = [[Fraction(0)] * cols for _ in range(rows)]
        else:
            self.a = [[frac(x) for x in row] for row in data]
            if len(self.a) != rows or any(len(r) != cols for r in self.a):
                raise ValueError("dimensions inconsistent with data")

    @staticmethod
    def from_rows(data) -> "Mat":
        data = [list(r) for r in data]
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return Mat(rows, cols, data)

    @staticmethod
    def identity(n: int) -> "Mat":
        m = Mat(n, n)
        for i in range(n):
            m.a[i][i] = Fraction(1)
        return m

    @staticmethod
    def zeros(rows: int, cols: int) -> "Mat":
        return Mat(rows, cols)

    def copy(self) -> "Mat":
        m = Mat(self.rows, self.cols)
        m.a = [row[:] for row in self.a]
        return m

    def __getitem__(self, pos):
        i, j = pos
        return self.a[i][j]

    def __setitem__(self, pos, val):
        i, j = pos
        self.a[i][j] = frac(val)

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.a == other.a
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.a)))

    def __repr__(self):
        body = "; ".join(" ".join(frac_str(x) for x in row) for row in self.a)
        return f"Mat[{body}]"

    def __add__(self, other: "Mat") -> "Mat":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in addition")
        m = Mat(self.rows, self.cols)
        m.a = [[x + y for x, y in zip(r, s)] for r, s in zip(self.a, other.a)]
        return m

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def __neg__(self) -> "Mat":
        m = Mat(self.rows, self.cols)
        m.a = [[-x for x in row] for row in self.a]
        return m

    def scale(self, c) -> "Mat":
        c = frac(c)
        m = Mat(self.rows, self.cols)
        m.a = [[c * x for x in row] for row in self.a]
        return m

    def __mul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        out = Mat(self.rows, other.cols)
        ob = other.a
        for i, row in enumerate(self.a):
            acc = out.a[i]
            for k, x in enumerate(row):
                if x:
                    brow = ob[k]
                    for j in range(other.cols):
                        if brow[j]:
                            acc[j] += x * brow[j]
        return out

    def matpow(self, e: int) -> "Mat":
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        out = Mat.identity(self.rows)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    def transpose(self) -> "Mat":
        m = Mat(self.cols, self.rows)
        m.a = [[self.a[i][j] for i in range(self.rows)] for j in range(self.cols)]
        return m

    def is_zero(self) -> bool:
        return all(not x for row in self.a for x in row)

    def leading_entry(self):
        """Least nonzero position in the position order, with its value.

        Returns ((i, j), value) or None for the zero matrix.
        """
        best = None
        for i in range(self.rows - 1, -1, -1):
            for j in range(self.cols):
                if self.a[i][j]:
                    return ((i, j), self.a[i][j])
            # row i empty: continue upward
        return best

    def rref(self):
        """Reduced row echelon form with a recorded row transform.

        Returns (R, pivots, T) with T invertible and T * self == R exactly.
        """
        R = self.copy()
        T = Mat.identity(self.rows)
        pivots = []
        r = 0
        for c in range(self.cols):
            pivot = None
            for i in range(r, self.rows):
                if R.a[i][c]:
                    pivot = i
                    break
            if pivot is None:
                continue
            if pivot != r:
                R.a[r], R.a[pivot] = R.a[pivot], R.a[r]
                T.a[r], T.a[pivot] = T.a[pivot], T.a[r]
            inv = 1 / R.a[r][c]
            R.a[r] = [x * inv for x in R.a[r]]
            T.a[r] = [x * inv for x in T.a[r]]
            for i in range(self.rows):
                if i != r and R.a[i][c]:
                    f = R.a[i][c]
                    R.a[i] = [x - f * y for x, y in zip(R.a[i], R.a[r])]
                    T.a[i] = [x - f * y for x, y in zip(T.a[i], T.a[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return R, pivots, T

    def rank(self) -> int:
        _, pivots, _ = self.rref()
        return len(pivots)

    def inv(self) -> "Mat":
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        R, pivots, T = self.rref()
        if len(pivots) != self.rows:
            raise ValueError("matrix is singular")
        return T

    def kernel_basis(self) -> list["Mat"]:
        """Basis of the right kernel, as column vectors."""
        R, pivots, _ = self.rref()
        free = [j for j in range(self.cols) if j not in pivots]
        basis = []
        for f in free:
            v = Mat(self.cols, 1)
            v.a[f][0] = Fraction(1)
            for r, p in enumerate(pivots):
                v.a[p][0] = -R.a[r][f]
            basis.append(v)
        return basis

    def solve(self, b: "Mat") -> Optional["Mat"]:
        """One exact solution x of self * x = b, or None if inconsistent."""
        aug = Mat(self.rows, self.cols + b.cols)
        for i in range(self.rows):
            aug.a[i][: self.cols] = self.a[i][:]
            aug.a[i][self.cols :] = b.a[i][:]
        R, pivots, _ = aug.rref()
        for r, p in enumerate(pivots):
            if p >= self.cols:
                return None
        x = Mat(self.cols, b.cols)
        for r, p in enumerate(pivots):
            x.a[p] = R.a[r][self.cols :]
        return x

    def hstack(self, other: "Mat") -> "Mat":
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        m = Mat(self.rows, self.cols + other.cols)
        for i in range(self.rows):
            m.a[i] = self.a[i] + other.a[i]
        return m

    def vstack(self, other: "Mat") -> "Mat":
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        m = Mat(self.rows + other.rows, self.cols)
        m.a = [r[:] for r in self.a] + [r[:] for r in other.a]
        return m

    def submatrix(self, row0: int, col0: int, rows: int, cols: int) -> "Mat":
        m = Mat(rows, cols)
        m.a = [self.a[row0 + i][col0 : col0 + cols] for i in range(rows)]
        return m

    def to_lists(self):
        return [[x for x in row] for row in self.a]


def block_matrix(blocks: Sequence[Sequence[Mat]]) -> Mat:
    """Assemble a matrix from a grid of blocks with consistent sizes."""
    row_sizes = [row[0].rows for row in blocks]
    col_sizes = [b.cols for b in blocks[0]]
    out = Mat(sum(row_sizes), sum(col_sizes))
    r0 = 0
    for bi, row in enumerate(blocks):
        c0 = 0
        for bj, b in enumerate(row):
            if b.rows != row_sizes[bi] or b.cols != col_sizes[bj]:
                raise ValueError("inconsistent block sizes")
            for i in range(b.rows):
                out.a[r0 + i][c0 : c0 + b.cols] = b.a[i][:]
            c0 += b.cols
        r0 += row_sizes[bi]
    return out


def leading_entry(m: Mat):
    return m.leading_entry()


def normalized_basis(span: Iterable[Mat]) -> list[Mat]:
    """Normalized basis of the span of the given matrices.

    The result U_1, ..., U_r satisfies: each leading entry is 1; the leading
    position of U_i is zero in every U_j with j != i; and the list is ordered
    by leading positions.  It is the unique such basis of the span, obtained
    by row-reducing coordinate vectors over the position-ordered variables.
    """
    mats = [m for m in span]
    if not mats:
        return []
    rows, cols = mats[0].rows, mats[0].cols
    for m in mats:
        if (m.rows, m.cols) != (rows, cols):
            raise ValueError("matrices in a span must share one shape")
    positions = sorted(
        ((i, j) for i in range(rows) for j in range(cols)), key=position_key
    )
    index = {p: k for k, p in enumerate(positions)}
    coords = Mat(len(mats), len(positions))
    for r, m in enumerate(mats):
        for i in range(rows):
            for j in range(cols):
                if m.a[i][j]:
                    coords.a[r][index[(i, j)]] = m.a[i][j]
    R, pivots, _ = coords.rref()
    basis = []
    for r, _p in enumerate(pivots):
        m = Mat(rows, cols)
        for k, val in enumerate(R.a[r]):
            if val:
                i, j = positions[k]
                m.a[i][j] = val
        basis.append(m)
    return basis


def random_invertible(n: int, rng, lo: int = -2, hi: int = 2) -> Mat:
    """Random invertible integer matrix, by rejection."""
    while True:
        m = Mat(n, n, [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])
        if m.rank() == n:
            return m
