"""A small exact matrix type over ``int`` / ``Fraction``.

Lists of lists lose their column count when they have no rows, and the
group calculus is full of maps out of or into the zero group, so the shape
is stored explicitly.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


class Mat:
    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, nrows: int | None = None, ncols: int | None = None):
        rows = [list(r) for r in rows]
        if nrows is None:
            nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise ValueError(f"ragged matrix, expected {nrows}x{ncols}")
        self.rows = rows
        self.nrows = nrows
        self.ncols = ncols

    # construction

    @classmethod
    def zeros(cls, n, m):
        return cls([[0] * m for _ in range(n)], n, m)

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_cols(cls, cols, nrows):
        cols = [list(c) for c in cols]
        return cls([[c[i] for c in cols] for i in range(nrows)], nrows, len(cols))

    @classmethod
    def diag(cls, entries):
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def column(cls, vec):
        return cls([[v] for v in vec], len(vec), 1)

    # access

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j):
        return [r[j] for r in self.rows]

    def cols(self):
        return [self.col(j) for j in range(self.ncols)]

    def row(self, i):
        return list(self.rows[i])

    def tolist(self):
        return [list(r) for r in self.rows]

    def copy(self):
        return Mat(self.rows, self.nrows, self.ncols)

    def submatrix(self, rows, cols):
        rows, cols = list(rows), list(cols)
        return Mat([[self.rows[i][j] for j in cols] for i in rows], len(rows), len(cols))

    def take_cols(self, cols):
        return self.submatrix(range(self.nrows), cols)

    def take_rows(self, rows):
        return self.submatrix(rows, range(self.ncols))

    # algebra

    @property
    def T(self):
        return Mat([[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
                   self.ncols, self.nrows)

    def __mul__(self, other):
        if isinstance(other, Mat):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} * {other.shape}")
            ocols = other.cols()
            return Mat([[sum(a * b for a, b in zip(r, c)) for c in ocols] for r in self.rows],
                       self.nrows, other.ncols)
        return Mat([[a * other for a in r] for r in self.rows], self.nrows, self.ncols)

    def __rmul__(self, k):
        return self * k

    def __add__(self, other):
        self._same_shape(other)
        return Mat([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                   self.nrows, self.ncols)

    def __sub__(self, other):
        self._same_shape(other)
        return Mat([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                   self.nrows, self.ncols)

    def __neg__(self):
        return self * -1

    def __eq__(self, other):
        return isinstance(other, Mat) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.nrows, self.ncols, tuple(map(tuple, self.rows))))

    def __repr__(self):
        return f"Mat({self.rows!r}, {self.nrows}, {self.ncols})"

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def apply(self, vec):
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return [sum(a * b for a, b in zip(r, vec)) for r in self.rows]

    def hstack(self, *others):
        out = self
        for o in others:
            if o.nrows != out.nrows:
                raise ValueError("hstack row mismatch")
            out = Mat([r + s for r, s in zip(out.rows, o.rows)], out.nrows, out.ncols + o.ncols)
        return out

    def vstack(self, *others):
        out = self
        for o in others:
            if o.ncols != out.ncols:
                raise ValueError("vstack column mismatch")
            out = Mat(out.rows + o.rows, out.nrows + o.nrows, out.ncols)
        return out

    def is_zero(self):
        return all(a == 0 for r in self.rows for a in r)

    def max_abs(self):
        return max((abs(a) for r in self.rows for a in r), default=0)

    def det(self):
        if self.nrows != self.ncols:
            raise ValueError("det of non-square matrix")
        if all(isinstance(a, int) for r in self.rows for a in r):
            return bareiss_det(self.rows)
        d = common_denominator(self)
        return Fraction(bareiss_det((self * d).to_int().rows), d ** self.nrows)

    def to_int(self):
        out = []
        for r in self.rows:
            row = []
            for a in r:
                if isinstance(a, Fraction):
                    if a.denominator != 1:
                        raise ValueError("matrix is not integral")
                    a = a.numerator
                row.append(int(a))
            out.append(row)
        return Mat(out, self.nrows, self.ncols)

    def inverse(self):
        """Exact inverse over the rationals (entries become Fractions)."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("inverse of non-square matrix")
        aug = [[Fraction(a) for a in r] + [Fraction(int(i == j)) for j in range(n)]
               for i, r in enumerate(self.rows)]
        for c in range(n):
            piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            aug[c], aug[piv] = aug[piv], aug[c]
            inv = 1 / aug[c][c]
            aug[c] = [a * inv for a in aug[c]]
            for i in range(n):
                if i != c and aug[i][c] != 0:
                    f = aug[i][c]
                    aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
        return Mat([r[n:] for r in aug], n, n)

    def trace(self):
        return sum(self.rows[i][i] for i in range(self.nrows))


def bareiss_det(rows) -> int:
    """Fraction-free determinant of a square integer matrix."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def common_denominator(m: Mat) -> int:
    d = 1
    for r in m.rows:
        for a in r:
            if isinstance(a, Fraction):
                d = lcm(d, a.denominator)
    return d


def content(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g


def block_diag(*mats):
    n = sum(m.nrows for m in mats)
    k = sum(m.ncols for m in mats)
    out = Mat.zeros(n, k)
    r0 = c0 = 0
    for m in mats:
        for i in range(m.nrows):
            for j in range(m.ncols):
                out.rows[r0 + i][c0 + j] = m.rows[i][j]
        r0 += m.nrows
        c0 += m.ncols
    return out


def kron(a: Mat, b: Mat) -> Mat:
    rows = []
    for ra in a.rows:
        for rb in b.rows:
            rows.append([x * y for x in ra for y in rb])
    return Mat(rows, a.nrows * b.nrows, a.ncols * b.ncols)


def mat_pow_mod(m: Mat, k: int, n: int) -> Mat:
    """``m**k`` with entries reduced mod n, by square-and-multiply."""
    result = Mat([[int(i == j) % n for j in range(m.ncols)] for i in range(m.nrows)], m.nrows, m.ncols)
    base = Mat([[a % n for a in r] for r in m.rows], m.nrows, m.ncols)
    while k:
        if k & 1:
            result = reduce_mod(result * base, n)
        base = reduce_mod(base * base, n)
        k >>= 1
    return result


def reduce_mod(m: Mat, n: int) -> Mat:
    return Mat([[a % n for a in r] for r in m.rows], m.nrows, m.ncols)


def triangular_adjugate(H: Mat) -> tuple[Mat, int]:
    """(adj, det) for an upper-triangular integer matrix, with adj = det * H^-1."""
    n = H.nrows
    det = 1
    for i in range(n):
        det *= H.rows[i][i]
    X = [[0] * n for _ in range(n)]
    for j in range(n):
        for i in range(j, -1, -1):
            s = det if i == j else 0
            row = H.rows[i]
            for k in range(i + 1, j + 1):
                if row[k]:
                    s -= row[k] * X[k][j]
            q, r = divmod(s, row[i])
            assert r == 0
            X[i][j] = q
    return Mat(X, n, n), det
