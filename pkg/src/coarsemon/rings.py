"""Exact coefficient rings and dense matrices over them.

Three rings are supported: the integers, the integers modulo ``n`` and the
rationals.  Elements are Python ``int`` (reduced to ``0..n-1`` modulo ``n``)
or :class:`fractions.Fraction`; nothing is ever rounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ShapeError, ShapeMismatch


@dataclass(frozen=True)
class Ring:
    kind: str               # "int" | "mod" | "rat"
    n: int = 0

    def __post_init__(self):
        if self.kind not in ("int", "mod", "rat"):
            raise ShapeError(f"unknown ring kind {self.kind!r}")
        if self.kind == "mod" and self.n < 2:
            raise ShapeError("modulus must be at least 2")

    @property
    def name(self):
        return {"int": "Z", "rat": "Q"}.get(self.kind) or f"Z/{self.n}"

    def __str__(self):
        return self.name

    def coerce(self, x):
        if self.kind == "rat":
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ShapeError(f"{x} is not an integer")
            x = x.numerator
        x = int(x)
        return x % self.n if self.kind == "mod" else x

    def norm(self, x):
        """Fast normalization of a result of ring arithmetic on ring elements."""
        if self.kind == "int":
            return x
        if self.kind == "mod":
            return x % self.n
        return x if type(x) is Fraction else Fraction(x)

    def is_unit(self, x):
        if self.kind == "int":
            return x in (1, -1)
        if self.kind == "mod":
            return math.gcd(x, self.n) == 1
        return x != 0

    def inv(self, x):
        if not self.is_unit(x):
            raise ZeroDivisionError(f"{x} is not a unit of {self}")
        if self.kind == "int":
            return x
        if self.kind == "mod":
            return pow(x, -1, self.n)
        return 1 / Fraction(x)

    def units(self):
        """Small list of units used by random generators."""
        if self.kind == "int":
            return [1, -1]
        if self.kind == "mod":
            return [u for u in range(1, self.n) if math.gcd(u, self.n) == 1]
        return [Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2), Fraction(-3)]

    def random(self, rng, spread=2):
        if self.kind == "mod":
            return rng.randrange(self.n)
        v = rng.randint(-spread, spread)
        if self.kind == "rat" and rng.random() < 0.3:
            return Fraction(v, rng.choice([1, 2, 3]))
        return self.coerce(v)

    def to_json(self):
        return {"kind": self.kind, "n": self.n} if self.kind == "mod" else {"kind": self.kind}

    @classmethod
    def from_json(cls, d):
        if isinstance(d, str):
            return parse_ring(d)
        return cls(d["kind"], int(d.get("n", 0)))

    def elem_to_json(self, x):
        if self.kind == "rat":
            return str(x) if x.denominator != 1 else x.numerator
        return x

    def elem_from_json(self, v):
        return self.coerce(Fraction(v) if isinstance(v, str) else v)


INTEGERS = Ring("int")
RATIONALS = Ring("rat")


def integers_mod(n: int) -> Ring:
    return Ring("mod", n)


def parse_ring(text: str) -> Ring:
    """``"Z"``, ``"Q"``, ``"Z/5"`` (also ``"int"``, ``"rat"``, ``"mod5"``)."""
    t = text.strip()
    if t in ("Z", "int"):
        return INTEGERS
    if t in ("Q", "rat"):
        return RATIONALS
    for prefix in ("Z/", "mod"):
        if t.startswith(prefix) and t[len(prefix):].isdigit():
            return integers_mod(int(t[len(prefix):]))
    raise ShapeError(f"unknown ring {text!r}")


# ---------------------------------------------------------------- matrices

@dataclass(frozen=True)
class Matrix:
    """Dense ``rows x cols`` matrix, entries stored row-major."""

    ring: Ring
    rows: int
    cols: int
    data: tuple

    def __post_init__(self):
        if len(self.data) != self.rows * self.cols:
            raise ShapeMismatch(f"{len(self.data)} entries for a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, ring, rows, cols=None):
        rows = [list(r) for r in rows]
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        for r in rows:
            if len(r) != ncols:
                raise ShapeMismatch("ragged matrix rows")
        return cls(ring, len(rows), ncols, tuple(ring.coerce(v) for r in rows for v in r))

    @classmethod
    def zeros(cls, ring, rows, cols):
        z = ring.coerce(0)
        return cls(ring, rows, cols, (z,) * (rows * cols))

    @classmethod
    def identity(cls, ring, n):
        one, z = ring.coerce(1), ring.coerce(0)
        return cls(ring, n, n, tuple(one if i == j else z for i in range(n) for j in range(n)))

    @classmethod
    def scalar(cls, ring, n, c):
        z = ring.coerce(0)
        c = ring.coerce(c)
        return cls(ring, n, n, tuple(c if i == j else z for i in range(n) for j in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i * self.cols + j]

    def row_list(self):
        return [list(self.data[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def is_zero(self):
        return all(v == 0 for v in self.data)

    def _same_shape(self, other):
        if self.ring != other.ring or (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatch(f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def __add__(self, other):
        self._same_shape(other)
        c = self.ring.norm
        return Matrix(self.ring, self.rows, self.cols, tuple(c(a + b) for a, b in zip(self.data, other.data)))

    def __neg__(self):
        c = self.ring.norm
        return Matrix(self.ring, self.rows, self.cols, tuple(c(-a) for a in self.data))

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other):
        if self.ring != other.ring or self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        n, m, p = self.rows, self.cols, other.cols
        a, b = self.data, other.data
        norm = self.ring.norm
        zero = norm(0)
        cols = [b[j::p] for j in range(p)]
        out = []
        for i in range(n):
            nz = [(k, v) for k, v in enumerate(a[i * m:(i + 1) * m]) if v]
            if not nz:
                out.extend([zero] * p)
                continue
            for col in cols:
                out.append(norm(sum(v * col[k] for k, v in nz)))
        return Matrix(self.ring, n, p, tuple(out))

    def scale(self, s):
        c = self.ring.coerce
        return Matrix(self.ring, self.rows, self.cols, tuple(c(s * a) for a in self.data))

    def transpose(self):
        return Matrix(self.ring, self.cols, self.rows,
                      tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def kron(self, other):
        """Kronecker product, row index ``(i, k) -> i * other.rows + k``."""
        if self.ring != other.ring:
            raise ShapeMismatch("Kronecker product over different rings")
        c = self.ring.norm
        r, s = other.rows, other.cols
        b = other.data
        out = []
        for i in range(self.rows):
            row = self.data[i * self.cols:(i + 1) * self.cols]
            for k in range(r):
                brow = b[k * s:(k + 1) * s]
                for a in row:
                    out.extend([c(a * v) for v in brow])
        return Matrix(self.ring, self.rows * r, self.cols * s, tuple(out))

    def block(self, r0, r1, c0, c1):
        return Matrix(self.ring, r1 - r0, c1 - c0,
                      tuple(self[i, j] for i in range(r0, r1) for j in range(c0, c1)))

    def inverse(self):
        """Two-sided inverse over the ring, or ``None``."""
        if self.rows != self.cols:
            return None
        n = self.rows
        if n == 0:
            return self
        if self.ring.kind == "mod":
            ints = [[int(v) for v in r] for r in self.row_list()]
            det = _int_det(ints)
            if math.gcd(det, self.ring.n) != 1:
                return None
            qinv = _rational_inverse([[Fraction(v) for v in r] for r in ints])
            # adj = det * M^-1 is an integer matrix
            dinv = pow(det % self.ring.n, -1, self.ring.n)
            rows = [[self.ring.coerce((det * v).numerator * dinv) for v in r] for r in qinv]
            return Matrix.from_rows(self.ring, rows, n)
        qinv = _rational_inverse([[Fraction(v) for v in r] for r in self.row_list()])
        if qinv is None:
            return None
        if self.ring.kind == "int":
            if any(v.denominator != 1 for r in qinv for v in r):
                return None
        return Matrix.from_rows(self.ring, qinv, n)

    def to_json(self):
        e = self.ring.elem_to_json
        return {"rows": self.rows, "cols": self.cols, "data": [e(v) for v in self.data]}

    @classmethod
    def from_json(cls, ring, d):
        return cls(ring, int(d["rows"]), int(d["cols"]), tuple(ring.elem_from_json(v) for v in d["data"]))

    def __repr__(self):
        return f"Matrix[{self.ring}]({self.row_list()})"


def _rational_inverse(rows):
    n = len(rows)
    a = [r[:] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [r[n:] for r in a]


def _int_det(rows):
    """Determinant of an integer matrix (Bareiss fraction-free elimination)."""
    n = len(rows)
    a = [r[:] for r in rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]
