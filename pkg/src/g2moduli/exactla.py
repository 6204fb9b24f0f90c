"""Dense linear algebra over the rationals.

Every quantity is exact: entries are :class:`fractions.Fraction`, ranks and
determinants come from fraction-free (Bareiss) elimination on integer rows,
and kernels from Gauss-Jordan reduction over ``Fraction``.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Sequence

Rational = Fraction

__all__ = [
    "Definiteness",
    "Rational",
    "RationalMatrix",
    "as_rational",
    "determinant",
    "is_definite",
    "kernel_basis",
    "rank",
    "rank_mod_p",
]

# Mersenne prime below 2**31, so products of two residues fit in int64
PRIME = 2**31 - 1


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and strings like ``"6/5"`` to a Fraction.

    Floats are refused: they would smuggle rounding into exact code.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational number")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, float):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class RationalMatrix:
    """Immutable dense matrix with Fraction entries, stored row-major."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(as_rational(e) for e in entries)
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self._entries = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, (e for r in rows for e in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "RationalMatrix":
        columns = [list(c) for c in columns]
        if any(len(c) != rows for c in columns):
            raise ValueError("ragged columns")
        return cls(rows, len(columns), (columns[j][i] for i in range(rows) for j in range(len(columns))))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "RationalMatrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def diag(cls, values: Sequence) -> "RationalMatrix":
        n = len(values)
        return cls(n, n, (values[i] if i == j else 0 for i in range(n) for j in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(idx)
        return self._entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return self._entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def entries(self) -> tuple[Fraction, ...]:
        return self._entries

    def __iter__(self) -> Iterator[tuple[Fraction, ...]]:
        return (self.row(i) for i in range(self.rows))

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows,
                              (self[i, j] for j in range(self.cols) for i in range(self.rows)))

    T = property(transpose)

    def trace(self) -> Fraction:
        if not self.is_square:
            raise ValueError("trace of a non-square matrix")
        return sum((self[i, i] for i in range(self.rows)), Fraction(0))

    def is_zero(self) -> bool:
        return not any(self._entries)

    def is_symmetric(self) -> bool:
        if not self.is_square:
            return False
        return all(self[i, j] == self[j, i] for i in range(self.rows) for j in range(i + 1, self.cols))

    def _check_same_shape(self, other: "RationalMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_same_shape(other)
        return RationalMatrix(self.rows, self.cols, (a + b for a, b in zip(self._entries, other._entries)))

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_same_shape(other)
        return RationalMatrix(self.rows, self.cols, (a - b for a, b in zip(self._entries, other._entries)))

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix(self.rows, self.cols, (-a for a in self._entries))

    def scale(self, c) -> "RationalMatrix":
        c = as_rational(c)
        return RationalMatrix(self.rows, self.cols, (c * a for a in self._entries))

    def __mul__(self, c) -> "RationalMatrix":
        if isinstance(c, RationalMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            ocols = [other.column(j) for j in range(other.cols)]
            out = []
            for i in range(self.rows):
                r = self.row(i)
                for c in ocols:
                    out.append(sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)))
            return RationalMatrix(self.rows, other.cols, out)
        vec = [as_rational(x) for x in other]
        if len(vec) != self.cols:
            raise ValueError(f"cannot apply {self.shape} matrix to a vector of length {len(vec)}")
        return tuple(sum((a * b for a, b in zip(self.row(i), vec) if a and b), Fraction(0))
                     for i in range(self.rows))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._entries))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"RationalMatrix({self.rows}x{self.cols}: [{body}])"

    def to_float(self):
        import numpy as np

        return np.array([[float(x) for x in self.row(i)] for i in range(self.rows)], dtype=float)


def _integer_rows(m: RationalMatrix) -> tuple[list[list[int]], list[int]]:
    """Clear denominators row by row; returns integer rows and the row multipliers."""
    rows, scales = [], []
    for i in range(m.rows):
        r = m.row(i)
        s = lcm(*(x.denominator for x in r)) if r else 1
        rows.append([int(x * s) for x in r])
        scales.append(s)
    return rows, scales


def _bareiss(a: list[list[int]]) -> tuple[int, int]:
    """In-place fraction-free elimination of integer rows.

    Returns ``(rank, sign * last_pivot)``; for a square non-singular input the
    second value is the determinant.
    """
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    prev = 1
    sign = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
            sign = -sign
        p = a[r][c]
        prow = a[r]
        for i in range(r + 1, nrows):
            row = a[i]
            f = row[c]
            for j in range(c + 1, ncols):
                row[j] = (p * row[j] - f * prow[j]) // prev
            row[c] = 0
        prev = p
        r += 1
    return r, sign * prev


def rank(m: RationalMatrix) -> int:
    """Rank over the rationals."""
    if m.rows == 0 or m.cols == 0:
        return 0
    rows, _ = _integer_rows(m)
    if m.rows > m.cols:
        # eliminate along the shorter side
        rows = [list(col) for col in zip(*rows)]
    return _bareiss(rows)[0]


def to_residues(m: RationalMatrix, p: int = PRIME):
    """Entries reduced mod p as an int64 array; raises if p divides a denominator."""
    import numpy as np

    out = np.empty((m.rows, m.cols), dtype=np.int64)
    for i in range(m.rows):
        for j, x in enumerate(m.row(i)):
            den = x.denominator % p
            if den == 0:
                raise ZeroDivisionError(f"{p} divides the denominator of {x}")
            out[i, j] = x.numerator * pow(den, -1, p) % p
    return out


def rank_mod_p(a, p: int = PRIME) -> int:
    """Rank of an integer array over GF(p); never exceeds the rank over Q."""
    import numpy as np

    a = np.array(a, dtype=np.int64) % p
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = a[r] * inv % p
        below = a[r + 1:, c].copy()
        if below.any():
            a[r + 1:] = (a[r + 1:] - below[:, None] * a[r]) % p
        r += 1
    return r


def determinant(m: RationalMatrix) -> Fraction:
    if not m.is_square:
        raise ValueError(f"determinant of a non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    if n == 0:
        return Fraction(1)
    rows, scales = _integer_rows(m)
    r, d = _bareiss(rows)
    if r < n:
        return Fraction(0)
    denom = 1
    for s in scales:
        denom *= s
    return Fraction(d, denom)


def rref(m: RationalMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Fraction; returns (rows, pivot columns)."""
    a = m.to_rows()
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        piv = next((i for i in range(r, m.rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        if p != 1:
            a[r] = [x / p for x in a[r]]
        prow = a[r]
        for i in range(m.rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], prow)]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def kernel_basis(m: RationalMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel, one vector per free column of the RREF."""
    if m.rows == 0:
        return [tuple(Fraction(int(i == j)) for i in range(m.cols)) for j in range(m.cols)]
    red, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * m.cols
        v[free] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[free]
        basis.append(tuple(v))
    return basis


class Definiteness(enum.Enum):
    POSITIVE_DEFINITE = "PositiveDefinite"
    NEGATIVE_DEFINITE = "NegativeDefinite"
    INDEFINITE = "Indefinite"
    DEGENERATE = "Degenerate"


def leading_minors(s: RationalMatrix) -> list[Fraction]:
    n = s.rows
    return [determinant(RationalMatrix(k, k, (s[i, j] for i in range(k) for j in range(k))))
            for k in range(1, n + 1)]


def is_definite(s: RationalMatrix) -> Definiteness:
    """Classify a symmetric matrix by Sylvester's criterion."""
    if not s.is_symmetric():
        raise ValueError("is_definite requires an exactly symmetric matrix")
    minors = leading_minors(s)
    if not minors or minors[-1] == 0:
        return Definiteness.DEGENERATE
    if all(d > 0 for d in minors):
        return Definiteness.POSITIVE_DEFINITE
    # -s has k-th leading minor (-1)^k d_k
    if all((d < 0) if k % 2 == 0 else (d > 0) for k, d in enumerate(minors)):
        return Definiteness.NEGATIVE_DEFINITE
    return Definiteness.INDEFINITE
