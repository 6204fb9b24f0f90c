"""Lie algebras given by structure equations.

A :class:`LieAlgebra` stores de^1, ..., de^n. The bracket is recovered with
the convention e^k([e_i, e_j]) = -de^k(e_i, e_j). Flipping that global sign
changes no rank, kernel or stabilizer dimension computed here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Sequence

from .exactla import RationalMatrix, kernel_basis, rank
from .exterior import KForm, basis_index, basis_tuples, sort_sign
from .notation import SalamonSpec, parse_salamon, render_salamon

__all__ = [
    "DerivationSpace",
    "JacobiError",
    "LieAlgebra",
    "betti",
    "closed_forms_dim",
    "coboundary_matrix",
    "derivation_space",
    "from_salamon",
    "is_unimodular",
    "matrix_bracket",
    "nilpotency_step",
]


class JacobiError(ValueError):
    """d^2 != 0 on a generator, i.e. the Jacobi identity fails."""

    def __init__(self, generator: int, value: KForm):
        self.generator = generator
        self.value = value
        super().__init__(f"d(de^{generator}) = {value!r} is nonzero; Jacobi identity fails")


class LieAlgebra:
    """Lie algebra determined by the differentials of a coframe e^1..e^n."""

    def __init__(self, d_one_forms: Sequence[KForm], validate: bool = True):
        forms = tuple(d_one_forms)
        n = len(forms)
        for k, f in enumerate(forms, 1):
            if f.ambient_dim != n or f.degree != 2:
                raise ValueError(f"de^{k} must be a 2-form on a {n}-dimensional space")
        self.dim = n
        self.d_one_forms = forms
        if validate:
            for k, f in enumerate(forms, 1):
                ddf = self.d(f)
                if ddf:
                    raise JacobiError(k, ddf)

    @classmethod
    def from_string(cls, text: str) -> "LieAlgebra":
        return from_salamon(parse_salamon(text))

    @classmethod
    def abelian(cls, n: int) -> "LieAlgebra":
        return cls([KForm(n, 2)] * n)

    def __repr__(self) -> str:
        return f"LieAlgebra({self.salamon()!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, LieAlgebra) and self.d_one_forms == other.d_one_forms

    def __hash__(self) -> int:
        return hash(self.d_one_forms)

    def salamon(self) -> str:
        return render_salamon(SalamonSpec(self.d_one_forms))

    @cached_property
    def structure_constants(self) -> tuple[tuple[tuple[Fraction, ...], ...], ...]:
        """``c[i][j][k]`` = e^k([e_i, e_j]) with 0-based i, j, k."""
        n = self.dim
        c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for k, f in enumerate(self.d_one_forms):
            for (i, j), v in f.items():
                c[i - 1][j - 1][k] = -v
                c[j - 1][i - 1][k] = v
        return tuple(tuple(tuple(row) for row in plane) for plane in c)

    def bracket(self, x: Sequence, y: Sequence) -> tuple[Fraction, ...]:
        c = self.structure_constants
        n = self.dim
        out = [Fraction(0)] * n
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j] or i == j:
                    continue
                xy = x[i] * y[j]
                cij = c[i][j]
                for k in range(n):
                    if cij[k]:
                        out[k] += xy * cij[k]
        return tuple(out)

    def ad(self, i: int) -> RationalMatrix:
        """Matrix of ad_{e_i} (1-based i) acting on column vectors."""
        c = self.structure_constants
        n = self.dim
        return RationalMatrix(n, n, (c[i - 1][j][k] for k in range(n) for j in range(n)))

    def d(self, form: KForm) -> KForm:
        """Chevalley-Eilenberg differential, extended as an anti-derivation."""
        if form.ambient_dim != self.dim:
            raise ValueError(f"form lives in dimension {form.ambient_dim}, algebra has {self.dim}")
        acc: dict[tuple[int, ...], Fraction] = {}
        for key, coeff in form.items():
            for pos, i in enumerate(key):
                sgn = coeff if pos % 2 == 0 else -coeff
                head, tail = key[:pos], key[pos + 1:]
                for pair, v in self.d_one_forms[i - 1].items():
                    s, skey = sort_sign(head + pair + tail)
                    if s:
                        acc[skey] = acc.get(skey, Fraction(0)) + s * sgn * v
        return KForm(self.dim, form.degree + 1, acc)


def from_salamon(spec: SalamonSpec | str) -> LieAlgebra:
    if isinstance(spec, str):
        spec = parse_salamon(spec)
    return LieAlgebra(spec.entries)


def coboundary_matrix(g: LieAlgebra, k: int) -> RationalMatrix:
    """Matrix of d: Lambda^k -> Lambda^{k+1} in the lexicographic monomial bases."""
    n = g.dim
    if not 0 <= k <= n:
        raise ValueError(f"degree {k} out of range 0..{n}")
    rows = comb(n, k + 1)
    src = basis_tuples(n, k)
    if k == n:
        return RationalMatrix(0, len(src), ())
    dst = basis_index(n, k + 1)
    cols = []
    for t in src:
        col = [Fraction(0)] * rows
        for key, v in g.d(KForm(n, k, {t: 1})).items():
            col[dst[key]] = v
        cols.append(col)
    return RationalMatrix.from_columns(cols, rows)


def _coboundary_rank(g: LieAlgebra, k: int) -> int:
    if k < 0 or k >= g.dim:
        return 0
    return rank(coboundary_matrix(g, k))


def closed_forms_dim(g: LieAlgebra, k: int) -> int:
    """dim Z^k = C(n, k) - rank(d_k)."""
    return comb(g.dim, k) - _coboundary_rank(g, k)


def betti(g: LieAlgebra, k: int) -> int:
    """dim H^k of the Chevalley-Eilenberg complex."""
    if not 0 <= k <= g.dim:
        return 0
    return closed_forms_dim(g, k) - _coboundary_rank(g, k - 1)


def _span_basis(vectors: list[tuple[Fraction, ...]], n: int) -> list[tuple[Fraction, ...]]:
    """Row-reduced basis of the span of ``vectors``."""
    from .exactla import rref

    if not vectors:
        return []
    red, _ = rref(RationalMatrix.from_rows(vectors, n))
    return [tuple(r) for r in red]


def nilpotency_step(g: LieAlgebra) -> int | None:
    """Smallest m with g_m = 0 in the lower central series, or None."""
    n = g.dim
    if n == 0:
        return 0
    current = [tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n)]
    gens = list(current)
    m = 0
    while current:
        nxt = _span_basis([g.bracket(x, y) for x in current for y in gens], n)
        m += 1
        if len(nxt) == len(current):
            # series stabilized at a nonzero ideal
            return None
        current = nxt
    return m


@dataclass(frozen=True)
class DerivationSpace:
    algebra: LieAlgebra
    basis: tuple[RationalMatrix, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def combination(self, coeffs: Sequence) -> RationalMatrix:
        n = self.algebra.dim
        out = RationalMatrix.zeros(n)
        for c, b in zip(coeffs, self.basis):
            if c:
                out = out + b.scale(c)
        return out


def derivation_equations(g: LieAlgebra) -> RationalMatrix:
    """Linear system in the n^2 entries of D (row-major) whose kernel is Der(g).

    One equation per pair i < j and component k:
    D[e_i, e_j] - [D e_i, e_j] - [e_i, D e_j] = 0, with D e_i the i-th column.
    """
    n = g.dim
    c = g.structure_constants
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                row = [Fraction(0)] * (n * n)
                # (D [e_i, e_j])_k = sum_m D[k][m] c[i][j][m]
                for m in range(n):
                    if c[i][j][m]:
                        row[k * n + m] += c[i][j][m]
                # ([D e_i, e_j])_k = sum_m D[m][i] c[m][j][k]
                for m in range(n):
                    if c[m][j][k]:
                        row[m * n + i] -= c[m][j][k]
                # ([e_i, D e_j])_k = sum_m D[m][j] c[i][m][k]
                for m in range(n):
                    if c[i][m][k]:
                        row[m * n + j] -= c[i][m][k]
                rows.append(row)
    return RationalMatrix.from_rows(rows, n * n) if rows else RationalMatrix(0, n * n, ())


def derivation_space(g: LieAlgebra) -> DerivationSpace:
    n = g.dim
    basis = tuple(RationalMatrix(n, n, v) for v in kernel_basis(derivation_equations(g)))
    return DerivationSpace(g, basis)


def is_derivation(g: LieAlgebra, d: RationalMatrix) -> bool:
    """Check D[x, y] = [Dx, y] + [x, Dy] on all generator pairs, directly."""
    n = g.dim
    cols = [d.column(i) for i in range(n)]
    for i in range(n):
        ei = tuple(Fraction(int(t == i)) for t in range(n))
        for j in range(i + 1, n):
            ej = tuple(Fraction(int(t == j)) for t in range(n))
            lhs = d @ g.bracket(ei, ej)
            rhs = [a + b for a, b in zip(g.bracket(cols[i], ej), g.bracket(ei, cols[j]))]
            if tuple(lhs) != tuple(rhs):
                return False
    return True


def is_unimodular(g: LieAlgebra) -> bool:
    return all(g.ad(i).trace() == 0 for i in range(1, g.dim + 1))


def matrix_bracket(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    if not (a.is_square and a.shape == b.shape):
        raise ValueError(f"cannot bracket {a.shape} with {b.shape}")
    return a @ b - b @ a
