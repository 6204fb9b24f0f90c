"""Exterior algebra of (R^n)* with exact rational coefficients.

Indices are 1-based throughout, so ``KForm.monomial(7, (1, 2, 7))`` is
e^1 ^ e^2 ^ e^7. Monomials are keyed by strictly increasing tuples, and
:func:`basis_forms` fixes the lexicographic order used to turn forms into
coordinate vectors everywhere else in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence

from .exactla import as_rational

MAX_DIM = 9

__all__ = [
    "KForm",
    "Vector",
    "basis_forms",
    "basis_index",
    "basis_tuples",
    "contract",
    "evaluate",
    "from_coefficients",
    "sort_sign",
    "wedge",
]


def sort_sign(indices: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sort ``indices``; returns (sign of the sorting permutation, sorted tuple).

    Sign is 0 when an index repeats.
    """
    idx = list(indices)
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
        if j > 0 and idx[j - 1] == idx[j]:
            return 0, ()
    return sign, tuple(idx)


class KForm:
    """Alternating k-form on an n-dimensional space.

    ``terms`` maps strictly increasing 1-based index tuples to nonzero
    rationals. Instances are immutable and hashable. A degree above
    ``ambient_dim`` is allowed but then the form is necessarily zero.
    """

    __slots__ = ("ambient_dim", "degree", "_terms", "_hash")

    def __init__(self, ambient_dim: int, degree: int, terms: Mapping | Iterable = ()):
        if not 0 <= ambient_dim <= MAX_DIM:
            raise ValueError(f"ambient dimension must be in 0..{MAX_DIM}, got {ambient_dim}")
        if degree < 0:
            raise ValueError(f"negative degree {degree}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[tuple[int, ...], Fraction] = {}
        for key, coeff in items:
            key = tuple(key)
            if len(key) != degree:
                raise ValueError(f"monomial {key} does not have degree {degree}")
            if any(not 1 <= i <= ambient_dim for i in key):
                raise ValueError(f"index out of range 1..{ambient_dim} in {key}")
            if any(a >= b for a, b in zip(key, key[1:])):
                raise ValueError(f"monomial {key} is not strictly increasing")
            c = as_rational(coeff)
            if c:
                clean[key] = clean.get(key, Fraction(0)) + c
                if not clean[key]:
                    del clean[key]
        self.ambient_dim = ambient_dim
        self.degree = degree
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def zero(cls, ambient_dim: int, degree: int) -> "KForm":
        return cls(ambient_dim, degree)

    @classmethod
    def constant(cls, ambient_dim: int, c=1) -> "KForm":
        return cls(ambient_dim, 0, {(): c})

    @classmethod
    def monomial(cls, ambient_dim: int, indices: Sequence[int], coeff=1) -> "KForm":
        """e^{i1...ik}; unsorted indices are sorted with the permutation sign."""
        sign, key = sort_sign(indices)
        if sign == 0:
            return cls(ambient_dim, len(indices))
        return cls(ambient_dim, len(indices), {key: sign * as_rational(coeff)})

    @classmethod
    def from_unsorted(cls, ambient_dim: int, degree: int, items: Iterable) -> "KForm":
        """Build from (index sequence, coeff) pairs, sorting each with its sign."""
        acc: dict[tuple[int, ...], Fraction] = {}
        for key, coeff in items:
            sign, skey = sort_sign(key)
            if sign:
                acc[skey] = acc.get(skey, Fraction(0)) + sign * as_rational(coeff)
        return cls(ambient_dim, degree, acc)

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, indices: Sequence[int]) -> Fraction:
        sign, key = sort_sign(indices)
        if sign == 0:
            return Fraction(0)
        return sign * self._terms.get(key, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def _check_compatible(self, other: "KForm") -> None:
        if not isinstance(other, KForm):
            raise TypeError(f"expected KForm, got {type(other).__name__}")
        if other.ambient_dim != self.ambient_dim:
            raise ValueError(f"ambient dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}")
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: "KForm") -> "KForm":
        self._check_compatible(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, Fraction(0)) + c
        return KForm(self.ambient_dim, self.degree, acc)

    def __neg__(self) -> "KForm":
        return KForm(self.ambient_dim, self.degree, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def __mul__(self, c) -> "KForm":
        if isinstance(c, KForm):
            return NotImplemented
        c = as_rational(c)
        return KForm(self.ambient_dim, self.degree, {k: c * v for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other: "KForm") -> "KForm":
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, KForm):
            return NotImplemented
        return (self.ambient_dim, self.degree, self._terms) == (other.ambient_dim, other.degree, other._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ambient_dim, self.degree, tuple(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        from .notation import render_form

        return f"KForm({self.ambient_dim}, {self.degree}, {render_form(self)!r})"

    def to_vector(self) -> tuple[Fraction, ...]:
        """Coefficients in the order of :func:`basis_tuples`."""
        return tuple(self._terms.get(t, Fraction(0)) for t in basis_tuples(self.ambient_dim, self.degree))


@dataclass(frozen=True)
class Vector:
    components: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(as_rational(c) for c in self.components))

    @property
    def ambient_dim(self) -> int:
        return len(self.components)

    @classmethod
    def basis(cls, ambient_dim: int, i: int) -> "Vector":
        """The i-th standard basis vector e_i (1-based)."""
        if not 1 <= i <= ambient_dim:
            raise ValueError(f"basis index {i} out of range 1..{ambient_dim}")
        return cls(tuple(int(j == i) for j in range(1, ambient_dim + 1)))

    def __getitem__(self, i: int) -> Fraction:
        return self.components[i]

    def __len__(self) -> int:
        return len(self.components)


@lru_cache(maxsize=None)
def basis_tuples(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    if not 0 <= k <= n:
        raise ValueError(f"no basis of degree {k} in dimension {n}")
    return tuple(combinations(range(1, n + 1), k))


@lru_cache(maxsize=None)
def basis_index(n: int, k: int) -> dict[tuple[int, ...], int]:
    return {t: i for i, t in enumerate(basis_tuples(n, k))}


def basis_forms(n: int, k: int) -> list[KForm]:
    """All C(n, k) monomials e^{i1...ik} in lexicographic order."""
    return [KForm(n, k, {t: 1}) for t in basis_tuples(n, k)]


def from_coefficients(n: int, k: int, coeffs: Sequence) -> KForm:
    tuples = basis_tuples(n, k)
    if len(coeffs) != len(tuples):
        raise ValueError(f"expected {len(tuples)} coefficients, got {len(coeffs)}")
    return KForm(n, k, zip(tuples, coeffs))


def wedge(a: KForm, b: KForm) -> KForm:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(f"ambient dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}")
    n = a.ambient_dim
    deg = a.degree + b.degree
    if deg > n:
        # only the empty map has degree above the ambient dimension
        return KForm(n, deg)
    acc: dict[tuple[int, ...], Fraction] = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            sign, key = sort_sign(ka + kb)
            if sign:
                acc[key] = acc.get(key, Fraction(0)) + sign * ca * cb
    return KForm(n, deg, acc)


def contract(x: Vector | Sequence, a: KForm) -> KForm:
    """Interior product: (i_x a)(v2, ..., vk) = a(x, v2, ..., vk)."""
    comps = x.components if isinstance(x, Vector) else tuple(as_rational(c) for c in x)
    if len(comps) != a.ambient_dim:
        raise ValueError(f"vector of length {len(comps)} on a {a.ambient_dim}-dimensional space")
    if a.degree == 0:
        raise ValueError("cannot contract a 0-form")
    acc: dict[tuple[int, ...], Fraction] = {}
    for key, c in a.items():
        for pos, i in enumerate(key):
            xi = comps[i - 1]
            if xi:
                rest = key[:pos] + key[pos + 1:]
                v = c * xi if pos % 2 == 0 else -c * xi
                acc[rest] = acc.get(rest, Fraction(0)) + v
    return KForm(a.ambient_dim, a.degree - 1, acc)


def evaluate(a: KForm, vectors: Sequence[Vector | Sequence]) -> Fraction:
    """Value of ``a`` on k vectors, by the determinant expansion."""
    if len(vectors) != a.degree:
        raise ValueError(f"{a.degree}-form evaluated on {len(vectors)} vectors")
    vs = [v.components if isinstance(v, Vector) else tuple(as_rational(c) for c in v) for v in vectors]
    total = Fraction(0)
    k = a.degree
    perms = [(p, sort_sign(p)[0]) for p in permutations(range(k))]
    for key, c in a.items():
        det = Fraction(0)
        for p, sgn in perms:
            prod = Fraction(sgn)
            for row, col in enumerate(p):
                prod *= vs[col][key[row] - 1]
                if not prod:
                    break
            det += prod
        total += c * det
    return total
