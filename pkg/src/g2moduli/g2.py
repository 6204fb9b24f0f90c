"""G2-structures on 7-dimensional Lie algebras.

Positivity of 3-forms, the induced metric, 4-forms built from SU(3) data,
the action of derivations on forms, stabilizer dimensions and the search for
a principal orbit by perturbation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd, lcm
from typing import Sequence

import numpy as np

from .exactla import (
    Definiteness,
    RationalMatrix,
    as_rational,
    determinant,
    is_definite,
    PRIME,
    kernel_basis,
    rank,
    rank_mod_p,
    to_residues,
)
from .exterior import KForm, Vector, basis_index, basis_tuples, contract, sort_sign, wedge
from .liealg import DerivationSpace, LieAlgebra, coboundary_matrix, derivation_space, matrix_bracket

__all__ = [
    "G2FourForm",
    "G2ThreeForm",
    "ModuliReport",
    "SU3Data",
    "StabilizerResult",
    "StabilizerSystem",
    "bilinear_b",
    "build_psi_su3",
    "derivation_action",
    "is_positive_3form",
    "metric_approx",
    "moduli_dimension",
    "principal_orbit_search",
    "purely_coclosed_indicator",
    "stabilizer_dimension",
    "stabilizer_is_abelian",
    "standard_phi",
    "standard_psi",
]

DIM = 7
TOP = tuple(range(1, DIM + 1))

DEFAULT_EPSILON = Fraction(1, 10)
DEFAULT_MAX_COEFF = 1
DEFAULT_TRIALS = 2000
DEFAULT_SEED = 0


def standard_phi() -> KForm:
    """e^127 + e^347 + e^567 + e^135 - e^236 - e^146 - e^245."""
    return KForm.from_unsorted(DIM, 3, [
        ((1, 2, 7), 1), ((3, 4, 7), 1), ((5, 6, 7), 1), ((1, 3, 5), 1),
        ((2, 3, 6), -1), ((1, 4, 6), -1), ((2, 4, 5), -1),
    ])


def standard_psi() -> KForm:
    """The 4-form of the abelian row of the coclosed tables."""
    return KForm.from_unsorted(DIM, 4, [
        ((1, 2, 3, 4), 1), ((1, 2, 5, 6), 1), ((1, 3, 6, 7), 1), ((1, 4, 5, 7), 1),
        ((2, 3, 5, 7), 1), ((2, 4, 6, 7), -1), ((3, 4, 5, 6), 1),
    ])


def _require_dim7(form: KForm, degree: int | None = None) -> None:
    if form.ambient_dim != DIM:
        raise ValueError(f"expected a form on a 7-dimensional space, got dimension {form.ambient_dim}")
    if degree is not None and form.degree != degree:
        raise ValueError(f"expected a {degree}-form, got degree {form.degree}")


def bilinear_b(phi: KForm) -> RationalMatrix:
    """b_ij = coefficient of e^1234567 in (i_{e_i} phi) ^ (i_{e_j} phi) ^ phi."""
    _require_dim7(phi, 3)
    contractions = [contract(Vector.basis(DIM, i), phi) for i in range(1, DIM + 1)]
    b = [[Fraction(0)] * DIM for _ in range(DIM)]
    for i in range(DIM):
        left = wedge(contractions[i], phi)
        for j in range(i, DIM):
            v = wedge(contractions[j], left).coefficient(TOP)
            b[i][j] = b[j][i] = v
    return RationalMatrix.from_rows(b)


def is_positive_3form(phi: KForm) -> bool:
    """Definite b, either sign; a negative definite b is positive for the other orientation."""
    return is_definite(bilinear_b(phi)) in (Definiteness.POSITIVE_DEFINITE, Definiteness.NEGATIVE_DEFINITE)


def metric_approx(phi: KForm) -> np.ndarray:
    """Floating point metric g with 6 g(X, Y) vol = i_X phi ^ i_Y phi ^ phi."""
    b = bilinear_b(phi)
    kind = is_definite(b)
    if kind == Definiteness.NEGATIVE_DEFINITE:
        b = -b
    elif kind != Definiteness.POSITIVE_DEFINITE:
        raise ValueError(f"3-form is not positive: its bilinear form is {kind.value}")
    det_b = determinant(b)
    # det b = 6^7 det(g)^(9/2); take the root of the exact ratio in floating point once
    scale = 6.0 * math.exp(math.log(det_b / Fraction(6) ** 7) / 9.0)
    return b.to_float() / scale


@dataclass(frozen=True)
class G2ThreeForm:
    form: KForm
    b_matrix: RationalMatrix = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _require_dim7(self.form, 3)
        b = bilinear_b(self.form)
        kind = is_definite(b)
        if kind not in (Definiteness.POSITIVE_DEFINITE, Definiteness.NEGATIVE_DEFINITE):
            raise ValueError(f"not a positive 3-form: b is {kind.value}")
        object.__setattr__(self, "b_matrix", b)

    @property
    def orientation(self) -> int:
        return 1 if is_definite(self.b_matrix) == Definiteness.POSITIVE_DEFINITE else -1

    def metric(self) -> np.ndarray:
        return metric_approx(self.form)


@dataclass(frozen=True)
class SU3Data:
    omega: KForm
    psi_minus: KForm
    eta: KForm


@dataclass(frozen=True)
class G2FourForm:
    """A closed 4-form taken as G2-inducing; positivity is not checked."""

    form: KForm
    provenance: SU3Data | None = None

    def __post_init__(self):
        _require_dim7(self.form, 4)
        if self.provenance is not None:
            p = self.provenance
            if self.form != _psi_from_su3(p.omega, p.psi_minus, p.eta):
                raise ValueError("form does not equal omega^2/2 + psi_minus ^ eta")


def _psi_from_su3(omega: KForm, psi_minus: KForm, eta: KForm) -> KForm:
    for f, deg in ((omega, 2), (psi_minus, 3), (eta, 1)):
        _require_dim7(f, deg)
    return wedge(omega, omega) * Fraction(1, 2) + wedge(psi_minus, eta)


def build_psi_su3(omega: KForm, psi_minus: KForm, eta: KForm) -> G2FourForm:
    """psi = omega^2 / 2 + psi_minus ^ eta."""
    return G2FourForm(_psi_from_su3(omega, psi_minus, eta), SU3Data(omega, psi_minus, eta))


def purely_coclosed_indicator(phi: KForm, g: LieAlgebra) -> bool:
    """True iff phi ^ d(phi) = 0, which is tau_0 = 0."""
    _require_dim7(phi, 3)
    return wedge(phi, g.d(phi)).is_zero()


def derivation_action(d: RationalMatrix, alpha: KForm) -> KForm:
    """(D.alpha)(v1, ..., vk) = -sum_i alpha(v1, ..., D vi, ..., vk).

    On coefficients, each e^i in a monomial is replaced by -e^i o D, where
    e^i o D = sum_j D[i, j] e^j.
    """
    n = alpha.ambient_dim
    if d.shape != (n, n):
        raise ValueError(f"{d.shape} matrix cannot act on forms over dimension {n}")
    rows = [[(j + 1, d[i, j]) for j in range(n) if d[i, j]] for i in range(n)]
    acc: dict[tuple[int, ...], Fraction] = {}
    for key, c in alpha.items():
        for pos, i in enumerate(key):
            for j, dij in rows[i - 1]:
                s, skey = sort_sign(key[:pos] + (j,) + key[pos + 1:])
                if s:
                    acc[skey] = acc.get(skey, Fraction(0)) - s * c * dij
    return KForm(n, alpha.degree, acc)


@dataclass(frozen=True)
class StabilizerResult:
    dimension: int
    basis: tuple[RationalMatrix, ...]


class StabilizerSystem:
    """Der(g) acting on k-forms, precomputed for repeated stabilizer queries.

    For each derivation basis element D_m the images D_m . e^I of the
    monomials are cached, so the stabilizer of any k-form reduces to one
    kernel computation over the Der-coefficients.
    """

    def __init__(self, der: DerivationSpace, degree: int):
        self.der = der
        self.degree = degree
        n = der.algebra.dim
        self.n = n
        self.index = basis_index(n, degree)
        self.size = comb(n, degree)
        self._images = [
            {t: derivation_action(dm, KForm(n, degree, {t: 1})).to_vector() for t in basis_tuples(n, degree)}
            for dm in der.basis
        ]

    def matrix(self, alpha: KForm) -> RationalMatrix:
        """Columns D_m . alpha, one per derivation basis element."""
        if alpha.degree != self.degree or alpha.ambient_dim != self.n:
            raise ValueError("form does not match the precomputed degree/dimension")
        cols = []
        for images in self._images:
            col = [Fraction(0)] * self.size
            for t, c in alpha.items():
                for r, v in enumerate(images[t]):
                    if v:
                        col[r] += c * v
            cols.append(col)
        return RationalMatrix.from_columns(cols, self.size)

    def dimension(self, alpha: KForm) -> int:
        if not self.der.basis:
            return 0
        return self.der.dim - rank(self.matrix(alpha))

    def solve(self, alpha: KForm) -> StabilizerResult:
        if not self.der.basis:
            return StabilizerResult(0, ())
        coeffs = kernel_basis(self.matrix(alpha))
        return StabilizerResult(len(coeffs), tuple(self.der.combination(c) for c in coeffs))


def stabilizer_dimension(g: LieAlgebra, alpha: KForm, der: DerivationSpace | None = None) -> StabilizerResult:
    """Der(g)_alpha = {D in Der(g) | D . alpha = 0}, solved in Der-coefficients."""
    if alpha.ambient_dim != g.dim:
        raise ValueError("form and algebra have different dimensions")
    der = der if der is not None else derivation_space(g)
    return StabilizerSystem(der, alpha.degree).solve(alpha)


def stabilizer_is_abelian(s: StabilizerResult) -> bool:
    return all(matrix_bracket(a, b).is_zero() for i, a in enumerate(s.basis) for b in s.basis[i + 1:])


def moduli_dimension(dim_v: int, dim_aut: int, stab: int) -> int:
    """dim V - (dim Aut - dim stabilizer)."""
    if stab > dim_aut:
        raise ValueError(f"stabilizer dimension {stab} exceeds dim Aut = {dim_aut}")
    value = dim_v - dim_aut + stab
    if value < 0:
        raise ValueError(f"negative moduli dimension: {dim_v} - {dim_aut} + {stab}")
    return value


@dataclass(frozen=True)
class ModuliReport:
    name: str
    kind: str  # "closed" or "coclosed"
    dim_V: int
    dim_aut: int
    stab_given: int
    stab_best: int
    best_perturbation: KForm | None
    moduli_dim: int
    is_upper_bound_only: bool
    epsilon: Fraction | None = None
    perturbation_source: str | None = None  # "published" or "random"
    trials_run: int = 0
    stab_lower_bound: int = 0
    published_stabs: tuple[int | None, ...] = ()

    def to_dict(self) -> dict:
        from .notation import render_form

        return {
            "name": self.name,
            "kind": self.kind,
            "dim_V": self.dim_V,
            "dim_aut": self.dim_aut,
            "stab_given": self.stab_given,
            "stab_best": self.stab_best,
            "best_perturbation": None if self.best_perturbation is None else render_form(self.best_perturbation),
            "epsilon": None if self.epsilon is None else str(self.epsilon),
            "perturbation_source": self.perturbation_source,
            "moduli_dim": self.moduli_dim,
            "is_upper_bound_only": self.is_upper_bound_only,
            "stab_lower_bound": self.stab_lower_bound,
            "trials_run": self.trials_run,
            "published_stabs": list(self.published_stabs),
        }


def _primitive_integer(v: Sequence[Fraction]) -> tuple[int, ...]:
    m = lcm(*(x.denominator for x in v))
    ints = [int(x * m) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def _kind_of(alpha: KForm) -> str:
    if alpha.degree == 3:
        return "closed"
    if alpha.degree == 4:
        return "coclosed"
    raise ValueError(f"only 3-forms and 4-forms carry G2-structures, got degree {alpha.degree}")


def principal_orbit_search(
    g: LieAlgebra,
    alpha: KForm,
    epsilon=DEFAULT_EPSILON,
    max_coeff: int = DEFAULT_MAX_COEFF,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    perturbations: Sequence[KForm] = (),
    name: str = "",
    der: DerivationSpace | None = None,
) -> ModuliReport:
    """Look for a closed perturbation alpha + epsilon*beta with smaller stabilizer.

    Published directions in ``perturbations`` are tried first, then ``trials``
    random integer combinations of a basis of closed k-forms with coefficients
    in [-max_coeff, max_coeff], drawn from ``numpy.random.default_rng(seed)``.
    For 3-forms each candidate must be positive. The best candidate minimizes
    (stabilizer dimension, trial position), published ones first; the search
    stops once the orbit-dimension lower bound max(0, dim Aut - dim Z^k) is hit,
    which also certifies the result.
    """
    kind = _kind_of(alpha)
    k = alpha.degree
    epsilon = as_rational(epsilon)
    if epsilon == 0:
        raise ValueError("epsilon must be nonzero")
    if max_coeff < 0 or trials < 0:
        raise ValueError("max_coeff and trials must be non-negative")
    if g.d(alpha):
        raise ValueError("the form is not closed")
    if k == 3 and not is_positive_3form(alpha):
        raise ValueError("the 3-form is not positive")

    der = der if der is not None else derivation_space(g)
    system = StabilizerSystem(der, k)
    dk = coboundary_matrix(g, k)
    closed_basis = [_primitive_integer(v) for v in kernel_basis(dk)]
    dim_v = len(closed_basis)
    dim_aut = der.dim
    lower = max(0, dim_aut - dim_v)

    stab_given = system.dimension(alpha)
    best = (stab_given, None, None)  # (stab, beta, source)

    def admissible(beta: KForm) -> bool:
        if g.d(beta):
            return False
        return k != 3 or is_positive_3form(alpha + beta * epsilon)

    published_stabs: list[int | None] = []
    for beta in perturbations:
        if beta.degree != k or not admissible(beta):
            published_stabs.append(None)
            continue
        s = system.dimension(alpha + beta * epsilon)
        published_stabs.append(s)
        if s < best[0]:
            best = (s, beta, "published")

    run = 0
    if best[0] > lower and closed_basis and der.basis:
        rng = np.random.default_rng(seed)
        tuples = basis_tuples(g.dim, k)
        # the stabilizer matrix is affine in the trial coefficients; a rank over
        # GF(p) never exceeds the rank over Q, so it bounds stab from above and
        # only candidates that could improve get the exact treatment
        base = to_residues(system.matrix(alpha))
        eps_p = epsilon.numerator * pow(epsilon.denominator, -1, PRIME) % PRIME
        dirs = np.stack([to_residues(system.matrix(KForm(g.dim, k, zip(tuples, z)))) * eps_p % PRIME
                         for z in closed_basis])
        for _ in range(trials):
            coeffs = rng.integers(-max_coeff, max_coeff + 1, size=len(closed_basis))
            run += 1
            if not coeffs.any():
                continue
            m = base
            for c, dz in zip(coeffs.tolist(), dirs):
                if c:
                    m = (m + (c % PRIME) * dz) % PRIME
            if der.dim - rank_mod_p(m) >= best[0]:
                continue
            vec = [0] * len(tuples)
            for c, z in zip(coeffs.tolist(), closed_basis):
                if c:
                    for r, zr in enumerate(z):
                        if zr:
                            vec[r] += c * zr
            beta = KForm(g.dim, k, zip(tuples, vec))
            cand = alpha + beta * epsilon
            if k == 3 and not is_positive_3form(cand):
                continue
            s = system.dimension(cand)
            if s < best[0]:
                best = (s, beta, "random")
                if s <= lower:
                    break

    stab_best, beta, source = best
    return ModuliReport(
        name=name,
        kind=kind,
        dim_V=dim_v,
        dim_aut=dim_aut,
        stab_given=stab_given,
        stab_best=stab_best,
        best_perturbation=beta,
        moduli_dim=moduli_dimension(dim_v, dim_aut, stab_best),
        is_upper_bound_only=stab_best > lower,
        epsilon=epsilon if beta is not None else None,
        perturbation_source=source,
        trials_run=run,
        stab_lower_bound=lower,
        published_stabs=tuple(published_stabs),
    )
