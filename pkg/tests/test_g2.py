from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import der_of, entry
from g2moduli.exactla import Definiteness, RationalMatrix, is_definite, kernel_basis, rank
from g2moduli.exterior import KForm, Vector, evaluate
from g2moduli.g2 import (
    G2FourForm,
    G2ThreeForm,
    StabilizerSystem,
    bilinear_b,
    build_psi_su3,
    derivation_action,
    is_positive_3form,
    metric_approx,
    moduli_dimension,
    principal_orbit_search,
    purely_coclosed_indicator,
    stabilizer_dimension,
    standard_phi,
    standard_psi,
)
from g2moduli.liealg import LieAlgebra, is_derivation, matrix_bracket
from g2moduli.notation import parse_form

small = st.integers(-2, 2)


def test_standard_phi_b_is_six_identity():
    assert bilinear_b(standard_phi()) == RationalMatrix.diag([6] * 7)
    assert is_positive_3form(standard_phi())
    assert G2ThreeForm(standard_phi()).orientation == 1
    assert G2ThreeForm(-standard_phi()).orientation == -1


def test_non_positive_forms():
    assert not is_positive_3form(KForm(7, 3, {(1, 2, 3): 1}))
    assert not is_positive_3form(KForm(7, 3))
    with pytest.raises(ValueError):
        G2ThreeForm(KForm(7, 3, {(1, 2, 3): 1}))
    with pytest.raises(ValueError):
        metric_approx(KForm(7, 3, {(1, 2, 3): 1}))


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=7, max_size=7))
def test_metric_of_diagonally_scaled_phi(scales):
    # pulling phi back by diag(a_i) gives metric diag(a_i^2)
    a = [Fraction(s) for s in scales]
    phi = KForm(7, 3, {k: c * a[k[0] - 1] * a[k[1] - 1] * a[k[2] - 1] for k, c in standard_phi().items()})
    assert np.allclose(metric_approx(phi), np.diag([float(x * x) for x in a]), rtol=1e-12, atol=0)


def _action_oracle(d, alpha, vectors):
    """-sum_i alpha(v1, ..., D vi, ..., vk) by direct evaluation."""
    total = Fraction(0)
    for i in range(len(vectors)):
        vs = list(vectors)
        vs[i] = Vector(d @ vs[i])
        total -= evaluate(alpha, vs)
    return total


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=49, max_size=49), st.integers(2, 4), st.data())
def test_derivation_action_matches_oracle(entries, k, data):
    d = RationalMatrix(7, 7, entries)
    keys = list(combinations(range(1, 8), k))
    picked = data.draw(st.lists(st.sampled_from(keys), min_size=1, max_size=4, unique=True))
    alpha = KForm(7, k, {t: data.draw(st.integers(-3, 3)) for t in picked})
    image = derivation_action(d, alpha)
    basis = [tuple(int(i == j) for i in range(7)) for j in range(7)]
    for s in combinations(range(7), k):
        vs = [basis[i] for i in s]
        assert evaluate(image, vs) == _action_oracle(d, alpha, vs)


def test_stabilizer_of_standard_forms_on_abelian_is_g2():
    g = LieAlgebra.abelian(7)
    assert stabilizer_dimension(g, standard_phi()).dimension == 14
    assert stabilizer_dimension(g, standard_psi()).dimension == 14


@pytest.mark.parametrize("name,kind", [("n4", "closed"), ("n2", "coclosed"), ("17", "coclosed"), ("137A", "coclosed")])
def test_stabilizer_basis_is_verified(name, kind):
    e = entry(name)
    f = e.form(kind)
    s = stabilizer_dimension(e.algebra, f, der_of(name))
    for d in s.basis:
        assert is_derivation(e.algebra, d)
        assert derivation_action(d, f).is_zero()


@pytest.mark.parametrize("c", [2, -1, Fraction(1, 3)])
@pytest.mark.parametrize("name,kind", [("n10", "closed"), ("n5", "coclosed"), ("37D1", "coclosed")])
def test_scaling_invariance(name, kind, c):
    e = entry(name)
    system = StabilizerSystem(der_of(name), 3 if kind == "closed" else 4)
    f = e.form(kind)
    assert system.dimension(f * c) == system.dimension(f)


def _coords(basis, m):
    """Coordinates of matrix m in the span of ``basis``."""
    a = RationalMatrix.from_columns([b.entries() for b in basis], 49)
    aug = RationalMatrix.from_columns([b.entries() for b in basis] + [m.entries()], 49)
    assert rank(aug) == rank(a)
    sol = kernel_basis(aug)[-1]
    return [-x / sol[-1] for x in sol[:-1]]


def test_n2_stabilizer_has_simple_compact_part():
    e = entry("n2")
    s = stabilizer_dimension(e.algebra, e.form("coclosed"), der_of("n2"))
    assert s.dimension == 4
    brackets = [matrix_bracket(a, b) for i, a in enumerate(s.basis) for b in s.basis[i + 1:]]
    basis = []
    for b in brackets:
        if rank(RationalMatrix.from_rows([x.entries() for x in basis + [b]])) > len(basis):
            basis.append(b)
    assert len(basis) == 3
    ads = []
    for x in basis:
        cols = [_coords(basis, matrix_bracket(x, y)) for y in basis]
        ads.append(RationalMatrix.from_columns(cols, 3))
    killing = RationalMatrix.from_rows([[(a @ b).trace() for b in ads] for a in ads])
    # a perfect 3-dimensional algebra with negative definite Killing form is
    # so(3); it has to be compact since it sits inside the stabilizer of psi
    assert is_definite(killing) == Definiteness.NEGATIVE_DEFINITE


def test_purely_coclosed_indicator():
    assert purely_coclosed_indicator(standard_phi(), LieAlgebra.abelian(7))
    g = entry("n10").algebra
    phi = entry("n10").form("closed")
    assert purely_coclosed_indicator(phi, g)


def test_su3_construction():
    e = entry("137A")
    psi = e.form("coclosed")
    s = e.coclosed["su3"]
    four = build_psi_su3(parse_form(s["omega"], 7, 2), parse_form(s["psi_minus"], 7, 3), parse_form(s["eta"], 7, 1))
    assert four.form == psi
    with pytest.raises(ValueError):
        G2FourForm(standard_psi(), four.provenance)


def test_moduli_dimension_formula():
    assert moduli_dimension(27, 25, 0) == 2
    with pytest.raises(ValueError):
        moduli_dimension(5, 10, 0)
    with pytest.raises(ValueError):
        moduli_dimension(20, 3, 4)


def test_search_rejects_bad_input():
    g = entry("n9").algebra
    with pytest.raises(ValueError, match="not closed"):
        principal_orbit_search(g, entry("n9").form("coclosed"))
    with pytest.raises(ValueError, match="not positive"):
        principal_orbit_search(LieAlgebra.abelian(7), KForm(7, 3, {(1, 2, 3): 1}))
    with pytest.raises(ValueError):
        principal_orbit_search(LieAlgebra.abelian(7), standard_phi(), epsilon=0)


def test_search_certifies_minimum_on_abelian():
    rep = principal_orbit_search(LieAlgebra.abelian(7), standard_psi())
    assert rep.stab_lower_bound == 14 and rep.stab_best == 14
    assert not rep.is_upper_bound_only
    assert rep.trials_run == 0
    assert rep.moduli_dim == 35 - 49 + 14


def test_random_search_finds_principal_orbit_and_is_reproducible():
    e = entry("n10")
    a = principal_orbit_search(e.algebra, e.form("closed"), trials=50, seed=3, der=der_of("n10"))
    b = principal_orbit_search(e.algebra, e.form("closed"), trials=50, seed=3, der=der_of("n10"))
    assert a == b
    assert a.stab_best == 0 and a.perturbation_source == "random"
    f = e.form("closed") + a.best_perturbation * a.epsilon
    assert is_positive_3form(f)
    assert not e.algebra.d(a.best_perturbation)
    assert StabilizerSystem(der_of("n10"), 3).dimension(f) == 0


def test_published_perturbation_recorded():
    e = entry("17")
    rep = principal_orbit_search(e.algebra, e.form("coclosed"), perturbations=[e.perturbation()],
                                 trials=0, der=der_of("17"))
    assert rep.published_stabs == (2,)
    assert rep.stab_best == 2 and rep.perturbation_source == "published"
    assert rep.is_upper_bound_only
    d = rep.to_dict()
    assert d["best_perturbation"] == "e1234" and d["epsilon"] == "1/10"
