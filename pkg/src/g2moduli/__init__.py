"""Exact computation of moduli dimensions of invariant G2-structures."""

from .catalog import CatalogEntry, CatalogError, load_catalog
from .estimator import ModuliEstimator
from .exactla import Definiteness, RationalMatrix, determinant, is_definite, kernel_basis, rank
from .exterior import KForm, Vector, contract, evaluate, wedge
from .g2 import (
    G2FourForm,
    G2ThreeForm,
    ModuliReport,
    bilinear_b,
    build_psi_su3,
    derivation_action,
    is_positive_3form,
    metric_approx,
    moduli_dimension,
    principal_orbit_search,
    purely_coclosed_indicator,
    stabilizer_dimension,
    stabilizer_is_abelian,
)
from .liealg import LieAlgebra, betti, closed_forms_dim, derivation_space, from_salamon, nilpotency_step
from .notation import ParseError, parse_form, parse_salamon, render_form
from .reproduce import ReproduceReport, reproduce

__version__ = "0.1.0"
