"""Input coercion and checks shared by the estimator and the command line."""

from __future__ import annotations

from fractions import Fraction

from .exactla import as_rational
from .exterior import KForm
from .liealg import LieAlgebra
from .notation import parse_form

__all__ = [
    "check_algebra",
    "check_epsilon",
    "check_form",
    "check_kind",
    "check_non_negative_int",
]

KINDS = ("closed", "coclosed")


def check_kind(kind) -> str:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    return kind


def check_algebra(g) -> LieAlgebra:
    """A LieAlgebra, or Salamon notation for one."""
    if isinstance(g, LieAlgebra):
        return g
    if isinstance(g, str):
        return LieAlgebra.from_string(g)
    raise TypeError(f"expected a LieAlgebra or Salamon string, got {type(g).__name__}")


def check_form(form, ambient_dim: int, degree: int | None = None) -> KForm:
    if isinstance(form, str):
        form = parse_form(form, ambient_dim, degree)
    if not isinstance(form, KForm):
        raise TypeError(f"expected a KForm or form expression, got {type(form).__name__}")
    if form.ambient_dim != ambient_dim:
        raise ValueError(f"form lives in dimension {form.ambient_dim}, expected {ambient_dim}")
    if degree is not None and form.degree != degree:
        raise ValueError(f"expected a {degree}-form, got degree {form.degree}")
    return form


def check_epsilon(eps) -> Fraction:
    eps = as_rational(eps)
    if eps == 0:
        raise ValueError("epsilon must be nonzero")
    return eps


def check_non_negative_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < 0:
        raise ValueError(f"{name} must be non-negative, got {value}")
    return value
