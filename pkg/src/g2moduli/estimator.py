"""Estimator-style wrapper around the principal-orbit search.

Hyperparameters live in ``__init__`` untouched, so ``get_params``,
``set_params`` and ``sklearn.base.clone`` work; ``fit`` stores results in
trailing-underscore attributes.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .g2 import DEFAULT_EPSILON, DEFAULT_MAX_COEFF, DEFAULT_SEED, DEFAULT_TRIALS, principal_orbit_search
from .validation import check_algebra, check_epsilon, check_form, check_kind, check_non_negative_int

__all__ = ["ModuliEstimator"]


class ModuliEstimator(BaseEstimator):
    """Moduli dimension of closed or coclosed G2-structures around a given form.

    Example::

        est = ModuliEstimator(kind="closed").fit("(0,0,0,12,13,23,0)", phi)
        est.moduli_dim_
    """

    def __init__(self, kind="closed", epsilon=DEFAULT_EPSILON, max_coeff=DEFAULT_MAX_COEFF,
                 trials=DEFAULT_TRIALS, seed=DEFAULT_SEED, perturbations=()):
        self.kind = kind
        self.epsilon = epsilon
        self.max_coeff = max_coeff
        self.trials = trials
        self.seed = seed
        self.perturbations = perturbations

    def fit(self, algebra, form, name: str = ""):
        kind = check_kind(self.kind)
        eps = check_epsilon(self.epsilon)
        g = check_algebra(algebra)
        degree = 3 if kind == "closed" else 4
        alpha = check_form(form, g.dim, degree)
        perts = [check_form(p, g.dim, degree) for p in self.perturbations]
        report = principal_orbit_search(
            g, alpha, epsilon=eps,
            max_coeff=check_non_negative_int(self.max_coeff, "max_coeff"),
            trials=check_non_negative_int(self.trials, "trials"),
            seed=check_non_negative_int(self.seed, "seed"),
            perturbations=perts, name=name,
        )
        self.algebra_ = g
        self.form_ = alpha
        self.report_ = report
        self.dim_V_ = report.dim_V
        self.dim_aut_ = report.dim_aut
        self.stab_ = report.stab_best
        self.best_perturbation_ = report.best_perturbation
        self.moduli_dim_ = report.moduli_dim
        self.is_upper_bound_only_ = report.is_upper_bound_only
        return self

    def predict(self, X=None) -> int:
        """The fitted moduli dimension; ``X`` is ignored."""
        check_is_fitted(self, "report_")
        return self.moduli_dim_
