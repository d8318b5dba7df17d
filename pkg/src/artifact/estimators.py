"""Scikit-learn facade over the remainder decomposition."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .arith import EulerProductSpec, RealCharacter
from .errors import DomainError
from .remainder import TruncationPolicy, decomposition_report, default_variant

COLUMNS = ("x", "E", "f", "g", "E_AR", "E_AN", "residual")


class RemainderDecomposer(BaseEstimator, TransformerMixin):
    """Split the error term into its arithmetic and analytic parts on a grid of x.

    ``fit`` takes an Euler product spec or a real character; ``transform`` takes
    an x-grid and returns one row per point with the columns in ``COLUMNS``.
    """

    def __init__(self, variant=None, N_terms=None, target_tol=1e-9, tail_mode="exact-closure"):
        self.variant = variant
        self.N_terms = N_terms
        self.target_tol = target_tol
        self.tail_mode = tail_mode

    def fit(self, spec, y=None):
        if not isinstance(spec, (EulerProductSpec, RealCharacter)):
            raise DomainError("fit expects an EulerProductSpec or a RealCharacter")
        self.spec_ = spec
        self.variant_ = self.variant or default_variant(spec)
        self.policy_ = TruncationPolicy(self.N_terms, self.target_tol, self.tail_mode)
        return self

    def reports(self, X):
        check_is_fitted(self, "spec_")
        xs = np.asarray(X, dtype=float).ravel()
        if xs.size == 0:
            raise DomainError("empty x-grid")
        return [decomposition_report(self.spec_, float(x), self.variant_, self.policy_) for x in xs]

    def transform(self, X):
        rows = [[r.x, r.E, r.f, r.g, r.E_AR, r.E_AN, r.residual] for r in self.reports(X)]
        return np.array(rows, dtype=float)

    def get_feature_names_out(self, input_features=None):
        return np.array(COLUMNS, dtype=object)
