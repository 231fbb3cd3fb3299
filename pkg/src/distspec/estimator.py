"""scikit-learn transformer mapping graphs to their distance spectral radius."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import ContractError
from .graph import as_graph, complement
from .phipsi import AGREEMENT_TOL, rho_via_secular
from .spectral import DEFAULT_TOL, distance_spectral_radius

__all__ = ["DistanceSpectralRadius"]

_METHODS = ("eigen", "secular", "both")


class DistanceSpectralRadius(TransformerMixin, BaseEstimator):
    """Stateless transformer: one graph in, ``rho`` out.

    ``X`` is an iterable of graphs in any form accepted by
    :func:`distspec.graph.as_graph` (Graph, graph6 / edge-list text, or a
    0/1 adjacency matrix).  ``method="both"`` returns two columns and raises
    ContractError when they disagree by more than ``agreement_tol``.
    """

    def __init__(self, method: str = "eigen", tol: float = DEFAULT_TOL,
                 agreement_tol: float = AGREEMENT_TOL):
        self.method = method
        self.tol = tol
        self.agreement_tol = agreement_tol

    def fit(self, X, y=None):
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}, got {self.method!r}")
        self.n_features_in_ = 1
        return self

    def _row(self, g):
        out = []
        if self.method in ("eigen", "both"):
            out.append(distance_spectral_radius(g, tol=self.tol).value)
        if self.method in ("secular", "both"):
            out.append(rho_via_secular(complement(g), tol=self.tol).value)
        if len(out) == 2 and abs(out[0] - out[1]) > self.agreement_tol:
            raise ContractError(f"routes disagree by {abs(out[0] - out[1]):.3e}")
        return out

    def transform(self, X):
        if not hasattr(self, "n_features_in_"):
            self.fit(X)
        rows = [self._row(as_graph(g)) for g in X]
        width = 2 if self.method == "both" else 1
        return np.asarray(rows, dtype=float).reshape(len(rows), width)

    def get_feature_names_out(self, input_features=None):
        if self.method == "both":
            return np.array(["rho_eigen", "rho_secular"], dtype=object)
        return np.array([f"rho_{self.method}"], dtype=object)
