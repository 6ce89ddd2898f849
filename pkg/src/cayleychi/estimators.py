"""scikit-learn style wrappers around the graph algorithms.

Each estimator takes a square symmetric 0/1 adjacency matrix (or any graph
object of this package) as ``X``.  Vertices play the role of samples, so a
colouring is a clustering and ``fit_predict`` returns colour labels.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .cayley import CayleyGraph, Graph
from .chromatic import DEFAULT_BUDGET, clique_number, dsatur_colors, exact_chromatic
from .spectral import CLUSTER_TOL, eig_dense, hoffman_bound, sarnak_bound
from .errors import Disconnected, EmptyGraph


def check_adjacency(X) -> Graph:
    """Validate ``X`` and return it as a :class:`Graph`."""
    if isinstance(X, Graph):
        return X
    if isinstance(X, CayleyGraph):
        return X.to_graph()
    A = check_array(X, dtype=None, ensure_min_samples=1, ensure_min_features=1)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"adjacency matrix must be square, got shape {A.shape}")
    if not np.isin(A, (0, 1)).all():
        raise ValueError("adjacency matrix entries must be 0 or 1")
    return Graph.from_adjacency(A)


class DSaturColoring(ClusterMixin, BaseEstimator):
    """Greedy DSATUR colouring.

    Attributes
    ----------
    labels_ : ndarray of shape (n_vertices,)
    n_colors_ : int
    """

    def fit(self, X, y=None):
        g = check_adjacency(X)
        self.labels_ = dsatur_colors(g.adjacency_lists())
        self.n_colors_ = int(self.labels_.max()) + 1 if len(self.labels_) else 0
        return self


class ExactColoring(ClusterMixin, BaseEstimator):
    """Chromatic number by branch and bound under a time budget.

    ``chromatic_number_`` is None when the budget ran out; the bracket
    ``lower_bound_ <= chi <= upper_bound_`` is always valid.
    """

    def __init__(self, budget=DEFAULT_BUDGET, cap=None):
        self.budget = budget
        self.cap = cap

    def fit(self, X, y=None):
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        g = check_adjacency(X)
        res = exact_chromatic(g, budget=self.budget, cap=self.cap)
        self.result_ = res
        self.labels_ = res.coloring.colors
        self.lower_bound_, self.upper_bound_ = res.lower, res.upper
        self.chromatic_number_ = res.exact
        return self


class MaxClique(BaseEstimator):
    def __init__(self, budget=DEFAULT_BUDGET, cap=None):
        self.budget = budget
        self.cap = cap

    def fit(self, X, y=None):
        g = check_adjacency(X)
        res = clique_number(g, budget=self.budget, cap=self.cap)
        self.clique_ = np.array(res.members, dtype=np.int64)
        self.clique_number_ = res.size
        self.exact_ = res.exact
        return self


class AdjacencySpectrum(BaseEstimator):
    """Adjacency spectrum plus the Hoffman and Sarnak chromatic lower bounds."""

    def __init__(self, method="auto", cluster_tol=CLUSTER_TOL):
        self.method = method
        self.cluster_tol = cluster_tol

    def fit(self, X, y=None):
        g = check_adjacency(X)
        self.spectrum_ = eig_dense(g, self.method, dense_cap=g.n_vertices, cluster_tol=self.cluster_tol)
        self.eigenvalues_ = np.sort(self.spectrum_.expanded())[::-1]
        try:
            self.hoffman_bound_ = float(hoffman_bound(self.spectrum_))
        except EmptyGraph:
            self.hoffman_bound_ = 1.0
        try:
            self.sarnak_bound_ = float(sarnak_bound(self.spectrum_))
        except (Disconnected, EmptyGraph, ValueError):
            self.sarnak_bound_ = None
        return self

    def transform(self, X=None):
        check_is_fitted(self, "eigenvalues_")
        return self.eigenvalues_
