"""scikit-learn style wrappers so the solvers compose with pipelines and grid search.

The biclustering estimators follow ``sklearn.base.BiclusterMixin``: after
``fit`` they expose boolean ``rows_`` and ``columns_`` arrays of shape
``(1, n)`` describing the single bicluster found.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, BiclusterMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .core import EDGE_WEIGHT, Biclique, WeightedBipartiteGraph, evaluate
from .mdlh import solve_mdlh
from .reduce import ProductParams, gamma_product, project_solution
from .samba import REFINED, SIMPLE, SambaRefinedParams, refined_weights, simple_weights
from .solve import EXACT, SolverConfig, solve


def _masks(b: Biclique, shape):
    rows = np.zeros((1, shape[0]), dtype=bool)
    cols = np.zeros((1, shape[1]), dtype=bool)
    rows[0, list(b.u1)] = True
    cols[0, list(b.u2)] = True
    return rows, cols


def _check_weights(X):
    return check_array(X, dtype=np.float64, ensure_all_finite=True)


def _check_binary(X):
    X = check_array(X, dtype=None, ensure_all_finite=True)
    if not np.all((X == 0) | (X == 1)):
        raise ValueError("X must be a 0/1 matrix")
    return X.astype(np.int8)


class BicliqueSolver(BiclusterMixin, BaseEstimator):
    """Maximum weight biclique of a dense weight matrix.

    Parameters
    ----------
    objective : {"edge-weight", "node-plus-edge"}
    method : {"exact-enumeration", "branch-and-bound", "local-search"}
    seed : int
        Seed for local-search restarts.
    restarts : int
    time_limit : float or None
        Seconds; branch-and-bound returns its best-so-far when exceeded.
    threads : int
        Worker threads for exact enumeration. Does not affect the result.

    Attributes
    ----------
    result_ : OptResult
    value_ : float
    biclique_ : Biclique
    rows_, columns_ : ndarray of bool, shape (1, n_rows) / (1, n_columns)
    """

    def __init__(self, objective=EDGE_WEIGHT, method=EXACT, seed=0, restarts=8,
                 time_limit=None, threads=1):
        self.objective = objective
        self.method = method
        self.seed = seed
        self.restarts = restarts
        self.time_limit = time_limit
        self.threads = threads

    def _config(self):
        return SolverConfig(objective=self.objective, method=self.method, seed=self.seed,
                            restarts=self.restarts, time_limit=self.time_limit,
                            threads=self.threads)

    def fit(self, X, y=None):
        X = _check_weights(X)
        self.n_features_in_ = X.shape[1]
        self.result_ = solve(WeightedBipartiteGraph(X), self._config())
        self.value_ = self.result_.value
        self.biclique_ = self.result_.witness
        self.rows_, self.columns_ = _masks(self.biclique_, X.shape)
        return self

    def score(self, X, y=None):
        """Objective value of the fitted biclique evaluated on ``X``."""
        check_is_fitted(self)
        return evaluate(WeightedBipartiteGraph(_check_weights(X)), self.biclique_, self.objective)


class SambaBiclusterer(BiclusterMixin, BaseEstimator):
    """Most significant bicluster of a 0/1 expression matrix.

    ``model="refined"`` needs ``p_matrix`` (same shape as X) and ``p_c``.
    """

    def __init__(self, model=SIMPLE, base=2.0, p_matrix=None, p_c=None, method=EXACT, seed=0,
                 restarts=8):
        self.model = model
        self.base = base
        self.p_matrix = p_matrix
        self.p_c = p_c
        self.method = method
        self.seed = seed
        self.restarts = restarts

    def fit(self, X, y=None):
        X = _check_binary(X)
        self.n_features_in_ = X.shape[1]
        if self.model == SIMPLE:
            g, self.params_ = simple_weights(X, self.base)
        elif self.model == REFINED:
            if self.p_matrix is None or self.p_c is None:
                raise ValueError("the refined model needs p_matrix and p_c")
            self.params_ = SambaRefinedParams(np.asarray(self.p_matrix), float(self.p_c))
            g = refined_weights(self.params_, X, self.base)
        else:
            raise ValueError(f"unknown model {self.model!r}")
        self.weights_ = g.weights
        cfg = SolverConfig(method=self.method, seed=self.seed, restarts=self.restarts)
        res = solve(g, cfg)
        self.score_ = res.value
        self.biclique_ = res.witness
        self.rows_, self.columns_ = _masks(res.witness, X.shape)
        return self


class MDLHSummarizer(BaseEstimator):
    """Minimum-length row/column/cell summary of a 0/1 matrix.

    Attributes
    ----------
    summary_ : Summary
    length_ : int
    """

    def fit(self, X, y=None):
        X = _check_binary(X)
        self.n_features_in_ = X.shape[1]
        self.summary_ = solve_mdlh(X)
        self.length_ = self.summary_.length
        return self

    def transform(self, X):
        """Boolean mask of the cells covered by the fitted summary's regions."""
        check_is_fitted(self)
        X = _check_binary(X)
        cov = np.zeros(X.shape, dtype=bool)
        for r in self.summary_.regions:
            cov |= r.mask(X.shape)
        return cov


class GammaProduct(TransformerMixin, BaseEstimator):
    """Randomized block duplication that resamples every ``gamma`` weight to ``alpha``/``beta``."""

    def __init__(self, gamma=0.0, alpha=-1.0, beta=1.0, n_copies=2, seed=0):
        self.gamma = gamma
        self.alpha = alpha
        self.beta = beta
        self.n_copies = n_copies
        self.seed = seed

    def fit(self, X, y=None):
        X = _check_weights(X)
        self.params_ = ProductParams(self.gamma, self.alpha, self.beta, self.n_copies,
                                     seed=self.seed)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self)
        X = _check_weights(X)
        return gamma_product(X, self.params_).weights

    def project(self, X, biclique, objective=EDGE_WEIGHT):
        """Best block projection of a product biclique back onto ``X``."""
        check_is_fitted(self)
        X = _check_weights(X)
        return project_solution(X, self.transform(X), self.n_copies, biclique, objective)
