"""SAMBA bicluster weights and scores over binary expression matrices.

Logarithms are base 2 unless ``base`` is given. Changing the base rescales
every weight by the same positive constant, which leaves optimal biclusters
unchanged. Probabilities are handled in log space throughout; ``p_star`` and
``binomial_tail`` only exponentiate at the end and return 0.0 once the
result drops below the smallest positive double (about 2**-1074).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.special import gammaln, logsumexp

from .core import EDGE_WEIGHT, Biclique, ValidationError, WeightedBipartiteGraph, as_graph, biclique_weight
from .solve import SolverConfig, solve

SIMPLE = "simple"
REFINED = "refined"


class DegenerateDensityError(ValidationError):
    """Matrix is all zeros or all ones, so the global density is 0 or 1."""


class DensityWarning(UserWarning):
    """Density at or above 1/2, outside the sparse regime the simple model assumes."""


def _log(x, base):
    return np.log(x) / np.log(base)


def as_binary_matrix(m) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValidationError(f"expected a non-empty 2-d matrix, got shape {a.shape}")
    if not np.all((a == 0) | (a == 1)):
        raise ValidationError("matrix entries must be 0 or 1")
    return a.astype(np.int8)


@dataclass(frozen=True)
class SambaSimpleParams:
    p: float
    base: float = 2.0

    def __post_init__(self):
        if not 0 < self.p < 1:
            raise DegenerateDensityError(f"density must lie strictly between 0 and 1, got {self.p}")

    # The constant -1 of the base-2 weights is -log2(2), from the 2**cells factor of
    # p_star; writing it as -log(2) keeps every base a pure rescaling.
    @property
    def w_edge(self) -> float:
        return float(-_log(2 * self.p, self.base))

    @property
    def w_nonedge(self) -> float:
        return float(-_log(2 * (1 - self.p), self.base))


@dataclass(frozen=True, eq=False)
class SambaRefinedParams:
    p_matrix: np.ndarray
    p_c: float

    def __post_init__(self):
        p = np.array(self.p_matrix, dtype=np.float64)
        if p.ndim != 2:
            raise ValidationError("p_matrix must be 2-dimensional")
        if not np.all((p > 0) & (p < 1)):
            raise ValidationError("every p_{u,v} must lie strictly between 0 and 1")
        if not 0 < self.p_c < 1:
            raise ValidationError(f"p_c must lie strictly between 0 and 1, got {self.p_c}")
        if not self.p_c > p.max():
            raise ValidationError(f"p_c={self.p_c} must exceed every p_{{u,v}} (max {p.max()})")
        p.setflags(write=False)
        object.__setattr__(self, "p_matrix", p)

    def to_dict(self) -> dict:
        return {"p": [float(x) for x in self.p_matrix.ravel()], "p_c": float(self.p_c)}

    @classmethod
    def from_dict(cls, data: dict, shape: tuple[int, int]) -> "SambaRefinedParams":
        try:
            flat, p_c = data["p"], float(data["p_c"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"refined params JSON needs keys p, p_c: {exc}") from None
        if len(flat) != shape[0] * shape[1]:
            raise ValidationError(f"p has {len(flat)} entries, matrix has {shape[0] * shape[1]} cells")
        return cls(np.asarray(flat, dtype=np.float64).reshape(shape), p_c)


def simple_weights(m, base: float = 2.0) -> tuple[WeightedBipartiteGraph, SambaSimpleParams]:
    """Weight 1-cells by ``-1 - log2 p`` and 0-cells by ``-1 - log2(1-p)``, p the global density.

    Other bases use ``-log(2p)`` and ``-log(2(1-p))``, the same weights rescaled.
    """
    a = as_binary_matrix(m)
    ones = int(a.sum())
    if ones == 0 or ones == a.size:
        raise DegenerateDensityError("matrix must contain both 0s and 1s")
    params = SambaSimpleParams(ones / a.size, base)
    if params.p >= 0.5:
        warnings.warn(f"density p={params.p:.3g} >= 1/2; the simple model assumes sparse data",
                      DensityWarning, stacklevel=2)
    w = np.where(a == 1, params.w_edge, params.w_nonedge)
    return WeightedBipartiteGraph(w), params


def significance(g_weighted, params: Optional[SambaSimpleParams], b: Biclique) -> float:
    """Statistical significance of the bicluster, i.e. ``-log p_star``."""
    return biclique_weight(as_graph(g_weighted), b)


def significance_closed_form(cells: int, edges: int, p: float, base: float = 2.0) -> float:
    """``edges * (-1 - log2 p) + (cells - edges) * (-1 - log2(1-p))`` in base 2."""
    return edges * -_log(2 * p, base) + (cells - edges) * -_log(2 * (1 - p), base)


def log_p_star(cells: int, edges: int, p: float) -> float:
    """Natural log of ``p_star``."""
    _check_counts(edges, cells, p)
    out = cells * math.log(2)
    if edges:
        out += edges * math.log(p)
    if cells - edges:
        out += (cells - edges) * math.log1p(-p)
    return out


def p_star(cells: int, edges: int, p: float) -> float:
    """Upper bound ``2**cells * p**edges * (1-p)**(cells-edges)`` on the density tail."""
    return math.exp(log_p_star(cells, edges, p))


def log_binomial_tail(k: int, p: float, n: int) -> float:
    """Natural log of ``P(Binomial(n, p) >= k)``."""
    _check_counts(k, n, p)
    if k == 0:
        return 0.0
    i = np.arange(k, n + 1)
    terms = gammaln(n + 1) - gammaln(i + 1) - gammaln(n - i + 1) + i * np.log(p) + (n - i) * np.log1p(-p)
    return float(min(0.0, logsumexp(terms)))


def binomial_tail(k: int, p: float, n: int) -> float:
    return math.exp(log_binomial_tail(k, p, n))


def _check_counts(k, n, p):
    if not 0 <= k <= n:
        raise ValidationError(f"need 0 <= k <= n, got k={k}, n={n}")
    if not 0 < p < 1:
        raise ValidationError(f"p must lie strictly between 0 and 1, got {p}")


def refined_weights(params: SambaRefinedParams, m, base: float = 2.0) -> WeightedBipartiteGraph:
    """Log-likelihood-ratio weights: ``log(p_c/p)`` on 1-cells, ``log((1-p_c)/(1-p))`` on 0-cells."""
    a = as_binary_matrix(m)
    p = params.p_matrix
    if p.shape != a.shape:
        raise ValidationError(f"p_matrix shape {p.shape} differs from matrix shape {a.shape}")
    w = np.where(a == 1, _log(params.p_c / p, base), _log((1 - params.p_c) / (1 - p), base))
    return WeightedBipartiteGraph(w)


def log_likelihood_ratio(g_refined, b: Biclique) -> float:
    return biclique_weight(as_graph(g_refined), b)


def find_bicluster(
    m,
    model: str = SIMPLE,
    solver_config: Optional[SolverConfig] = None,
    params: Optional[SambaRefinedParams] = None,
    base: float = 2.0,
) -> tuple[Biclique, float]:
    """Highest-scoring bicluster under the simple or refined model."""
    if model == SIMPLE:
        g, _ = simple_weights(m, base)
    elif model == REFINED:
        if params is None:
            raise ValidationError("the refined model needs SambaRefinedParams")
        g = refined_weights(params, m, base)
    else:
        raise ValidationError(f"unknown SAMBA model {model!r}")
    res = solve(g, replace(solver_config or SolverConfig(), objective=EDGE_WEIGHT))
    return res.witness, res.value
