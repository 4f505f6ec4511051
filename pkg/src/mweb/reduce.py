"""Constructive reductions between biclique problems, with checkers.

Product vertex indexing: vertex ``(copy, inner)`` of a block-duplicated graph
has index ``copy * n + inner`` where ``n`` is the size of that side in the
original graph.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (
    EDGE_WEIGHT,
    NODE_PLUS_EDGE,
    Biclique,
    CapacityError,
    ValidationError,
    WeightedBipartiteGraph,
    WeightSetDescriptor,
    as_graph,
    best_of,
    check_biclique,
    evaluate,
)
from .solve import solve_exact

CLIQUE_ORACLE_CAP = 16
BICLIQUE_ORACLE_CAP = 20


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph on vertices ``0..n-1``."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"graph needs at least one vertex, got n={self.n}")
        norm = set()
        for e in self.edges:
            i, j = (int(x) for x in e)
            if i == j:
                raise ValidationError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValidationError(f"edge ({i}, {j}) out of range for n={self.n}")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(norm))

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.edges:
            adj[i, j] = adj[j, i] = True
        return adj

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in sorted(self.edges)]}

    @classmethod
    def from_dict(cls, data: dict) -> "SimpleGraph":
        try:
            return cls(int(data["n"]), frozenset(tuple(e) for e in data["edges"]))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"simple graph JSON needs keys n, edges: {exc}") from None

    @classmethod
    def complete(cls, n: int) -> "SimpleGraph":
        return cls(n, frozenset(itertools.combinations(range(n), 2)))

    @classmethod
    def path(cls, n: int) -> "SimpleGraph":
        return cls(n, frozenset((i, i + 1) for i in range(n - 1)))


def clique_number(g: SimpleGraph) -> int:
    """Brute-force clique number over all vertex subsets."""
    if g.n > CLIQUE_ORACLE_CAP:
        raise CapacityError(f"clique oracle limited to {CLIQUE_ORACLE_CAP} vertices, got {g.n}")
    nbr = [0] * g.n
    for i, j in g.edges:
        nbr[i] |= 1 << j
        nbr[j] |= 1 << i
    best = 1
    for mask in range(1, 1 << g.n):
        size = mask.bit_count()
        if size <= best:
            continue
        if all(mask & ~(1 << v) & ~nbr[v] == 0 for v in range(g.n) if mask >> v & 1):
            best = size
    return best


def clique_to_mweb(g: SimpleGraph) -> WeightedBipartiteGraph:
    """Two copies of the vertex set: 1 on the diagonal, 0 on edges, -1 elsewhere."""
    w = np.where(g.adjacency(), 0.0, -1.0)
    np.fill_diagonal(w, 1.0)
    return WeightedBipartiteGraph(w)


@dataclass(frozen=True)
class ProductParams:
    gamma: float
    alpha: float
    beta: float
    n_copies: int = 1
    delta: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if not self.alpha < self.gamma < self.beta:
            raise ValidationError(
                f"need alpha < gamma < beta, got alpha={self.alpha}, gamma={self.gamma}, beta={self.beta}"
            )
        if int(self.n_copies) != self.n_copies or self.n_copies < 1:
            raise ValidationError(f"n_copies must be a positive integer, got {self.n_copies}")
        _check_delta(self.delta)
        if not 0 <= int(self.seed) < 2**64:
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    @property
    def q(self) -> float:
        """Probability of drawing beta; the unique value with mean gamma."""
        return (self.gamma - self.alpha) / (self.beta - self.alpha)


def _check_delta(delta: float) -> None:
    if not 0 < delta <= 0.5:
        raise ValidationError(f"delta must lie in (0, 1/2], got {delta}")


def blowup_exponent(delta: float) -> float:
    """``(delta*(3 - 2*delta) + 3) / (delta*(1 + 2*delta))``."""
    _check_delta(delta)
    return (delta * (3 - 2 * delta) + 3) / (delta * (1 + 2 * delta))


def theoretical_N(eta: int, delta: float) -> int:
    """Number of copies that makes the product argument go through.

    Ceiling of ``eta ** blowup_exponent(delta)``; exact powers are recognized
    despite floating point noise.
    """
    if eta < 1:
        raise ValidationError(f"eta must be >= 1, got {eta}")
    x = float(eta) ** blowup_exponent(delta)
    r = round(x)
    if math.isclose(x, r, rel_tol=1e-12, abs_tol=0.0):
        return int(r)
    return math.ceil(x)


def amplification_factor(delta: float, epsilon_prime: float) -> float:
    """Exponent ``epsilon`` of the inherited approximation factor ``n**epsilon``."""
    if not epsilon_prime > 0:
        raise ValidationError(f"epsilon_prime must be positive, got {epsilon_prime}")
    return (1 + blowup_exponent(delta)) * epsilon_prime


@dataclass(frozen=True)
class AmplificationParams:
    epsilon_prime: float
    delta: float = 0.5

    @property
    def epsilon(self) -> float:
        return amplification_factor(self.delta, self.epsilon_prime)


def duplicate(g, n_copies: int) -> WeightedBipartiteGraph:
    g = as_graph(g)
    if int(n_copies) != n_copies or n_copies < 1:
        raise ValidationError(f"n_copies must be a positive integer, got {n_copies}")
    return WeightedBipartiteGraph(np.tile(g.weights, (int(n_copies), int(n_copies))))


def gamma_product(g, p: ProductParams) -> WeightedBipartiteGraph:
    """N-fold block duplication with every gamma-weight cell resampled.

    Each copy of a gamma cell independently becomes ``beta`` with probability
    ``p.q`` and ``alpha`` otherwise. Draws come from one stream seeded by
    ``p.seed`` in row-major order of the product matrix.
    """
    g = as_graph(g)
    w = np.tile(g.weights, (p.n_copies, p.n_copies))
    hit = w == p.gamma
    rng = np.random.default_rng(int(p.seed))
    draws = rng.random(w.shape)
    w = np.where(hit, np.where(draws < p.q, p.beta, p.alpha), w)
    return WeightedBipartiteGraph(w)


def gamma_mask(g, gamma: float, n_copies: int = 1) -> np.ndarray:
    """Cells of the product that descend from a gamma-weight cell."""
    g = as_graph(g)
    return np.tile(g.weights == gamma, (n_copies, n_copies))


def project_solution(
    g,
    product,
    n_copies: int,
    b: Biclique,
    objective: str = EDGE_WEIGHT,
) -> tuple[Biclique, float]:
    """Best of the ``n_copies**2`` block projections of a product biclique, scored in ``g``."""
    g, product = as_graph(g), as_graph(product)
    if product.shape != (n_copies * g.n1, n_copies * g.n2):
        raise ValidationError(
            f"product shape {product.shape} does not match {n_copies} copies of {g.shape}"
        )
    check_biclique(product, b)
    u1 = np.asarray(b.u1, dtype=int)
    u2 = np.asarray(b.u2, dtype=int)
    cands = []
    for a in range(n_copies):
        left = (u1[(u1 // g.n1) == a] % g.n1).tolist()
        for c in range(n_copies):
            right = (u2[(u2 // g.n2) == c] % g.n2).tolist()
            proj = Biclique(left, right)
            cands.append((evaluate(g, proj, objective), proj))
    value, best = best_of(cands)
    return best, value


def mweb_to_problem_p(g, n_copies: Optional[int] = None) -> WeightedBipartiteGraph:
    """Block duplication used to move from {-1,1} edge weight to the node-plus-edge objective.

    ``n_copies`` defaults to ``(n1 + n2)**2``.
    """
    g = as_graph(g)
    if not np.all(np.isin(g.weights, (-1.0, 1.0))):
        warnings.warn("input is not a {-1,1}-weighted graph; value bounds may not hold", stacklevel=2)
    if n_copies is None:
        n_copies = g.n ** 2
    return duplicate(g, n_copies)


def problem_p_bounds(mweb_opt: float, n_copies: int, n: int) -> tuple[float, float]:
    """Interval that must contain the node-plus-edge optimum of the duplicated graph."""
    lo = n_copies**2 * mweb_opt
    return lo, lo + n_copies * n


def hard_weight_set(eta: int, delta: float, *, inverted: bool = False) -> WeightSetDescriptor:
    """Two-value weight set ``{-eta**(1/2-delta), 1}`` (or the inverted exponent)."""
    _check_delta(delta)
    e = (delta - 0.5) if inverted else (0.5 - delta)
    return WeightSetDescriptor(-float(eta) ** e, 1.0)


def ratio_exponent(ws: WeightSetDescriptor, eta: int) -> float:
    """``log_eta |min/max|``."""
    if eta < 2:
        raise ValidationError(f"eta must be >= 2 to take logarithms base eta, got {eta}")
    return math.log(ws.ratio) / math.log(eta)


def in_ratio_window(ws: WeightSetDescriptor, eta: int, delta: float, slack: float = 1e-12) -> bool:
    """Whether ``|min/max|`` lies between ``eta**(delta-1/2)`` and ``eta**(1/2-delta)``.

    The asymptotic window is read with unit constants, as a single-instance test.
    """
    _check_delta(delta)
    r = ratio_exponent(ws, eta)
    return delta - 0.5 - slack <= r <= 0.5 - delta + slack


def rescale(g, factor: float) -> WeightedBipartiteGraph:
    """Divide every weight by ``factor`` (> 0); optimal bicliques are unchanged."""
    if not factor > 0:
        raise ValidationError(f"rescale factor must be positive, got {factor}")
    g = as_graph(g)
    return WeightedBipartiteGraph(g.weights / factor)


@dataclass
class VerificationReport:
    kind: str
    claim: str
    trials: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.trials) and all(t["pass"] for t in self.trials)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "claim": self.claim, "passed": self.passed, "trials": self.trials}


def _min_side(g: WeightedBipartiteGraph) -> int:
    return min(g.n1, g.n2)


def verify_clique(graphs) -> VerificationReport:
    report = VerificationReport("clique", "clique number == max edge-weight biclique of the reduction")
    for sg in graphs:
        omega = clique_number(sg)
        opt = solve_exact(clique_to_mweb(sg)).value
        report.trials.append({"n": sg.n, "clique_number": omega, "mweb_opt": opt, "pass": omega == opt})
    return report


def verify_problem_p(graphs, copies=(2, 3, 4)) -> VerificationReport:
    report = VerificationReport(
        "problem-p",
        "N^2*opt <= node-plus-edge opt of N-fold duplication <= N^2*opt + N*(n1+n2)",
    )
    for g in graphs:
        g = as_graph(g)
        opt = solve_exact(g).value
        for N in copies:
            dup = mweb_to_problem_p(g, N)
            if _min_side(dup) > BICLIQUE_ORACLE_CAP:
                raise CapacityError(f"duplicated graph {dup.shape} exceeds the oracle cap")
            p_opt = solve_exact(dup, NODE_PLUS_EDGE).value
            lo, hi = problem_p_bounds(opt, N, g.n)
            report.trials.append(
                {"shape": list(g.shape), "copies": N, "mweb_opt": opt, "p_opt": p_opt,
                 "lower": lo, "upper": hi, "pass": lo <= p_opt <= hi}
            )
    return report


def product_cell_means(g, params: ProductParams, trials: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-cell means of ``trials`` products seeded ``params.seed + t``.

    Returns the mean matrix and the mask of former-gamma cells.
    """
    g = as_graph(g)
    mask = gamma_mask(g, params.gamma, params.n_copies)
    total = np.zeros(mask.shape)
    for t in range(trials):
        seed = (int(params.seed) + t) % 2**64
        prod = gamma_product(g, ProductParams(params.gamma, params.alpha, params.beta,
                                              params.n_copies, params.delta, seed))
        total += prod.weights
    return total / trials, mask


def verify_product(g, params: ProductParams, trials: int) -> VerificationReport:
    """Monte Carlo check: former-gamma cells average to gamma, others are copied verbatim."""
    g = as_graph(g)
    report = VerificationReport("product", "former-gamma cells have mean gamma; other cells unchanged")
    means, mask = product_cell_means(g, params, trials)
    base = np.tile(g.weights, (params.n_copies, params.n_copies))
    q = params.q
    se = (params.beta - params.alpha) * math.sqrt(q * (1 - q) / trials)
    for idx in map(tuple, np.argwhere(mask)):
        dev = abs(means[idx] - params.gamma)
        report.trials.append({"cell": [int(i) for i in idx], "mean": float(means[idx]),
                              "se": se, "pass": bool(dev < 4 * se)})
    report.trials.append({"cell": "non-gamma", "pass": bool(np.array_equal(means[~mask], base[~mask]))})
    return report


def verify_reduction(kind: str, instance=None, trials: int = 1, seed: int = 0, **kw) -> VerificationReport:
    """Dispatch to the checker for ``kind`` in ``{"clique", "problem-p", "product"}``.

    ``instance`` is a SimpleGraph for clique, a weighted graph for the others;
    when omitted, ``trials`` random instances are drawn from ``seed``.
    """
    rng = np.random.default_rng(seed)
    if kind == "clique":
        if instance is not None:
            graphs = [instance]
        else:
            graphs = [random_simple_graph(int(rng.integers(1, 11)), 0.5, rng) for _ in range(trials)]
        for sg in graphs:
            if sg.n > CLIQUE_ORACLE_CAP:
                raise CapacityError(f"clique oracle limited to {CLIQUE_ORACLE_CAP} vertices")
        return verify_clique(graphs)
    if kind == "problem-p":
        if instance is not None:
            graphs = [instance]
        else:
            graphs = []
            for _ in range(trials):
                n1 = int(rng.integers(1, 4))
                n2 = int(rng.integers(1, 6 - n1))
                graphs.append(rng.choice([-1.0, 1.0], size=(n1, n2)))
        return verify_problem_p(graphs, kw.get("copies", (2, 3, 4)))
    if kind == "product":
        if instance is None:
            instance = np.array([[0, 1], [0, 1]], dtype=float)
        params = kw.get("params") or ProductParams(0.0, -1.0, 1.0, 1, seed=seed)
        return verify_product(instance, params, trials)
    raise ValidationError(f"unknown verification kind {kind!r}")


def random_simple_graph(n: int, p: float, rng) -> SimpleGraph:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    keep = rng.random(len(pairs)) < p
    return SimpleGraph(n, frozenset(e for e, k in zip(pairs, keep) if k))
