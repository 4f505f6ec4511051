"""Weighted bipartite graphs, bicliques and the two biclique objectives."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

EDGE_WEIGHT = "edge-weight"
NODE_PLUS_EDGE = "node-plus-edge"
OBJECTIVES = (EDGE_WEIGHT, NODE_PLUS_EDGE)


class ValidationError(ValueError):
    """Malformed input: bad shape, bad index, parameter out of range."""


class TrivialInstanceError(ValidationError):
    """Weights do not take both signs, so the optimum is trivial."""


class CapacityError(RuntimeError):
    """Instance too large for an exhaustive routine."""


def check_objective(objective: str) -> str:
    if objective not in OBJECTIVES:
        raise ValidationError(f"unknown objective {objective!r}; expected one of {OBJECTIVES}")
    return objective


@dataclass(frozen=True, eq=False)
class WeightedBipartiteGraph:
    """Complete bipartite graph given by a dense ``n1 x n2`` weight matrix.

    Rows index the left side, columns the right side. Missing edges of an
    incomplete graph are simply weight 0. The stored array is a read-only
    float64 copy.
    """

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64, copy=True)
        if w.ndim != 2:
            raise ValidationError(f"weights must be 2-dimensional, got ndim={w.ndim}")
        if w.shape[0] < 1 or w.shape[1] < 1:
            raise ValidationError(f"both sides need at least one vertex, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            bad = tuple(int(x) for x in np.argwhere(~np.isfinite(w))[0])
            raise ValidationError(f"non-finite weight at {bad}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n1(self) -> int:
        return self.weights.shape[0]

    @property
    def n2(self) -> int:
        return self.weights.shape[1]

    @property
    def eta(self) -> int:
        """Size of the larger side."""
        return max(self.n1, self.n2)

    @property
    def n(self) -> int:
        """Total vertex count."""
        return self.n1 + self.n2

    @property
    def shape(self) -> tuple[int, int]:
        return self.weights.shape

    @property
    def T(self) -> "WeightedBipartiteGraph":
        return WeightedBipartiteGraph(self.weights.T)

    def is_integral(self) -> bool:
        return bool(np.all(self.weights == np.round(self.weights)))

    def __eq__(self, other):
        if not isinstance(other, WeightedBipartiteGraph):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.weights, other.weights))

    def __hash__(self):
        return hash((self.shape, self.weights.tobytes()))

    def to_dict(self) -> dict:
        flat = [_plain_number(x) for x in self.weights.ravel()]
        return {"n1": self.n1, "n2": self.n2, "weights": flat}

    @classmethod
    def from_dict(cls, data: dict) -> "WeightedBipartiteGraph":
        try:
            n1, n2, flat = int(data["n1"]), int(data["n2"]), data["weights"]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"graph JSON needs keys n1, n2, weights: {exc}") from None
        if not isinstance(flat, list) or len(flat) != n1 * n2:
            raise ValidationError(
                f"graph JSON weights must be a flat list of n1*n2={n1 * n2} numbers"
            )
        if n1 < 1 or n2 < 1:
            raise ValidationError(f"n1 and n2 must be >= 1, got {n1}, {n2}")
        return cls(np.asarray(flat, dtype=np.float64).reshape(n1, n2))


def _plain_number(x: float):
    # integers serialize without a trailing ".0" so integer instances round-trip cleanly
    return int(x) if float(x).is_integer() and abs(x) < 2**53 else float(x)


@dataclass(frozen=True, order=True)
class Biclique:
    """Pair of vertex subsets ``(u1, u2)``; either side may be empty.

    Both sides are stored as sorted tuples, so the dataclass ordering is the
    lexicographic order used for tie-breaking.
    """

    u1: tuple = ()
    u2: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "u1", _normalize_side(self.u1, "u1"))
        object.__setattr__(self, "u2", _normalize_side(self.u2, "u2"))

    @classmethod
    def from_masks(cls, mask1, mask2) -> "Biclique":
        return cls(np.flatnonzero(mask1).tolist(), np.flatnonzero(mask2).tolist())

    @classmethod
    def full(cls, g: WeightedBipartiteGraph) -> "Biclique":
        return cls(range(g.n1), range(g.n2))

    @property
    def size(self) -> int:
        return len(self.u1) + len(self.u2)

    def is_empty(self) -> bool:
        return not self.u1 or not self.u2

    def transpose(self) -> "Biclique":
        return Biclique(self.u2, self.u1)

    def to_dict(self) -> dict:
        return {"u1": list(self.u1), "u2": list(self.u2)}

    @classmethod
    def from_dict(cls, data: dict) -> "Biclique":
        try:
            return cls(data["u1"], data["u2"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"biclique JSON needs keys u1, u2: {exc}") from None


def _normalize_side(side: Iterable, name: str) -> tuple:
    out = []
    for x in side:
        if isinstance(x, (bool, np.bool_)) or int(x) != x:
            raise ValidationError(f"{name} contains non-integer index {x!r}")
        out.append(int(x))
    if len(set(out)) != len(out):
        raise ValidationError(f"{name} contains duplicate indices")
    return tuple(sorted(out))


def check_biclique(g: WeightedBipartiteGraph, b: Biclique) -> None:
    for side, name, limit in ((b.u1, "u1", g.n1), (b.u2, "u2", g.n2)):
        for idx in side:
            if idx < 0 or idx >= limit:
                raise ValidationError(f"{name} index {idx} out of range [0, {limit})")


def biclique_weight(g: WeightedBipartiteGraph, b: Biclique) -> float:
    """Sum of ``w(u, v)`` over ``u in b.u1, v in b.u2``; 0 if a side is empty."""
    check_biclique(g, b)
    if b.is_empty():
        return 0.0
    return float(g.weights[np.ix_(b.u1, b.u2)].sum())


def problem_p_value(g: WeightedBipartiteGraph, b: Biclique) -> float:
    """Node-plus-edge objective ``|u1| + |u2| + biclique_weight``."""
    return b.size + biclique_weight(g, b)


def evaluate(g: WeightedBipartiteGraph, b: Biclique, objective: str = EDGE_WEIGHT) -> float:
    check_objective(objective)
    if objective == NODE_PLUS_EDGE:
        return problem_p_value(g, b)
    return biclique_weight(g, b)


@dataclass(frozen=True)
class WeightSetDescriptor:
    min_weight: float
    max_weight: float

    def __post_init__(self):
        if not (self.min_weight < 0 < self.max_weight):
            raise TrivialInstanceError(
                "trivial instance: weights must include both a negative and a positive value "
                f"(min={self.min_weight}, max={self.max_weight})"
            )

    @property
    def ratio(self) -> float:
        """``|min / max|``."""
        return abs(self.min_weight / self.max_weight)


def weight_set_of(g: WeightedBipartiteGraph) -> WeightSetDescriptor:
    return WeightSetDescriptor(float(g.weights.min()), float(g.weights.max()))


@dataclass(frozen=True)
class OptResult:
    value: float
    witness: Biclique
    objective: str = EDGE_WEIGHT
    explored: int = 0
    optimal: bool = True
    elapsed: float = field(default=0.0, compare=False)

    def to_dict(self) -> dict:
        d = self.witness.to_dict()
        d.update(
            value=_plain_number(self.value),
            objective=self.objective,
            explored=int(self.explored),
            optimal=bool(self.optimal),
        )
        return d


def as_graph(g) -> WeightedBipartiteGraph:
    """Accept a graph or anything array-like."""
    if isinstance(g, WeightedBipartiteGraph):
        return g
    return WeightedBipartiteGraph(np.asarray(g))


def lex_key(b: Biclique) -> tuple:
    return (b.u1, b.u2)


def best_of(candidates: Sequence[tuple[float, Biclique]], tol: float = 0.0):
    """Pick the max-value candidate, breaking near-ties lexicographically."""
    top = max(v for v, _ in candidates)
    tied = [(v, b) for v, b in candidates if v >= top - tol]
    return min(tied, key=lambda vb: lex_key(vb[1]))
