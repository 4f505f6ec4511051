"""Exact and heuristic maximization of the biclique objectives.

All solvers work on the dense weight matrix. For a fixed left set ``u1`` the
best right set is closed-form: keep exactly the columns whose contribution
``sum(w[u1, v])`` (plus 1 under the node-plus-edge objective) is strictly
positive. Exhaustive search therefore only has to range over subsets of the
smaller side.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    EDGE_WEIGHT,
    NODE_PLUS_EDGE,
    Biclique,
    CapacityError,
    OptResult,
    ValidationError,
    WeightedBipartiteGraph,
    as_graph,
    check_objective,
    evaluate,
)

EXACT = "exact-enumeration"
BRANCH_AND_BOUND = "branch-and-bound"
LOCAL_SEARCH = "local-search"
METHODS = (EXACT, BRANCH_AND_BOUND, LOCAL_SEARCH)

DEFAULT_ENUMERATION_CAP = 26
_CHUNK_BITS = 14


@dataclass(frozen=True)
class SolverConfig:
    objective: str = EDGE_WEIGHT
    method: str = EXACT
    seed: int = 0
    restarts: int = 8
    time_limit: Optional[float] = None
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    threads: int = 1

    def __post_init__(self):
        check_objective(self.objective)
        if self.method not in METHODS:
            raise ValidationError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.restarts < 1:
            raise ValidationError(f"restarts must be >= 1, got {self.restarts}")
        if self.time_limit is not None and not self.time_limit > 0:
            raise ValidationError(f"time_limit must be positive, got {self.time_limit}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.threads < 1:
            raise ValidationError(f"threads must be >= 1, got {self.threads}")


def tie_tolerance(weights: np.ndarray) -> float:
    # Below 1 for any integer matrix of sane magnitude, so integer instances compare exactly.
    return 1e-9 * max(1.0, float(np.abs(weights).max()))


def column_closure(weights: np.ndarray, mask1, objective: str = EDGE_WEIGHT, tol: float = 0.0):
    """Best right-side mask for a fixed left-side mask.

    Columns with contribution exactly at the threshold are left out.
    """
    contrib = weights[np.asarray(mask1, dtype=bool)].sum(axis=0)
    if objective == NODE_PLUS_EDGE:
        contrib = contrib + 1.0
    return contrib > tol


def _oriented(g: WeightedBipartiteGraph):
    """Weight matrix with the smaller side as rows, plus whether it was transposed."""
    if g.n2 < g.n1:
        return g.weights.T, True
    return g.weights, False


def _witness(rows_mask, cols_mask, transposed: bool) -> Biclique:
    b = Biclique.from_masks(rows_mask, cols_mask)
    return b.transpose() if transposed else b


def _scan_chunk(A, start, stop, node_bonus, tol, transposed):
    k = A.shape[0]
    idx = np.arange(start, stop, dtype=np.int64)
    masks = ((idx[:, None] >> np.arange(k, dtype=np.int64)) & 1).astype(np.float64)
    contrib = masks @ A + node_bonus
    vals = np.where(contrib > tol, contrib, 0.0).sum(axis=1)
    if node_bonus:
        vals = vals + masks.sum(axis=1)
    top = vals.max()
    tied = np.flatnonzero(vals >= top - tol)
    cands = []
    for t in tied:
        b = _witness(masks[t].astype(bool), contrib[t] > tol, transposed)
        cands.append((float(vals[t]), b))
    return float(top), cands


def solve_exact(
    g,
    objective: str = EDGE_WEIGHT,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
    threads: int = 1,
) -> OptResult:
    """Globally optimal biclique by enumerating every subset of the smaller side.

    Among optimal witnesses the lexicographically smallest ``(u1, u2)`` is
    returned. Chunk boundaries do not depend on ``threads``, so the result
    does not either.
    """
    g = as_graph(g)
    check_objective(objective)
    t0 = time.perf_counter()
    A, transposed = _oriented(g)
    k = A.shape[0]
    if k > cap:
        raise CapacityError(
            f"smaller side has {k} vertices, above the enumeration cap {cap}; "
            "use branch-and-bound instead"
        )
    tol = tie_tolerance(A)
    node_bonus = 1.0 if objective == NODE_PLUS_EDGE else 0.0
    total = 1 << k
    step = 1 << _CHUNK_BITS
    ranges = [(s, min(s + step, total)) for s in range(0, total, step)]

    def work(r):
        return _scan_chunk(A, r[0], r[1], node_bonus, tol, transposed)

    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, ranges))
    else:
        parts = [work(r) for r in ranges]

    best = max(top for top, _ in parts)
    pool_cands = [(v, b) for _, cands in parts for v, b in cands if v >= best - tol]
    _, witness = min(pool_cands, key=lambda vb: (vb[1].u1, vb[1].u2))
    return OptResult(
        value=evaluate(g, witness, objective),
        witness=witness,
        objective=objective,
        explored=total,
        optimal=True,
        elapsed=time.perf_counter() - t0,
    )


def solve_branch_bound(g, objective: str = EDGE_WEIGHT, config: Optional[SolverConfig] = None) -> OptResult:
    """Depth-first branch and bound over the smaller side.

    Each node fixes the membership of a prefix of the rows (ordered by
    descending absolute row-weight sum). Its closed-form completion is a
    feasible solution; the bound adds, per column, every remaining positive
    weight to the current column contribution.
    """
    g = as_graph(g)
    check_objective(objective)
    time_limit = config.time_limit if config is not None else None
    t0 = time.perf_counter()
    A, transposed = _oriented(g)
    k, m = A.shape
    tol = tie_tolerance(A)
    node = objective == NODE_PLUS_EDGE
    bonus = 1.0 if node else 0.0

    order = np.argsort(-np.abs(A).sum(axis=1), kind="stable")
    rows = A[order]
    # suffix_pos[d] = sum of positive parts of rows d..k-1
    suffix_pos = np.zeros((k + 1, m))
    suffix_pos[:k] = np.cumsum(np.maximum(rows, 0.0)[::-1], axis=0)[::-1]

    best_val = -np.inf
    best_rows = None
    explored = 0
    timed_out = False
    stack = [(0, np.full(m, bonus), np.zeros(k, dtype=bool))]
    while stack:
        explored += 1
        if time_limit is not None and explored % 256 == 0 and time.perf_counter() - t0 > time_limit:
            timed_out = True
            break
        depth, contrib, chosen = stack.pop()
        n_in = int(chosen.sum())
        val = np.where(contrib > tol, contrib, 0.0).sum() + (n_in if node else 0)
        if val > best_val + tol:
            best_val, best_rows = val, chosen
        if depth == k:
            continue
        bound = np.maximum(contrib + suffix_pos[depth], 0.0).sum()
        if node:
            bound += n_in + (k - depth)
        if bound <= best_val + tol:
            continue
        include = chosen.copy()
        include[depth] = True
        stack.append((depth + 1, contrib, chosen))
        stack.append((depth + 1, contrib + rows[depth], include))

    rows_mask = np.zeros(k, dtype=bool)
    rows_mask[order[best_rows]] = True
    cols_mask = column_closure(A, rows_mask, objective, tol)
    witness = _witness(rows_mask, cols_mask, transposed)
    return OptResult(
        value=evaluate(g, witness, objective),
        witness=witness,
        objective=objective,
        explored=explored,
        optimal=not timed_out,
        elapsed=time.perf_counter() - t0,
    )


def _climb(W, x, y, bonus, tol):
    """Best-improvement hill climbing over add, remove and swap moves."""
    while True:
        r = W[:, y].sum(axis=1) + bonus  # gain of adding left vertex u
        c = W[x, :].sum(axis=0) + bonus  # gain of adding right vertex v
        moves = []
        for mask, gain, side in ((x, r, 0), (y, c, 1)):
            out, inn = ~mask, mask
            if out.any():
                u = int(np.argmax(np.where(out, gain, -np.inf)))
                moves.append((gain[u], side, None, u))
            if inn.any():
                u = int(np.argmax(np.where(inn, -gain, -np.inf)))
                moves.append((-gain[u], side, u, None))
            if out.any() and inn.any():
                a = int(np.argmin(np.where(inn, gain, np.inf)))
                b = int(np.argmax(np.where(out, gain, -np.inf)))
                # swapping keeps the opposite side fixed, so the node bonus cancels
                moves.append((gain[b] - gain[a], side, a, b))
        delta, side, drop, add = max(moves, key=lambda mv: mv[0])
        if not delta > tol:
            return x, y
        target = x if side == 0 else y
        if drop is not None:
            target[drop] = False
        if add is not None:
            target[add] = True


def solve_local_search(g, objective: str = EDGE_WEIGHT, config: Optional[SolverConfig] = None) -> OptResult:
    """Random-restart local search; a lower bound on the optimum."""
    g = as_graph(g)
    check_objective(objective)
    config = config or SolverConfig(objective=objective, method=LOCAL_SEARCH)
    t0 = time.perf_counter()
    W = g.weights
    tol = tie_tolerance(W)
    bonus = 1.0 if objective == NODE_PLUS_EDGE else 0.0
    rng = np.random.default_rng(int(config.seed))
    results = []
    for _ in range(config.restarts):
        x = rng.random(g.n1) < 0.5
        y = rng.random(g.n2) < 0.5
        x, y = _climb(W, x, y, bonus, tol)
        b = Biclique.from_masks(x, y)
        results.append((evaluate(g, b, objective), b))
        if config.time_limit is not None and time.perf_counter() - t0 > config.time_limit:
            break
    top = max(v for v, _ in results)
    value, witness = min(
        ((v, b) for v, b in results if v >= top - tol), key=lambda vb: (vb[1].u1, vb[1].u2)
    )
    return OptResult(
        value=value,
        witness=witness,
        objective=objective,
        explored=len(results),
        optimal=False,
        elapsed=time.perf_counter() - t0,
    )


def solve(g, config: Optional[SolverConfig] = None) -> OptResult:
    config = config or SolverConfig()
    if config.method == EXACT:
        return solve_exact(g, config.objective, cap=config.enumeration_cap, threads=config.threads)
    if config.method == BRANCH_AND_BOUND:
        return solve_branch_bound(g, config.objective, config)
    return solve_local_search(g, config.objective, config)
