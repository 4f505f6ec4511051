"""Two-level, two-dimensional MDL summaries with holes.

Each dimension's hierarchy is a root over the leaves, so a region is a whole
row, a whole column, a single cell, or the whole matrix. A summary is a set
of regions covering every 1-entry; the 0-entries it covers are its holes,
and its length is ``#regions + #holes``.

The exact solver works on the complement: choosing uncovered rows ``R`` and
columns ``C`` saves ``|R| + |C| + zeros(RxC) - ones(RxC)`` against the
constant ``n1 + n2 + #zeros``, which is the node-plus-edge biclique objective
on the ``+1 / -1`` matrix ``1 - 2*M``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import NODE_PLUS_EDGE, CapacityError, ValidationError, WeightedBipartiteGraph
from .solve import solve_exact

log = logging.getLogger(__name__)

ROW, COL, CELL, ALL = "row", "col", "cell", "all"
_KIND_RANK = {ROW: 0, COL: 1, CELL: 2, ALL: 3}
ORACLE_CAP = 20


@dataclass(frozen=True)
class Region:
    kind: str
    i: int = -1
    j: int = -1

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise ValidationError(f"unknown region kind {self.kind!r}")

    @classmethod
    def row(cls, i):
        return cls(ROW, int(i))

    @classmethod
    def col(cls, j):
        return cls(COL, -1, int(j))

    @classmethod
    def cell(cls, i, j):
        return cls(CELL, int(i), int(j))

    @classmethod
    def whole(cls):
        return cls(ALL)

    def sort_key(self):
        return (_KIND_RANK[self.kind], self.i, self.j)

    def mask(self, shape) -> np.ndarray:
        m = np.zeros(shape, dtype=bool)
        n1, n2 = shape
        if self.kind == ALL:
            m[:] = True
        elif self.kind == ROW:
            _check_index(self.i, n1, "row")
            m[self.i, :] = True
        elif self.kind == COL:
            _check_index(self.j, n2, "column")
            m[:, self.j] = True
        else:
            _check_index(self.i, n1, "row")
            _check_index(self.j, n2, "column")
            m[self.i, self.j] = True
        return m

    def to_dict(self) -> dict:
        if self.kind == ROW:
            return {"kind": ROW, "i": self.i}
        if self.kind == COL:
            return {"kind": COL, "j": self.j}
        if self.kind == CELL:
            return {"kind": CELL, "i": self.i, "j": self.j}
        return {"kind": ALL}

    @classmethod
    def from_dict(cls, d: dict) -> "Region":
        kind = d.get("kind")
        if kind == ROW:
            return cls.row(d["i"])
        if kind == COL:
            return cls.col(d["j"])
        if kind == CELL:
            return cls.cell(d["i"], d["j"])
        if kind == ALL:
            return cls.whole()
        raise ValidationError(f"unknown region kind {kind!r}")


def _check_index(x, n, what):
    if not 0 <= x < n:
        raise ValidationError(f"{what} index {x} out of range [0, {n})")


@dataclass(frozen=True)
class Summary:
    regions: tuple
    holes: tuple

    @property
    def length(self) -> int:
        return len(self.regions) + len(self.holes)

    def to_dict(self) -> dict:
        return {
            "regions": [r.to_dict() for r in self.regions],
            "holes": [list(h) for h in self.holes],
            "length": self.length,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Summary":
        try:
            regions = [Region.from_dict(r) for r in d["regions"]]
            holes = [tuple(int(x) for x in h) for h in d["holes"]]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"summary JSON needs keys regions, holes: {exc}") from None
        return cls(tuple(sorted(regions, key=Region.sort_key)), tuple(sorted(holes)))


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValidationError(f"expected a non-empty 2-d matrix, got shape {a.shape}")
    if not np.all((a == 0) | (a == 1)):
        raise ValidationError("matrix entries must be 0 or 1")
    return a.astype(np.int8)


def coverage(shape, regions: Iterable[Region]) -> np.ndarray:
    cov = np.zeros(shape, dtype=bool)
    for r in regions:
        cov |= r.mask(shape)
    return cov


def summarize(m, regions: Iterable[Region]) -> Summary:
    """Build a summary from its regions; holes are the covered zeros."""
    a = as_matrix(m)
    regions = tuple(sorted(set(regions), key=Region.sort_key))
    cov = coverage(a.shape, regions)
    holes = tuple(tuple(int(x) for x in ij) for ij in np.argwhere(cov & (a == 0)))
    return Summary(regions, holes)


def summary_problems(m, s: Summary) -> list[str]:
    """Human-readable reasons why ``s`` is not a valid summary of ``m``; empty if valid."""
    a = as_matrix(m)
    cov = coverage(a.shape, s.regions)
    problems = []
    uncovered = [tuple(int(x) for x in ij) for ij in np.argwhere(~cov & (a == 1))]
    if uncovered:
        problems.append(f"uncovered 1-cells: {uncovered}")
    expected = {tuple(int(x) for x in ij) for ij in np.argwhere(cov & (a == 0))}
    given = set(s.holes)
    if given != expected:
        problems.append(
            f"holes differ from covered zeros: missing {sorted(expected - given)}, "
            f"extra {sorted(given - expected)}"
        )
    if len(given) != len(s.holes) or len(set(s.regions)) != len(s.regions):
        problems.append("duplicate regions or holes")
    return problems


def validate_summary(m, s: Summary) -> bool:
    problems = summary_problems(m, s)
    for p in problems:
        log.info("invalid summary: %s", p)
    return not problems


@dataclass(frozen=True)
class MdlhDecomposition:
    """Counts for a row/column-style summary with uncovered rows R and columns C."""

    R: tuple
    C: tuple
    Z: int
    z: int
    w: int

    @classmethod
    def of(cls, m, R, C) -> "MdlhDecomposition":
        a = as_matrix(m)
        R, C = tuple(sorted(R)), tuple(sorted(C))
        sub = a[np.ix_(R, C)] if R and C else np.zeros((0, 0), dtype=np.int8)
        return cls(R, C, int((a == 0).sum()), int((sub == 0).sum()), int(sub.sum()))

    def length(self, n1: int, n2: int) -> int:
        return (n1 + n2 + self.Z) - (len(self.R) + len(self.C) + self.z - self.w)


def row_col_summary(m, R, C) -> Summary:
    """Rows outside R, columns outside C, and single cells for the 1s left in RxC."""
    a = as_matrix(m)
    n1, n2 = a.shape
    Rs, Cs = set(R), set(C)
    regions = [Region.row(i) for i in range(n1) if i not in Rs]
    regions += [Region.col(j) for j in range(n2) if j not in Cs]
    regions += [Region.cell(i, j) for i in sorted(Rs) for j in sorted(Cs) if a[i, j] == 1]
    return summarize(a, regions)


def whole_matrix_summary(m) -> Summary:
    return summarize(m, [Region.whole()])


def _preference(s: Summary):
    return (s.length, len(s.regions), [r.sort_key() for r in s.regions])


def mdlh_to_problem_p(m) -> WeightedBipartiteGraph:
    """``+1`` on 0-cells, ``-1`` on 1-cells."""
    a = as_matrix(m)
    return WeightedBipartiteGraph(1.0 - 2.0 * a)


def solve_mdlh(m) -> Summary:
    """Minimum-length summary via the node-plus-edge biclique optimum."""
    a = as_matrix(m)
    n1, n2 = a.shape
    res = solve_exact(mdlh_to_problem_p(a), NODE_PLUS_EDGE)
    via_p = row_col_summary(a, res.witness.u1, res.witness.u2)
    expected = (n1 + n2 + int((a == 0).sum())) - res.value
    if via_p.length != expected:
        raise AssertionError(f"reconstructed length {via_p.length} != {expected}")
    return min((via_p, whole_matrix_summary(a)), key=_preference)


def brute_force_mdlh(m) -> Summary:
    """Exhaustive search over every uncovered-row and uncovered-column selection."""
    a = as_matrix(m)
    n1, n2 = a.shape
    if n1 + n2 > ORACLE_CAP:
        raise CapacityError(f"oracle limited to n1 + n2 <= {ORACLE_CAP}, got {n1 + n2}")
    zeros_total = int((a == 0).sum())
    row_masks = (np.arange(1 << n1)[:, None] >> np.arange(n1)) & 1
    col_masks = (np.arange(1 << n2)[:, None] >> np.arange(n2)) & 1
    # ones[r, c] / zeros[r, c]: counts inside R x C for row-mask r and column-mask c
    ones = row_masks @ a @ col_masks.T
    zeros = row_masks @ (1 - a) @ col_masks.T
    lengths = (
        (n1 - row_masks.sum(1))[:, None]
        + (n2 - col_masks.sum(1))[None, :]
        + (zeros_total - zeros)
        + ones
    )
    best = int(lengths.min())
    cands = []
    for r, c in np.argwhere(lengths == best):
        R = np.flatnonzero(row_masks[r]).tolist()
        C = np.flatnonzero(col_masks[c]).tolist()
        cands.append(row_col_summary(a, R, C))
    cands.append(whole_matrix_summary(a))
    return min(cands, key=_preference)
