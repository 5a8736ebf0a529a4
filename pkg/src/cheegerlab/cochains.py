"""Real 0- and 1-cochains on graphs: quotient norm, coboundary, co-area."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graphs import Graph


@dataclass(frozen=True, eq=False)
class VertexFunction:
    graph: Graph
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.graph.n,):
            raise ValueError(f"expected {self.graph.n} values, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("vertex function has non-finite entries")
        object.__setattr__(self, "values", vals)

    @classmethod
    def indicator(cls, graph: Graph, subset) -> "VertexFunction":
        vals = np.zeros(graph.n)
        vals[list(subset)] = 1.0
        return cls(graph, vals)

    def l1(self) -> float:
        return float(np.abs(self.values).sum())

    def total(self) -> float:
        return math.fsum(self.values)

    def __add__(self, other):
        if isinstance(other, VertexFunction):
            return VertexFunction(self.graph, self.values + other.values)
        return VertexFunction(self.graph, self.values + float(other))

    def tolist(self) -> list[float]:
        return self.values.tolist()


@dataclass(frozen=True, eq=False)
class EdgeFunction:
    """Values indexed like ``graph.directed_edges``."""

    graph: Graph
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.graph.num_directed_edges,):
            raise ValueError(
                f"expected {self.graph.num_directed_edges} values, got shape {vals.shape}"
            )
        object.__setattr__(self, "values", vals)

    def l1(self) -> float:
        return float(np.abs(self.values).sum())

    def total(self) -> float:
        return math.fsum(self.values)

    def is_zero_sum(self, tol: float = 0.0) -> bool:
        return abs(self.total()) <= tol

    def undirected(self) -> dict[tuple[int, int], float]:
        """View keyed by ``(u, v)`` with ``u < v``."""
        return {
            (u, v): float(val)
            for (u, v), val in zip(self.graph.directed_edges, self.values)
            if u < v
        }

    def tolist(self) -> list[float]:
        return self.values.tolist()


def quotient_norm(f: VertexFunction | np.ndarray) -> tuple[float, float]:
    """Distance from ``f`` to the constants in l1, and the minimizing shift.

    Returns ``(min_c sum|f + c|, c)``. The minimizers are minus the medians;
    for even length the smallest minimizing ``c`` (minus the upper median) is
    returned.
    """
    vals = np.sort(f.values if isinstance(f, VertexFunction) else np.asarray(f, dtype=float))
    if vals.size == 0:
        return 0.0, 0.0
    c = -float(vals[vals.size // 2])
    return float(np.abs(vals + c).sum()), c


def quotient_norms(batch: np.ndarray) -> np.ndarray:
    """Row-wise quotient norms of a 2-D array."""
    med = np.median(batch, axis=1, keepdims=True)
    return np.abs(batch - med).sum(axis=1)


def coboundary(f: VertexFunction) -> EdgeFunction:
    tails, heads = f.graph.edge_arrays
    return EdgeFunction(f.graph, f.values[heads] - f.values[tails])


def coboundary_l1_batch(graph: Graph, batch: np.ndarray) -> np.ndarray:
    """Row-wise ``||d f||_1`` for a batch of vertex functions."""
    tails, heads = graph.edge_arrays
    return np.abs(batch[:, heads] - batch[:, tails]).sum(axis=1)


def mean_center(f: VertexFunction) -> VertexFunction:
    """Subtract the mean so the entries sum to exactly zero.

    Values are rounded to a common power-of-two grid just below the
    precision of the largest entry, where sums are exact integer sums; the
    leftover is moved onto the largest entry. Already centred input is
    returned unchanged, so the map is idempotent.
    """
    vals = f.values.copy()
    if vals.size == 0 or math.fsum(vals) == 0.0:
        return VertexFunction(f.graph, vals)
    vals -= vals.mean()
    top = float(np.abs(vals).max())
    if top == 0.0:
        return VertexFunction(f.graph, vals)
    unit = math.ldexp(1.0, math.frexp(top)[1] - 50)
    ints = np.rint(vals / unit)
    big = int(np.argmax(np.abs(ints)))
    ints[big] -= math.fsum(ints)
    return VertexFunction(f.graph, ints * unit)


@dataclass(frozen=True)
class LevelSet:
    weight: float
    vertices: frozenset[int]


def coarea_decompose(f: VertexFunction) -> list[LevelSet]:
    """Write a positive function as ``sum a_j * indicator(F_j)``.

    The sets are nested and returned smallest first:
    ``F_1 ⊂ F_2 ⊂ ... ⊂ F_m``, with ``F_m`` the whole vertex set.
    """
    vals = f.values
    if np.any(vals <= 0):
        raise ValueError("co-area decomposition needs strictly positive values")
    levels = np.unique(vals)[::-1]
    out = []
    for j, level in enumerate(levels):
        below = levels[j + 1] if j + 1 < len(levels) else 0.0
        members = frozenset(int(v) for v in np.flatnonzero(vals >= level))
        out.append(LevelSet(float(level - below), members))
    return out


def recompose(graph: Graph, levels: Sequence[LevelSet]) -> VertexFunction:
    vals = np.zeros(graph.n)
    for lv in levels:
        vals[list(lv.vertices)] += lv.weight
    return VertexFunction(graph, vals)


def boundary_size(graph: Graph, subset) -> int:
    """Number of directed edges with exactly one endpoint in ``subset``."""
    inside = np.zeros(graph.n, dtype=bool)
    inside[list(subset)] = True
    tails, heads = graph.edge_arrays
    return int(np.count_nonzero(inside[tails] != inside[heads]))


@dataclass(frozen=True, eq=False)
class FamilyFunction:
    """One cochain per member of a graph family (finite horizon)."""

    parts: tuple[VertexFunction | EdgeFunction, ...]

    @property
    def kind(self) -> str:
        return "edge" if isinstance(self.parts[0], EdgeFunction) else "vertex"

    @property
    def sup_l1(self) -> float:
        return max((p.l1() for p in self.parts), default=0.0)

    def sums(self) -> np.ndarray:
        return np.array([p.total() for p in self.parts])

    def is_cochain(self, tol: float = 0.0) -> bool:
        """Membership in the kernel of the summation map.

        ``tol=0`` is the strict condition; a positive tolerance accepts
        numerically produced cochains.
        """
        return bool(np.all(np.abs(self.sums()) <= tol))

    def coboundary(self) -> "FamilyFunction":
        if self.kind != "vertex":
            raise TypeError("coboundary is defined on vertex cochains")
        return FamilyFunction(tuple(coboundary(p) for p in self.parts))


def sigma0(F: FamilyFunction) -> np.ndarray:
    if F.kind != "vertex":
        raise TypeError("sigma0 takes a vertex family function")
    return F.sums()


def sigma1(F: FamilyFunction) -> np.ndarray:
    if F.kind != "edge":
        raise TypeError("sigma1 takes an edge family function")
    return F.sums()
