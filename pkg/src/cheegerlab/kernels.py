"""Kernels x -> φ(x) on a finite metric space and their variation seminorms.

A kernel assigns to every point a sparse real vector. Its variation at
radius R is ``max ||φ(x) - φ(y)||`` over pairs with ``d(x, y) <= R``; for
probability rows with bounded support, small variation at every fixed R is
the finite-scale shadow of property A.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Protocol, Sequence

import numpy as np

from .graphs import Graph

SYMMETRY_TOL = 1e-10


class MetricSpace(Protocol):
    n: int

    @property
    def dist(self) -> np.ndarray: ...


def underlying_graph(space) -> Graph:
    return space if isinstance(space, Graph) else space.graph


@dataclass(frozen=True, eq=False)
class Kernel:
    """Rows stored sparsely as ``{z: value}``; exact zeros are dropped."""

    space: MetricSpace
    rows: tuple[Mapping[int, float], ...]

    def __post_init__(self):
        if len(self.rows) != self.space.n:
            raise ValueError(f"expected {self.space.n} rows, got {len(self.rows)}")
        clean = tuple(
            {int(z): float(v) for z, v in sorted(row.items()) if v != 0.0} for row in self.rows
        )
        for row in clean:
            for z in row:
                if not 0 <= z < self.space.n:
                    raise ValueError(f"row entry {z} out of range")
        object.__setattr__(self, "rows", clean)
        # symmetry is checked once, up front
        object.__setattr__(self, "symmetry_defect", self._symmetry_defect())

    @classmethod
    def from_matrix(cls, space, M: np.ndarray):
        """``M[x, z] = φ(x)(z)``."""
        M = np.asarray(M, dtype=float)
        return cls(space, tuple({int(z): M[x, z] for z in np.flatnonzero(M[x])} for x in range(M.shape[0])))

    def matrix(self) -> np.ndarray:
        M = np.zeros((self.space.n, self.space.n))
        for x, row in enumerate(self.rows):
            if row:
                M[x, list(row)] = list(row.values())
        return M

    def _symmetry_defect(self) -> float:
        worst = 0.0
        for x, row in enumerate(self.rows):
            for z, v in row.items():
                worst = max(worst, abs(v - self.rows[z].get(x, 0.0)))
        return worst

    @property
    def symmetric(self) -> bool:
        return self.symmetry_defect <= SYMMETRY_TOL

    @cached_property
    def support_radius(self) -> int:
        d = self.space.dist
        return max((int(d[x, z]) for x, row in enumerate(self.rows) for z in row), default=0)

    @cached_property
    def row_sums(self) -> np.ndarray:
        return np.array([sum(row.values()) for row in self.rows])

    @property
    def rowsum_dev(self) -> float:
        return float(np.abs(self.row_sums - 1.0).max()) if self.space.n else 0.0

    @property
    def nonnegative(self) -> bool:
        return all(v >= 0 for row in self.rows for v in row.values())

    def support(self, x: int) -> frozenset[int]:
        return frozenset(self.rows[x])

    def __add__(self, other: "Kernel"):
        rows = []
        for a, b in zip(self.rows, other.rows):
            row = dict(a)
            for z, v in b.items():
                row[z] = row.get(z, 0.0) + v
            rows.append(row)
        return type(self)(self.space, tuple(rows))

    def __mul__(self, lam: float):
        return type(self)(self.space, tuple({z: lam * v for z, v in row.items()} for row in self.rows))

    __rmul__ = __mul__

    def variation(self, R: float, p: int = 1) -> "VariationProfile":
        return variation(self, R, p)

    def to_json(self) -> dict:
        return {
            "S": self.support_radius,
            "rows": {str(x): {str(z): v for z, v in row.items()} for x, row in enumerate(self.rows)},
        }


class L2Kernel(Kernel):
    """Kernel whose rows are read in l2 (the square-root side of the pipeline)."""

    @cached_property
    def row_norms(self) -> np.ndarray:
        return np.array([np.sqrt(sum(v * v for v in row.values())) for row in self.rows])

    def variation(self, R: float, p: int = 2) -> "VariationProfile":
        return variation(self, R, p)


@dataclass(frozen=True)
class VariationProfile:
    R: float
    value: float
    pair: tuple[int, int] | None
    p: int = 1


def pairs_within(space, R: float) -> np.ndarray:
    """Unordered pairs ``x < y`` with ``d(x, y) <= R`` as an (m, 2) array."""
    close = np.triu(space.dist <= R, k=1)
    return np.argwhere(close)


def variation(kernel: Kernel, R: float, p: int = 1, chunk: int = 4096) -> VariationProfile:
    """Exact max of ``||φ(x) - φ(y)||_p`` over pairs at distance at most R."""
    if R < 0:
        raise ValueError("R must be nonnegative")
    pairs = pairs_within(kernel.space, R)
    if len(pairs) == 0:
        return VariationProfile(R, 0.0, None, p)
    M = kernel.matrix()
    best, arg = -1.0, None
    for start in range(0, len(pairs), chunk):
        block = pairs[start : start + chunk]
        diff = M[block[:, 0]] - M[block[:, 1]]
        norms = np.abs(diff).sum(axis=1) if p == 1 else np.sqrt((diff * diff).sum(axis=1))
        k = int(np.argmax(norms))
        if norms[k] > best:
            best, arg = float(norms[k]), (int(block[k, 0]), int(block[k, 1]))
    return VariationProfile(R, best, arg, p)


def edge_variations(kernel: Kernel, graph: Graph) -> np.ndarray:
    """``||φ(x1) - φ(x0)||_1`` for every directed edge, in edge order."""
    M = kernel.matrix()
    tails, heads = graph.edge_arrays
    return np.abs(M[heads] - M[tails]).sum(axis=1)


def delta_kernel(space) -> Kernel:
    return Kernel(space, tuple({x: 1.0} for x in range(space.n)))


def kernel_ball_average(space, S: float) -> Kernel:
    """φ(x) uniform on the ball of radius S around x."""
    if S < 0:
        raise ValueError("S must be nonnegative")
    rows = []
    for x in range(space.n):
        ball = np.flatnonzero(space.dist[x] <= S)
        w = 1.0 / len(ball)
        rows.append({int(z): w for z in ball})
    return Kernel(space, tuple(rows))


def kernel_lazy_walk(space, t: int, a: float = 0.5) -> Kernel:
    """Distribution after t steps of the lazy walk (hold with probability a)."""
    if t < 0 or not 0 < a < 1:
        raise ValueError("need t >= 0 and 0 < a < 1")
    g = underlying_graph(space)
    P = np.eye(g.n) * a
    for u, nbrs in enumerate(g.neighbors):
        if nbrs:
            P[u, list(nbrs)] += (1 - a) / len(nbrs)
        else:
            P[u, u] = 1.0
    M = np.linalg.matrix_power(P, t) if t else np.eye(g.n)
    return Kernel.from_matrix(space, M)


def rowsum_check(kernel: Kernel) -> tuple[np.ndarray, float]:
    """Per-point row sums and their largest deviation from 1."""
    return kernel.row_sums.copy(), kernel.rowsum_dev


def kernel_from_json(space, data: dict, cls=Kernel) -> Kernel:
    rows: list[dict[int, float]] = [dict() for _ in range(space.n)]
    for x, row in data["rows"].items():
        rows[int(x)] = {int(z): float(v) for z, v in row.items()}
    k = cls(space, tuple(rows))
    if "S" in data and k.support_radius > int(data["S"]):
        raise ValueError(f"kernel support radius {k.support_radius} exceeds declared S={data['S']}")
    return k


def build_kernel(space, recipe: str, S: int, t: int | None = None, laziness: float = 0.5) -> Kernel:
    """Named heuristic kernels: ``ball_average``, ``lazy_walk`` or ``delta``."""
    if recipe == "ball_average":
        return kernel_ball_average(space, S)
    if recipe == "lazy_walk":
        return kernel_lazy_walk(space, S if t is None else t, laziness)
    if recipe == "delta":
        return delta_kernel(space)
    raise ValueError(f"unknown kernel recipe {recipe!r}")


KERNEL_RECIPES: Sequence[str] = ("ball_average", "lazy_walk", "delta")
