"""Finite graphs with symmetric directed edges, hop metric and generators."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

# Sentinel for "no path". Comparisons like ``dist <= r`` stay correct; the
# value must never be added to anything.
UNREACHABLE = np.iinfo(np.int64).max


class GraphError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple graph stored as a list of directed edges.

    Every undirected edge ``{u, v}`` appears as both ``(u, v)`` and ``(v, u)``,
    so boundary counts are twice the usual undirected counts.
    """

    n: int
    directed_edges: tuple[tuple[int, int], ...]
    name: str = field(default="", compare=False)

    @cached_property
    def degree(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for u, _ in self.directed_edges:
            deg[u] += 1
        return deg

    @property
    def k_max(self) -> int:
        return int(self.degree.max()) if self.n else 0

    @property
    def num_directed_edges(self) -> int:
        return len(self.directed_edges)

    @cached_property
    def undirected_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((u, v) for u, v in self.directed_edges if u < v)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.directed_edges:
            adj[u].append(v)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Tails and heads of the directed edges as index arrays."""
        if not self.directed_edges:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        arr = np.asarray(self.directed_edges, dtype=np.int64)
        return arr[:, 0], arr[:, 1]

    @cached_property
    def dist(self) -> np.ndarray:
        """All-pairs hop distances; ``UNREACHABLE`` across components."""
        d = np.full((self.n, self.n), UNREACHABLE, dtype=np.int64)
        for s in range(self.n):
            d[s, s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for v in self.neighbors[u]:
                    if d[s, v] == UNREACHABLE:
                        d[s, v] = d[s, u] + 1
                        queue.append(v)
        d.setflags(write=False)
        return d

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        seen = np.zeros(self.n, dtype=bool)
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            members = np.flatnonzero(self.dist[s] != UNREACHABLE)
            seen[members] = True
            comps.append(tuple(int(v) for v in members))
        return tuple(comps)

    def is_connected(self) -> bool:
        return len(self.components) <= 1

    def diameter(self) -> int:
        """Largest finite distance (diameter of the largest-diameter component)."""
        finite = self.dist[self.dist != UNREACHABLE]
        return int(finite.max()) if finite.size else 0

    def ball(self, x: int, r: float) -> frozenset[int]:
        if r < 0:
            raise GraphError(f"radius must be nonnegative, got {r}")
        return frozenset(int(y) for y in np.flatnonzero(self.dist[x] <= r))

    def max_ball_size(self, r: float) -> int:
        return int((self.dist <= r).sum(axis=1).max())

    def subgraph(self, vertices: Sequence[int]) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        edges = [
            (index[u], index[v])
            for u, v in self.undirected_edges
            if u in index and v in index
        ]
        return build_graph(len(vertices), edges, name=f"{self.name}[sub]")

    def __repr__(self) -> str:
        label = self.name or "Graph"
        return f"<{label} n={self.n} directed_edges={self.num_directed_edges} k_max={self.k_max}>"


def build_graph(n: int, edges: Iterable[Sequence[int]], name: str = "") -> Graph:
    """Build a graph from undirected pairs, dropping loops and duplicates."""
    if n < 0:
        raise GraphError(f"vertex count must be nonnegative, got {n}")
    pairs = set()
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            continue
        pairs.add((u, v))
        pairs.add((v, u))
    return Graph(n, tuple(sorted(pairs)), name=name)


def path(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs n >= 1")
    return build_graph(n, [(i, i + 1) for i in range(n - 1)], name=f"path({n})")


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)], name=f"cycle({n})")


def complete(n: int) -> Graph:
    if n < 1:
        raise GraphError("complete needs n >= 1")
    return build_graph(
        n, [(i, j) for i in range(n) for j in range(i + 1, n)], name=f"complete({n})"
    )


def hypercube(d: int) -> Graph:
    if d < 1:
        raise GraphError("hypercube needs d >= 1")
    n = 1 << d
    edges = [(v, v ^ (1 << b)) for v in range(n) for b in range(d)]
    return build_graph(n, edges, name=f"hypercube({d})")


def margulis(n: int) -> Graph:
    """Gabber-Galil graph on Z_n x Z_n, collapsed to a simple graph.

    Vertex ``(x, y)`` has index ``x * n + y`` and is joined to
    ``(x +- 2y, y)``, ``(x +- (2y + 1), y)``, ``(x, y +- 2x)`` and
    ``(x, y +- (2x + 1))``.
    """
    if n < 2:
        raise GraphError("margulis needs n >= 2")

    def idx(x: int, y: int) -> int:
        return (x % n) * n + (y % n)

    edges = []
    for x in range(n):
        for y in range(n):
            u = idx(x, y)
            for v in (
                idx(x + 2 * y, y),
                idx(x - 2 * y, y),
                idx(x + 2 * y + 1, y),
                idx(x - 2 * y - 1, y),
                idx(x, y + 2 * x),
                idx(x, y - 2 * x),
                idx(x, y + 2 * x + 1),
                idx(x, y - 2 * x - 1),
            ):
                edges.append((u, v))
    return build_graph(n * n, edges, name=f"margulis({n})")


def random_regular(n: int, k: int, seed: int, max_tries: int = 1000) -> Graph:
    """k-regular simple graph from the configuration model with rejection."""
    if k < 0 or k >= n:
        raise GraphError(f"need 0 <= k < n, got n={n}, k={k}")
    if (n * k) % 2:
        raise GraphError(f"n*k must be even, got n={n}, k={k}")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), k)
    for _ in range(max_tries):
        perm = rng.permutation(stubs).reshape(-1, 2)
        if np.any(perm[:, 0] == perm[:, 1]):
            continue
        keys = np.sort(perm, axis=1)
        if len(np.unique(keys, axis=0)) != len(keys):
            continue
        return build_graph(n, keys.tolist(), name=f"random_regular({n},{k},{seed})")
    raise GraphError(f"no simple {k}-regular graph on {n} vertices after {max_tries} tries")


def random_connected(n: int, p: float, rng: np.random.Generator, max_tries: int = 1000) -> Graph:
    """Erdos-Renyi G(n, p) conditioned on connectivity by rejection."""
    for _ in range(max_tries):
        upper = np.triu(rng.random((n, n)) < p, k=1)
        g = build_graph(n, np.argwhere(upper).tolist(), name=f"gnp({n},{p:.2f})")
        if g.is_connected():
            return g
    raise GraphError(f"G({n}, {p}) never connected in {max_tries} tries")


GENERATORS = {
    "path": path,
    "cycle": cycle,
    "complete": complete,
    "hypercube": hypercube,
    "margulis": margulis,
    "random_regular": random_regular,
}


def ball_growth_bound(k: int, r: int) -> int:
    """Largest possible ball of radius r in a graph of valency at most k."""
    if r == 0 or k == 0:
        return 1
    if k == 1:
        return 2
    if k == 2:
        return 1 + 2 * r
    return 1 + k * ((k - 1) ** r - 1) // (k - 2)


def _canonical_edges(n: int, edges: Sequence[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    best = None
    for perm in itertools.permutations(range(n)):
        key = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in edges))
        if best is None or key < best:
            best = key
    return best


def all_graphs(n: int) -> list[Graph]:
    """Every simple graph on n vertices up to isomorphism (small n only)."""
    slots = list(itertools.combinations(range(n), 2))
    seen = {}
    for bits in range(1 << len(slots)):
        edges = [slots[i] for i in range(len(slots)) if (bits >> i) & 1]
        key = _canonical_edges(n, edges)
        if key not in seen:
            seen[key] = build_graph(n, key, name=f"g{n}:{'-'.join(f'{u}{v}' for u, v in key) or 'empty'}")
    return sorted(seen.values(), key=lambda g: (g.num_directed_edges, g.directed_edges))
