"""Cheeger constants and the l1 coboundary gap.

Convention: edges are directed, so ``|∂F|`` counts each undirected crossing
edge twice and ``h(Γ) = ½ min |∂F| / |F|`` over ``1 <= |F| <= n/2``. This
equals the usual undirected edge expansion ``min e(F, F^c) / |F|``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cochains import VertexFunction, boundary_size
from .errors import CapExceeded
from .graphs import Graph

DEFAULT_EXACT_CAP = 24
CHUNK = 1 << 20


@dataclass(frozen=True)
class CutResult:
    vertices: tuple[int, ...]
    boundary_size: int
    n: int
    exact: bool = True
    method: str = "gray-code"

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.boundary_size, self.size)

    @property
    def h(self) -> Fraction:
        """Cheeger constant if ``exact``, otherwise an upper bound on it."""
        return self.ratio / 2

    def to_dict(self) -> dict:
        return {
            "F": list(self.vertices),
            "boundary_size": self.boundary_size,
            "size": self.size,
            "ratio": float(self.ratio),
            "h": float(self.h),
            "h_fraction": f"{self.h.numerator}/{self.h.denominator}",
            "exact": self.exact,
            "method": self.method,
        }


def _mask_to_vertices(mask: int, n: int) -> tuple[int, ...]:
    return tuple(v for v in range(n) if (mask >> v) & 1)


def _adjacency_masks(graph: Graph) -> tuple[np.ndarray, np.ndarray]:
    adj = np.zeros(graph.n, dtype=np.int64)
    for u, v in graph.undirected_edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    deg = np.array([len(nb) for nb in graph.neighbors], dtype=np.int64)
    return adj, deg


def _directed_boundary_of_mask(adj: np.ndarray, mask: int) -> int:
    cut = 0
    for v in range(len(adj)):
        if (mask >> v) & 1:
            cut += bin(int(adj[v]) & ~mask).count("1")
    return 2 * cut


# per-size best: size -> (boundary, mask)
Best = dict[int, tuple[int, int]]


def merge_best(*parts: Best) -> Best:
    """Min-reduction of per-size partial results (boundary, then mask)."""
    out: Best = {}
    for part in parts:
        for size, cand in part.items():
            if size not in out or cand < out[size]:
                out[size] = cand
    return out


def enumerate_range(graph: Graph, lo: int, hi: int, chunk: int = CHUNK) -> Best:
    """Scan Gray-code steps ``lo <= i < hi`` over subsets of vertices ``0..n-2``.

    Vertex ``n-1`` is never in the scanned set; a cut containing it is
    reached through its complement, which has the same boundary. Each step
    flips one vertex and updates the boundary from the popcount of that
    vertex's neighbours inside the current set.
    """
    n = graph.n
    full = (1 << n) - 1
    half = n // 2
    adj, deg = _adjacency_masks(graph)
    best: Best = {}
    lo = max(lo, 1)
    if lo >= hi:
        return best
    prev_index = lo - 1
    prev_gray = prev_index ^ (prev_index >> 1)
    boundary0 = _directed_boundary_of_mask(adj, prev_gray)
    for start in range(lo, hi, chunk):
        stop = min(start + chunk, hi)
        i = np.arange(start, stop, dtype=np.int64)
        gray = i ^ (i >> 1)
        bit = np.bitwise_count((i & -i) - 1).astype(np.int64)
        added = ((gray >> bit) & 1).astype(bool)
        before = gray ^ (np.int64(1) << bit)
        inside = np.bitwise_count(adj[bit] & before).astype(np.int64)
        delta = 2 * (deg[bit] - 2 * inside)
        delta = np.where(added, delta, -delta)
        boundary = boundary0 + np.cumsum(delta)
        boundary0 = int(boundary[-1])
        size = np.bitwise_count(gray).astype(np.int64)
        for s in range(1, half + 1):
            for sel, masks in (
                (size == s, gray),
                (size == n - s, full ^ gray),
            ):
                if not sel.any():
                    continue
                b = boundary[sel]
                bmin = int(b.min())
                mask = int(masks[sel][b == bmin].min())
                cand = (bmin, mask)
                if s not in best or cand < best[s]:
                    best[s] = cand
    return best


def split_ranges(n: int, parts: int) -> list[tuple[int, int]]:
    """Split the Gray-code index range of an n-vertex scan into ``parts`` pieces."""
    total = 1 << max(n - 1, 0)
    edges = np.linspace(1, total, parts + 1).round().astype(np.int64)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if a < b]


def select_cut(graph: Graph, best: Best) -> CutResult:
    """Exact final choice: minimal ratio, then smallest |F|, then smallest mask."""
    if not best:
        raise ValueError(f"no admissible cut on {graph.n} vertices")
    size, (b, mask) = min(best.items(), key=lambda kv: (Fraction(kv[1][0], kv[0]), kv[0], kv[1][1]))
    return CutResult(_mask_to_vertices(mask, graph.n), b, graph.n)


def _isolating_cut(graph: Graph) -> CutResult:
    comp = min(graph.components, key=lambda c: (len(c), sum(1 << v for v in c)))
    return CutResult(tuple(comp), 0, graph.n, exact=True, method="component")


def cheeger_exact(graph: Graph, cap: int = DEFAULT_EXACT_CAP) -> CutResult:
    if graph.n < 2:
        raise ValueError("Cheeger constant needs at least 2 vertices")
    if graph.n > cap:
        raise CapExceeded(f"n={graph.n} exceeds exact cap {cap}")
    if not graph.is_connected():
        return _isolating_cut(graph)
    return select_cut(graph, enumerate_range(graph, 1, 1 << (graph.n - 1)))


def laplacian(graph: Graph) -> np.ndarray:
    L = np.zeros((graph.n, graph.n))
    for u, v in graph.undirected_edges:
        L[u, v] -= 1
        L[v, u] -= 1
    L[np.diag_indices(graph.n)] = [len(nb) for nb in graph.neighbors]
    return L


def fiedler_vector(graph: Graph) -> tuple[float, np.ndarray]:
    try:
        vals, vecs = np.linalg.eigh(laplacian(graph))
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"Laplacian eigensolver failed: {exc}") from exc
    return float(vals[1]), vecs[:, 1]


def cheeger_sweep(graph: Graph) -> CutResult:
    """Best prefix cut of the Fiedler ordering; ``h`` is an upper bound."""
    if graph.n < 2:
        raise ValueError("Cheeger constant needs at least 2 vertices")
    if not graph.is_connected():
        return _isolating_cut(graph)
    _, vec = fiedler_vector(graph)
    order = np.argsort(vec, kind="stable")
    n = graph.n
    best = None
    for k in range(1, n):
        side = order[:k] if k <= n // 2 else order[k:]
        b = boundary_size(graph, side)
        key = (Fraction(b, len(side)), len(side), sorted(int(v) for v in side))
        if best is None or key < best:
            best = key
    ratio, size, verts = best
    return CutResult(tuple(verts), int(ratio * size), n, exact=False, method="fiedler-sweep")


def cheeger_spectral_lower(graph: Graph) -> float:
    """Certified lower bound ``h >= λ₂ / 2`` from the Laplacian spectrum.

    For ``|F| <= n/2``, ``e(F, F^c) >= λ₂ |F||F^c| / n >= λ₂ |F| / 2``.
    """
    if graph.n < 2:
        raise ValueError("Cheeger constant needs at least 2 vertices")
    lam, _ = fiedler_vector(graph)
    slack = 1e-12 * max(graph.k_max, 1) * graph.n
    return max(0.0, lam / 2 - slack)


def cheeger(graph: Graph, cap: int = DEFAULT_EXACT_CAP) -> CutResult:
    """Exact cut when within the cap, otherwise the sweep upper bound."""
    if graph.n <= cap:
        return cheeger_exact(graph, cap)
    return cheeger_sweep(graph)


@dataclass(frozen=True)
class GapResult:
    gap: Fraction
    cut: CutResult
    witness: VertexFunction = field(repr=False)


def l1_gap(graph: Graph, cap: int = DEFAULT_EXACT_CAP) -> GapResult:
    """``inf ||df||_1 / ||f||_{l1/C}`` over nonconstant f, which equals 2h."""
    cut = cheeger_exact(graph, cap)
    return GapResult(2 * cut.h, cut, VertexFunction.indicator(graph, cut.vertices))


def check_expander(graph: Graph, k: int, eps: float, cap: int = DEFAULT_EXACT_CAP) -> bool:
    """Whether the graph is a (k, eps)-expander.

    Above the exact cap, the answer comes from the sweep upper bound (if it
    falls below ``eps``) or the spectral lower bound (if it reaches ``eps``);
    otherwise the question is undecided and ``CapExceeded`` is raised.
    """
    if graph.k_max > k:
        return False
    if eps <= 0:
        return True
    if graph.n <= cap:
        return cheeger_exact(graph, cap).h >= Fraction(eps)
    if cheeger_sweep(graph).h < Fraction(eps):
        return False
    if cheeger_spectral_lower(graph) >= eps:
        return True
    raise CapExceeded(f"n={graph.n} above cap {cap} and the spectral bounds do not decide eps={eps}")
