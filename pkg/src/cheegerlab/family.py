"""Graph families, their coarse disjoint union, and finite-horizon diagnostics.

A statement like "the coboundary is bounded below uniformly in i" is
asymptotic. Here it is replaced by evidence at a finite horizon: the
per-index margins, their infimum, and a fitted decay exponent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from . import graphs as G
from .cheeger import DEFAULT_EXACT_CAP, cheeger
from .graphs import UNREACHABLE, Graph, GraphError

DEFAULT_MARGIN_THRESHOLD = 1.0


@dataclass(frozen=True)
class GraphFamily:
    graphs: tuple[Graph, ...]
    generator: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.graphs:
            raise ValueError("a graph family needs at least one graph")

    @property
    def sizes(self) -> list[int]:
        return [g.n for g in self.graphs]

    @property
    def k_bound(self) -> int:
        return max(g.k_max for g in self.graphs)

    def __len__(self) -> int:
        return len(self.graphs)

    def __getitem__(self, i: int) -> Graph:
        """1-based access, matching the index convention of reports."""
        if not 1 <= i <= len(self.graphs):
            raise IndexError(i)
        return self.graphs[i - 1]


def _member_seed(seed: int, n: int) -> int:
    return int(np.random.SeedSequence([seed, n]).generate_state(1)[0])


def make_family(
    generator: str,
    index_range: Sequence[int] | None = None,
    params: dict | None = None,
    seed: int = 0,
) -> GraphFamily:
    """Build ``generator(n)`` for every ``n`` in the inclusive range.

    ``from_files`` reads graph JSON files listed in ``params["paths"]``.
    """
    params = dict(params or {})
    if generator == "from_files":
        from .io import load_graph

        paths = params.get("paths") or []
        if not paths:
            raise ValueError("from_files needs params['paths']")
        return GraphFamily(tuple(load_graph(p) for p in paths), generator, params)
    if generator not in G.GENERATORS:
        raise ValueError(f"unknown generator {generator!r}")
    if index_range is None or len(index_range) != 2:
        raise ValueError("index range must be [first, last]")
    a, b = int(index_range[0]), int(index_range[1])
    if b < a:
        raise ValueError(f"empty index range [{a}, {b}]")
    members = []
    for n in range(a, b + 1):
        try:
            if generator == "random_regular":
                if "k" not in params:
                    raise ValueError("random_regular needs params['k']")
                members.append(G.random_regular(n, int(params["k"]), _member_seed(seed, n)))
            else:
                members.append(G.GENERATORS[generator](n))
        except GraphError as exc:
            raise ValueError(f"inconsistent parameters for {generator}({n}): {exc}") from exc
    return GraphFamily(tuple(members), generator, params)


def load_family_spec(path: str | Path) -> tuple[GraphFamily, dict]:
    """Read ``{"generator", "range", "params", "seed"}``; returns the raw spec too."""
    spec = json.loads(Path(path).read_text())
    fam = make_family(
        spec["generator"], spec.get("range"), spec.get("params"), int(spec.get("seed", 0))
    )
    return fam, spec


def default_spacing(diameters: Sequence[int]) -> list[int]:
    """Gap between consecutive components i and i+1 (1-based i).

    ``max(diam_i, diam_{i+1}) + i + 1``, bumped where needed so the gaps
    strictly increase.
    """
    gaps: list[int] = []
    for i in range(1, len(diameters)):
        rule = max(diameters[i - 1], diameters[i]) + i + 1
        if gaps:
            rule = max(rule, gaps[-1] + 1)
        gaps.append(rule)
    return gaps


@dataclass(frozen=True, eq=False)
class UnionSpace:
    """Disjoint union of a family, components placed along a line.

    Inside a component the metric is the hop metric; between components
    ``i < j`` every pair is at distance ``gap_i + ... + gap_{j-1}``.
    """

    family: GraphFamily
    gaps: tuple[int, ...]

    @cached_property
    def offsets(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum(self.family.sizes)]).astype(np.int64)

    @property
    def n(self) -> int:
        return int(self.offsets[-1])

    def component_of(self, x: int) -> int:
        """1-based component index of a global vertex."""
        return int(np.searchsorted(self.offsets, x, side="right"))

    def separation(self, i: int, j: int) -> int:
        if i == j:
            return 0
        i, j = min(i, j), max(i, j)
        return int(sum(self.gaps[i - 1 : j - 1]))

    def isolation(self, i: int) -> float:
        """Distance from component i to the rest of the union."""
        near = [self.gaps[k] for k in (i - 2, i - 1) if 0 <= k < len(self.gaps)]
        return float(min(near)) if near else float("inf")

    @cached_property
    def dist(self) -> np.ndarray:
        pos = np.concatenate([[0], np.cumsum(self.gaps)]).astype(np.int64)
        comp = np.repeat(np.arange(len(self.family)), self.family.sizes)
        d = np.abs(pos[comp][:, None] - pos[comp][None, :])
        for i, g in enumerate(self.family.graphs):
            lo, hi = self.offsets[i], self.offsets[i + 1]
            d[lo:hi, lo:hi] = g.dist
        d.setflags(write=False)
        return d

    @cached_property
    def graph(self) -> Graph:
        """The disjoint union as a plain graph (edges only, no spacing)."""
        edges = []
        for i, g in enumerate(self.family.graphs):
            off = int(self.offsets[i])
            edges.extend((u + off, v + off) for u, v in g.undirected_edges)
        return G.build_graph(self.n, edges, name="union")

    def ball(self, x: int, r: float) -> frozenset[int]:
        return frozenset(int(y) for y in np.flatnonzero(self.dist[x] <= r))

    def diameter(self) -> int:
        finite = self.dist[self.dist != UNREACHABLE]
        return int(finite.max()) if finite.size else 0

    def max_ball_size(self, r: float) -> int:
        return int((self.dist <= r).sum(axis=1).max())

    def localizes(self, i: int, S: float) -> bool:
        """Balls of radius S around points of component i stay inside it."""
        return S < self.isolation(i)


def coarse_union(family: GraphFamily, gaps: Sequence[int] | None = None) -> UnionSpace:
    if gaps is None:
        gaps = default_spacing([g.diameter() for g in family.graphs])
    if len(gaps) != len(family) - 1:
        raise ValueError("need one gap per consecutive pair of components")
    return UnionSpace(family, tuple(int(s) for s in gaps))


@dataclass(frozen=True)
class FamilyDiagnostic:
    sizes: tuple[int, ...]
    margins: tuple[float, ...]
    exact: tuple[bool, ...]
    threshold: float

    @property
    def horizon(self) -> int:
        return len(self.margins)

    @property
    def inf_margin(self) -> float:
        return min(self.margins)

    @property
    def sizes_increasing(self) -> bool:
        return all(a < b for a, b in zip(self.sizes, self.sizes[1:]))

    @property
    def heuristic(self) -> bool:
        return not all(self.exact)

    @property
    def decay_exponent(self) -> float | None:
        """Slope of log(margin) against log(size); about -1 for cycles."""
        m = np.asarray(self.margins)
        n = np.asarray(self.sizes, dtype=float)
        if len(m) < 2 or np.any(m <= 0) or np.ptp(n) == 0:
            return None
        return float(np.polyfit(np.log(n), np.log(m), 1)[0])

    @property
    def consistent(self) -> bool:
        return self.inf_margin >= self.threshold and self.sizes_increasing

    @property
    def verdict(self) -> str:
        word = "expander-consistent" if self.consistent else "not expander-consistent"
        return f"{word} at horizon {self.horizon}" + (" (heuristic)" if self.heuristic else "")

    def to_dict(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "margins": list(self.margins),
            "exact": list(self.exact),
            "horizon": self.horizon,
            "threshold": self.threshold,
            "inf_margin": self.inf_margin,
            "decay_exponent": self.decay_exponent,
            "sizes_increasing": self.sizes_increasing,
            "consistent": self.consistent,
            "heuristic": self.heuristic,
            "verdict": self.verdict,
        }


def expander_verdict(
    family: GraphFamily,
    horizon: int | None = None,
    threshold: float = DEFAULT_MARGIN_THRESHOLD,
    cap: int = DEFAULT_EXACT_CAP,
) -> FamilyDiagnostic:
    """Margins ``m_i = 2 h(Γ_i)`` (the l1 gap) over the first ``horizon`` members.

    Members above the exact cap use the sweep upper bound and mark the
    diagnostic heuristic.
    """
    members = family.graphs[: horizon or len(family)]
    cuts = [cheeger(g, cap) for g in members]
    return FamilyDiagnostic(
        sizes=tuple(g.n for g in members),
        margins=tuple(float(2 * c.h) for c in cuts),
        exact=tuple(c.exact for c in cuts),
        threshold=threshold,
    )


def bounded_below_margin(margins: Sequence[float], tol: float) -> bool:
    if len(margins) == 0:
        raise ValueError("need at least one margin")
    return min(margins) >= tol
