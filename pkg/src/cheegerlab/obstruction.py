"""Expansion forces large kernel variation.

From a symmetric kernel φ on a graph, pick the basepoint e minimizing the
edge-sum ``Σ_E |φ(x1)(e) - φ(x0)(e)|`` and set ``f(x) = φ(x)(e) - 1/|Γ|``.
Then f has sum close to zero, l1 norm close to 1 when supports are small,
and ``||df||_1 <= k V(φ, 1)``. The l1 gap ``||df||_1 >= 2h ||f||_{l1/C}``
turns this into the lower bound

    V(φ, 1) >= (h / k) (1 - N_S / |Γ| - δ),

with ``N_S`` the largest S-ball and δ the row-sum deviation budget.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .cheeger import DEFAULT_EXACT_CAP, cheeger_exact, cheeger_spectral_lower
from .cochains import VertexFunction, coboundary, quotient_norm
from .errors import PreconditionError
from .family import GraphFamily, UnionSpace, coarse_union, expander_verdict
from .graphs import Graph
from .kernels import Kernel, build_kernel, edge_variations, variation
from .symmetrisation import symmetrise, to_l1_symmetric

INEQ_SLACK = 1e-9
DEFAULT_ROWSUM_BUDGET = 0.01
# LB_i falling at least like n^-1/2 reads as "tends to 0" at finite horizon
DECAY_CUTOFF = -0.5


def _edge_sums(kernel: Kernel, graph: Graph) -> np.ndarray:
    """``z -> Σ_{(x0,x1) in E} |φ(x1)(z) - φ(x0)(z)|`` for every z."""
    M = kernel.matrix()
    tails, heads = graph.edge_arrays
    return np.abs(M[heads] - M[tails]).sum(axis=0)


def _require_symmetric(kernel: Kernel) -> None:
    if not kernel.symmetric:
        raise PreconditionError(
            f"kernel must be symmetric (defect {kernel.symmetry_defect:.3g}); symmetrise it first"
        )


def basepoint(kernel: Kernel, graph: Graph) -> int:
    _require_symmetric(kernel)
    if kernel.space.n != graph.n:
        raise ValueError("kernel and graph sizes differ")
    return int(np.argmin(_edge_sums(kernel, graph)))


@dataclass(frozen=True)
class Inequality:
    name: str
    lhs: float
    rhs: float
    relation: str  # "<=", ">=" or "=="

    @property
    def slack(self) -> float:
        if self.relation == "<=":
            return self.rhs - self.lhs
        if self.relation == ">=":
            return self.lhs - self.rhs
        return -abs(self.lhs - self.rhs)

    @property
    def holds(self) -> bool:
        return self.slack >= -INEQ_SLACK

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "relation": self.relation,
            "slack": self.slack,
            "holds": self.holds,
        }


@dataclass(frozen=True)
class WitnessReport:
    basepoint: int
    f: VertexFunction = field(repr=False)
    sum_f: float
    l1_norm: float
    quotient_norm: float
    coboundary_l1: float
    ball_size: int
    support_radius: int
    k: int
    edge_chain: tuple[float, float, float, float]
    bounds: dict[str, Inequality]

    @property
    def ratio(self) -> float | None:
        return self.coboundary_l1 / self.quotient_norm if self.quotient_norm > 0 else None

    @property
    def all_hold(self) -> bool:
        return all(b.holds for b in self.bounds.values())

    def to_dict(self) -> dict:
        return {
            "basepoint": self.basepoint,
            "f": self.f.tolist(),
            "sum_f": self.sum_f,
            "l1_norm": self.l1_norm,
            "quotient_norm": self.quotient_norm,
            "coboundary_l1": self.coboundary_l1,
            "ratio": self.ratio,
            "ball_size": self.ball_size,
            "support_radius": self.support_radius,
            "k": self.k,
            "edge_chain": list(self.edge_chain),
            "bounds": {k: v.to_dict() for k, v in self.bounds.items()},
            "all_hold": self.all_hold,
        }


def extract_witness(kernel: Kernel, graph: Graph) -> WitnessReport:
    _require_symmetric(kernel)
    n = graph.n
    sums = _edge_sums(kernel, graph)
    e = int(np.argmin(sums))
    M = kernel.matrix()
    f = VertexFunction(graph, M[:, e] - 1.0 / n)
    S = kernel.support_radius
    N = len(graph.ball(e, S))
    df = coboundary(f)
    qn, _ = quotient_norm(f)
    k = graph.k_max
    rowsum_e = float(M[e].sum())
    row_l1_e = float(np.abs(M[e]).sum())

    # ||df||_1 = edge sum at e <= mean over z <= (|E|/|Γ|) max edge variation <= k V(φ, 1)
    edge_var = edge_variations(kernel, graph)
    mean_over_z = float(sums.mean())
    max_edge = float(edge_var.max(initial=0.0))
    chain = (
        df.l1(),
        float(sums[e]),
        mean_over_z,
        graph.num_directed_edges / n * max_edge,
    )
    v1 = variation(kernel, 1).value
    bounds = {
        "a_sum": Inequality("a_sum", f.total(), rowsum_e - 1.0, "=="),
        "b_upper": Inequality("b_upper", f.l1(), row_l1_e + 1.0, "<="),
        "c_lower": Inequality("c_lower", f.l1(), 1.0 - N / n, ">="),
        "d_edge_sum": Inequality("d_edge_sum", chain[0], chain[1], "<="),
        "d_average": Inequality("d_average", chain[1], chain[2], "<="),
        "d_max_edge": Inequality("d_max_edge", chain[2], chain[3], "<="),
        "d_valency": Inequality("d_valency", chain[3], k * v1, "<="),
    }
    return WitnessReport(e, f, f.total(), f.l1(), qn, df.l1(), N, S, k, chain, bounds)


@dataclass(frozen=True)
class LowerBound:
    value: float
    h: float
    h_source: str  # "exact", "spectral", "given" or "trivial"
    k: int
    ball_size: int
    n: int
    S: float
    rowsum_dev: float

    @property
    def vacuous(self) -> bool:
        return self.value <= 0

    def to_dict(self) -> dict:
        return {
            "LB": self.value,
            "h": self.h,
            "h_source": self.h_source,
            "k": self.k,
            "N_S": self.ball_size,
            "n": self.n,
            "S": self.S,
            "rowsum_dev": self.rowsum_dev,
            "vacuous": self.vacuous,
        }


def lower_bound_report(
    graph: Graph,
    S: float,
    rowsum_dev: float = DEFAULT_ROWSUM_BUDGET,
    h: float | Fraction | None = None,
    cap: int = DEFAULT_EXACT_CAP,
) -> LowerBound:
    """Uniform lower bound on ``V(φ, 1)`` over symmetric kernels with support
    radius at most S and row-sum deviation at most ``rowsum_dev``.

    ``h`` is computed exactly within the cap; above it the spectral bound
    ``λ₂/2 <= h`` is used, which keeps the result a valid lower bound.
    """
    if h is not None:
        h_val, source = float(h), "given"
    elif graph.n < 2:
        # a single point: every ball is the whole space and the bound is vacuous
        h_val, source = 0.0, "trivial"
    elif graph.n <= cap:
        h_val, source = float(cheeger_exact(graph, cap).h), "exact"
    else:
        h_val, source = cheeger_spectral_lower(graph), "spectral"
    k = graph.k_max
    N = graph.max_ball_size(S)
    if k == 0:
        value = 0.0
    else:
        value = max(0.0, h_val / k * (1.0 - N / graph.n - rowsum_dev))
    return LowerBound(value, h_val, source, k, N, graph.n, S, rowsum_dev)


def variation_lower_bound(
    graph: Graph,
    S: float,
    rowsum_dev: float = DEFAULT_ROWSUM_BUDGET,
    cap: int = DEFAULT_EXACT_CAP,
) -> float:
    return lower_bound_report(graph, S, rowsum_dev, cap=cap).value


def symmetric_kernel(graph, recipe: str, S: int, max_rowsum_dev: float = 0.1) -> Kernel:
    """A symmetric l1 kernel of support radius at most S from a named recipe.

    Recipes that are already symmetric on the input pass through; otherwise
    the kernel goes through the symmetrisation pipeline with ``S_cut = S``.
    """
    raw = build_kernel(graph, recipe, S)
    if raw.symmetric:
        return raw
    return to_l1_symmetric(symmetrise(raw, S, max_rowsum_dev=max_rowsum_dev).psi)


@dataclass
class IndexRow:
    index: int
    n: int
    h: float
    h_source: str
    k: int
    S: int
    N_S: int
    LB: float
    V_achieved: float
    kernel_rowsum_dev: float
    kernel_S: int
    LB_kernel: float
    witness_ok: bool

    @property
    def bound_respected(self) -> bool:
        return self.V_achieved >= self.LB_kernel - INEQ_SLACK


@dataclass
class IncompatibilityReport:
    rows: list[IndexRow]
    rowsum_budget: float
    recipe: str
    vacuous_all: bool
    diagnostic: dict

    @property
    def inf_LB(self) -> float:
        return min(r.LB for r in self.rows)

    @property
    def certified_positive(self) -> bool:
        return self.inf_LB > 0

    @property
    def decay_exponent(self) -> float | None:
        """Slope of log(LB) against log(n); None when undefined."""
        lb = np.array([r.LB for r in self.rows])
        n = np.array([r.n for r in self.rows], dtype=float)
        if len(lb) < 2 or np.any(lb <= 0) or np.ptp(n) == 0:
            return None
        return float(np.polyfit(np.log(n), np.log(lb), 1)[0])

    @property
    def obstructed(self) -> bool:
        """Every LB_i is positive and the sequence shows no power-law decay."""
        if not self.certified_positive:
            return False
        slope = self.decay_exponent
        return slope is None or slope > DECAY_CUTOFF

    @property
    def verdict(self) -> str:
        S_values = sorted({r.S for r in self.rows})
        S_txt = str(S_values[0]) if len(S_values) == 1 else f"{S_values[0]}..{S_values[-1]}"
        if self.vacuous_all:
            return f"vacuous at S={S_txt} (supports cover whole components)"
        word = "obstructed" if self.obstructed else "not obstructed"
        return f"{word} at (S={S_txt}, horizon={len(self.rows)})"

    def to_dict(self) -> dict:
        return {
            "recipe": self.recipe,
            "rowsum_budget": self.rowsum_budget,
            "rows": [dict(vars(r), bound_respected=r.bound_respected) for r in self.rows],
            "inf_LB": self.inf_LB,
            "certified_positive": self.certified_positive,
            "LB_decay_exponent": self.decay_exponent,
            "obstructed": self.obstructed,
            "vacuous": self.vacuous_all,
            "verdict": self.verdict,
            "expander_diagnostic": self.diagnostic,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "n", "h", "k", "N_S", "LB", "V_achieved", "verdict"])
        for r in self.rows:
            w.writerow([r.index, r.n, repr(r.h), r.k, r.N_S, repr(r.LB), repr(r.V_achieved), self.verdict])
        return buf.getvalue()


SRule = int | Callable[[Graph], int]


def family_incompatibility(
    family: GraphFamily,
    S: SRule,
    recipe: str = "ball_average",
    rowsum_budget: float = DEFAULT_ROWSUM_BUDGET,
    union: UnionSpace | None = None,
    cap: int = DEFAULT_EXACT_CAP,
) -> IncompatibilityReport:
    """Per member: the uniform lower bound LB_i and the variation actually
    achieved by the recipe's symmetric kernel, built on the member itself.

    Members are localized in the coarse union only if every radius-S ball
    stays inside its component; otherwise the run is refused.
    """
    union = union or coarse_union(family)
    rows = []
    vacuous_all = True
    for i, g in enumerate(family.graphs, start=1):
        S_i = S(g) if callable(S) else int(S)
        if not union.localizes(i, S_i):
            raise PreconditionError(
                f"S={S_i} reaches past component {i} (isolation {union.isolation(i)})"
            )
        lb = lower_bound_report(g, S_i, rowsum_budget, cap=cap)
        if g.max_ball_size(S_i) < g.n:
            vacuous_all = False
        phi = symmetric_kernel(g, recipe, S_i)
        v = variation(phi, 1).value
        lb_kernel = lower_bound_report(g, phi.support_radius, phi.rowsum_dev, h=lb.h).value
        witness = extract_witness(phi, g)
        rows.append(
            IndexRow(
                index=i, n=g.n, h=lb.h, h_source=lb.h_source, k=lb.k, S=S_i,
                N_S=lb.ball_size, LB=lb.value, V_achieved=v,
                kernel_rowsum_dev=phi.rowsum_dev, kernel_S=phi.support_radius,
                LB_kernel=lb_kernel, witness_ok=witness.all_hold,
            )
        )
    diag = expander_verdict(family, cap=cap).to_dict()
    return IncompatibilityReport(rows, rowsum_budget, recipe, vacuous_all, diag)
