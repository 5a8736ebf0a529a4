"""Smallest achievable kernel variation at fixed radii, by linear programming.

For a finite metric space, pair radius R and support radius S,

    V*(R, S) = min max_{d(x,y) <= R} ||φ(x) - φ(y)||_1

over kernels with nonnegative rows summing to 1 and ``supp φ(x) ⊆ B_S(x)``,
optionally with ``φ(x)(z) = φ(z)(x)``. Every solve returns a two-sided
certificate: the variation of the returned kernel (upper) and a
Lagrangian bound from the dual multipliers (lower).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import coo_matrix

from .errors import CapExceeded
from .kernels import Kernel, pairs_within, variation

DEFAULT_LP_CAP = 2000
DEFAULT_TOL = 1e-7


@dataclass
class PropaLP:
    """The LP in ``min c.x, A_ub x <= 0, A_eq x = 1, 0 <= x <= ub`` form."""

    c: np.ndarray
    A_ub: coo_matrix
    A_eq: coo_matrix
    ub: np.ndarray
    phi_index: dict[tuple[int, int], int]
    n_vars: int

    @property
    def b_ub(self) -> np.ndarray:
        return np.zeros(self.A_ub.shape[0])

    @property
    def b_eq(self) -> np.ndarray:
        return np.ones(self.A_eq.shape[0])


def build_lp(space, R: float, S: float, symmetric: bool = False, cap: int = DEFAULT_LP_CAP) -> PropaLP:
    if S < 0:
        raise ValueError("S must be nonnegative (no feasible kernel otherwise)")
    n = space.n
    dist = space.dist
    balls = [np.flatnonzero(dist[x] <= S) for x in range(n)]
    pairs = pairs_within(space, R)

    phi_index: dict[tuple[int, int], int] = {}
    nvar = 0
    for x in range(n):
        for z in balls[x]:
            z = int(z)
            key = (min(x, z), max(x, z)) if symmetric else (x, z)
            if key not in phi_index:
                phi_index[key] = nvar
                nvar += 1

    def var(x: int, z: int) -> int:
        return phi_index[(min(x, z), max(x, z)) if symmetric else (x, z)]

    n_phi = nvar
    n_u = sum(len(np.union1d(balls[x], balls[y])) for x, y in pairs)
    n_vars = n_phi + n_u + 1
    if n_vars > cap:
        raise CapExceeded(f"LP would have {n_vars} variables, cap is {cap}")
    t = n_vars - 1

    rows, cols, vals = [], [], []
    r = 0
    u = n_phi
    ball_sets = [set(b.tolist()) for b in balls]
    for x, y in pairs:
        x, y = int(x), int(y)
        first_u = u
        for z in np.union1d(balls[x], balls[y]):
            z = int(z)
            # u >= ±(φ(x)(z) - φ(y)(z))
            for sign in (1.0, -1.0):
                if z in ball_sets[x]:
                    rows.append(r); cols.append(var(x, z)); vals.append(sign)
                if z in ball_sets[y]:
                    rows.append(r); cols.append(var(y, z)); vals.append(-sign)
                rows.append(r); cols.append(u); vals.append(-1.0)
                r += 1
            u += 1
        # sum_z u_z <= t
        for j in range(first_u, u):
            rows.append(r); cols.append(j); vals.append(1.0)
        rows.append(r); cols.append(t); vals.append(-1.0)
        r += 1
    A_ub = coo_matrix((vals, (rows, cols)), shape=(r, n_vars))

    erows, ecols = [], []
    for x in range(n):
        for z in balls[x]:
            erows.append(x); ecols.append(var(x, int(z)))
    A_eq = coo_matrix((np.ones(len(erows)), (erows, ecols)), shape=(n, n_vars))

    c = np.zeros(n_vars)
    c[t] = 1.0
    ub = np.ones(n_vars)
    ub[t] = 2.0
    return PropaLP(c, A_ub, A_eq, ub, phi_index, n_vars)


def dual_lower_bound(lp: PropaLP, ineq_marginals: np.ndarray, eq_marginals: np.ndarray) -> float:
    """Lagrangian bound valid for any multipliers.

    With ``λ >= 0`` on the inequalities and free ``μ`` on the equalities,
    every feasible x satisfies ``c.x >= -λ.b_ub - μ.b_eq + Σ_j min(0, r_j) ub_j``
    where ``r = c + A_ub^T λ + A_eq^T μ``. Solver marginals are ``-λ`` and
    ``-μ`` in scipy's sign convention.
    """
    lam = np.maximum(-np.asarray(ineq_marginals), 0.0)
    mu = -np.asarray(eq_marginals)
    reduced = lp.c + lp.A_ub.T @ lam + lp.A_eq.T @ mu
    bound = -lam @ lp.b_ub - mu @ lp.b_eq + np.minimum(reduced, 0.0) @ lp.ub
    return float(bound)


@dataclass
class PropaResult:
    value: float
    kernel: Kernel = field(repr=False)
    lower: float
    upper: float
    iterations: int
    n_vars: int
    R: float
    S: float
    symmetric: bool

    @property
    def certificate_gap(self) -> float:
        return self.upper - self.lower

    def to_dict(self) -> dict:
        return {
            "R": self.R,
            "S": self.S,
            "symmetric": self.symmetric,
            "V_star": self.value,
            "lower": self.lower,
            "upper": self.upper,
            "certificate_gap": self.certificate_gap,
            "iterations": self.iterations,
            "n_vars": self.n_vars,
        }


def propa_optimum(
    space,
    R: float,
    S: float,
    symmetric: bool = False,
    cap: int = DEFAULT_LP_CAP,
    tol: float = DEFAULT_TOL,
) -> PropaResult:
    if R < 1:
        raise ValueError("pair radius R must be at least 1")
    lp = build_lp(space, R, S, symmetric, cap)
    has_ub = lp.A_ub.shape[0] > 0
    res = linprog(
        lp.c,
        A_ub=lp.A_ub.tocsr() if has_ub else None,
        b_ub=lp.b_ub if has_ub else None,
        A_eq=lp.A_eq.tocsr(),
        b_eq=lp.b_eq,
        bounds=np.column_stack([np.zeros(lp.n_vars), lp.ub]),
        method="highs",
    )
    if res.status != 0:
        raise RuntimeError(f"LP solve failed: {res.message}")

    M = np.zeros((space.n, space.n))
    for (x, z), j in lp.phi_index.items():
        val = max(float(res.x[j]), 0.0)
        M[x, z] = val
        if symmetric:
            M[z, x] = val
    kernel = Kernel.from_matrix(space, M)
    upper = variation(kernel, R).value
    ineq = res.ineqlin.marginals if has_ub else np.zeros(0)
    # variation is a maximum of norms, so 0 is always a valid lower bound
    lower = max(dual_lower_bound(lp, ineq, res.eqlin.marginals), 0.0)
    if upper - lower > tol:
        raise RuntimeError(f"certificate gap {upper - lower:.3g} exceeds tol {tol:g}")
    return PropaResult(upper, kernel, lower, upper, int(res.nit), lp.n_vars, R, S, symmetric)
