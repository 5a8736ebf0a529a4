"""Exact rational reference solvers, used to freeze expected values.

Nothing here shares code with the floating-point optimizer: the LP is
written out directly from the definition and solved by a dense two-phase
simplex over ``fractions.Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Row = dict[int, Fraction]


class Infeasible(Exception):
    pass


def simplex_min(c: Sequence[Fraction], A: Sequence[Row], b: Sequence[Fraction], n: int) -> tuple[Fraction, list[Fraction]]:
    """Minimize ``c.x`` subject to ``A x = b``, ``x >= 0`` exactly.

    ``A`` is a list of sparse rows; ``b`` must be nonnegative. Rows owning a
    private unit column start with it in the basis, the others get an
    artificial variable (index ``>= n``) that phase one drives to zero.
    Pricing is Dantzig's rule, falling back to Bland's rule during runs of
    degenerate pivots so the method terminates.
    """
    m = len(A)
    if any(bi < 0 for bi in b):
        raise ValueError("right-hand side must be nonnegative")
    T = [dict(row) for row in A]
    rhs = [Fraction(bi) for bi in b]

    owners: dict[int, list[int]] = {}
    for i, row in enumerate(T):
        for j in row:
            owners.setdefault(j, []).append(i)
    basis: list[int] = [-1] * m
    for j, rows_j in owners.items():
        if len(rows_j) == 1 and T[rows_j[0]][j] == 1 and basis[rows_j[0]] < 0:
            basis[rows_j[0]] = j
    n_art = 0
    for i in range(m):
        if basis[i] < 0:
            basis[i] = n + n_art
            T[i][n + n_art] = Fraction(1)
            n_art += 1
    width = n + n_art

    def pivot(r: int, col: int, obj: Row) -> None:
        p = T[r][col]
        T[r] = {j: v / p for j, v in T[r].items()}
        rhs[r] /= p
        pr = T[r]
        for i in range(m):
            if i != r and col in T[i]:
                f = T[i][col]
                row = T[i]
                for j, v in pr.items():
                    nv = row.get(j, Fraction(0)) - f * v
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
                rhs[i] -= f * rhs[r]
        f = obj.get(col)
        if f:
            for j, v in pr.items():
                nv = obj.get(j, Fraction(0)) - f * v
                if nv:
                    obj[j] = nv
                else:
                    obj.pop(j, None)
            obj[-1] = obj.get(-1, Fraction(0)) - f * rhs[r]
        basis[r] = col

    def reduced_costs(cost: Sequence[Fraction]) -> Row:
        # obj[j] = reduced cost of column j; obj[-1] = -(objective value)
        obj: Row = {j: v for j, v in enumerate(cost) if v}
        obj[-1] = Fraction(0)
        for i, bv in enumerate(basis):
            cb = cost[bv]
            if cb:
                for j, v in T[i].items():
                    obj[j] = obj.get(j, Fraction(0)) - cb * v
                obj[-1] -= cb * rhs[i]
        return {j: v for j, v in obj.items() if v or j == -1}

    def run(cost: Sequence[Fraction], allowed: int) -> None:
        obj = reduced_costs(cost)
        stall = 0
        while True:
            candidates = [j for j, v in obj.items() if 0 <= j < allowed and v < 0]
            if not candidates:
                return
            if stall > 20:
                entering = min(candidates)
            else:
                entering = min(candidates, key=lambda j: (obj[j], j))
            best = None
            for i in range(m):
                a = T[i].get(entering)
                if a is not None and a > 0:
                    key = (rhs[i] / a, basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise ValueError("LP is unbounded")
            stall = stall + 1 if best[0][0] == 0 else 0
            pivot(best[1], entering, obj)

    if n_art:
        run([Fraction(0)] * n + [Fraction(1)] * n_art, width)
        if sum(rhs[i] for i in range(m) if basis[i] >= n) != 0:
            raise Infeasible("no feasible point")
        for i in range(m):
            if basis[i] >= n:
                col = next((j for j in sorted(T[i]) if j < n), None)
                if col is not None:
                    pivot(i, col, {})
    # artificials may stay basic at zero but never re-enter
    run(list(c) + [Fraction(0)] * n_art, n)
    x = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = rhs[i]
    return sum((c[j] * x[j] for j in range(n)), Fraction(0)), x


def exact_propa(dist: Sequence[Sequence[int]], R: int, S: int, symmetric: bool) -> Fraction:
    """Exact minimal variation over kernels supported in S-balls.

    ``dist`` is a plain distance table (unreachable pairs as any value > S, R).
    """
    n = len(dist)
    cols: dict[tuple, int] = {}

    def col(key: tuple) -> int:
        if key not in cols:
            cols[key] = len(cols)
        return cols[key]

    def phi(x: int, z: int) -> int | None:
        return col(("phi", x, z)) if dist[x][z] <= S else None

    for x in range(n):
        for z in range(n):
            phi(x, z)
    t = col(("t",))
    A: list[Row] = []
    b: list[Fraction] = []
    one = Fraction(1)
    for x in range(n):
        A.append({phi(x, z): one for z in range(n) if dist[x][z] <= S})
        b.append(one)
    if symmetric:
        for x in range(n):
            for z in range(x + 1, n):
                if dist[x][z] <= S:
                    A.append({phi(x, z): one, phi(z, x): -one})
                    b.append(Fraction(0))
    for x in range(n):
        for y in range(x + 1, n):
            if not 0 < dist[x][y] <= R:
                continue
            total: Row = {t: -one}
            for z in range(n):
                px, py = phi(x, z), phi(y, z)
                if px is None and py is None:
                    continue
                u = col(("u", x, y, z))
                total[u] = one
                for sign in (one, -one):
                    row: Row = {u: -one}
                    if px is not None:
                        row[px] = sign
                    if py is not None:
                        row[py] = row.get(py, Fraction(0)) - sign
                    row[col(("slack", x, y, z, int(sign)))] = one
                    A.append(row)
                    b.append(Fraction(0))
            total[col(("slack-t", x, y))] = one
            A.append(total)
            b.append(Fraction(0))
    n_cols = len(cols)
    c = [Fraction(0)] * n_cols
    c[t] = one
    value, _ = simplex_min(c, A, b, n_cols)
    return value
