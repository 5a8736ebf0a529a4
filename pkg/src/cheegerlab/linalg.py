"""Dense symmetric eigendecomposition and operator-norm estimation."""

from __future__ import annotations

import math

import numpy as np

JACOBI_MAX_N = 256


class ConvergenceError(RuntimeError):
    pass


def jacobi_eigh(A: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray, int]:
    """Cyclic Jacobi rotations for a real symmetric matrix.

    Sweeps until the off-diagonal Frobenius norm is at most
    ``tol * max(1, ||A||_F)``. Returns ``(eigenvalues, eigenvectors, sweeps)``
    with ascending eigenvalues and eigenvectors in the columns.
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    if not np.allclose(A, A.T, rtol=0, atol=1e-12 * max(1.0, np.abs(A).max(initial=0.0))):
        raise ValueError("matrix must be symmetric")
    A = (A + A.T) / 2
    V = np.eye(n)
    target = tol * max(1.0, float(np.linalg.norm(A)))

    def off(M: np.ndarray) -> float:
        # direct sum; ||M||^2 - ||diag M||^2 cancels catastrophically
        return float(np.linalg.norm(M - np.diag(np.diag(M))))

    sweeps = 0
    while off(A) > target:
        if sweeps >= max_sweeps:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                # t = sgn(θ) / (|θ| + sqrt(θ² + 1)) with θ = d / (2 apq), written
                # without forming θ so tiny apq cannot overflow
                d = A[q, q] - A[p, p]
                a = 2.0 * apq
                t = math.copysign(1.0, d) * a / (abs(d) + math.hypot(d, a)) if d else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                colp, colq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * colp - s * colq
                A[:, q] = s * colp + c * colq
                rowp, rowq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rowp - s * rowq
                A[q, :] = s * rowp + c * rowq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order], sweeps


def eigh_symmetric(A: np.ndarray, method: str = "auto") -> tuple[np.ndarray, np.ndarray]:
    """Jacobi for small matrices; LAPACK above ``JACOBI_MAX_N`` under ``auto``."""
    if method == "jacobi" or (method == "auto" and A.shape[0] <= JACOBI_MAX_N):
        w, V, _ = jacobi_eigh(A)
        return w, V
    if method in ("lapack", "auto"):
        try:
            return np.linalg.eigh(A)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(str(exc)) from exc
    raise ValueError(f"unknown eigensolver {method!r}")


def spectral_norm(M: np.ndarray, tol: float = 1e-12, max_iter: int = 100_000, seed: int = 0) -> float:
    """Largest singular value by power iteration on ``M^T M``.

    Stops when successive Rayleigh quotients agree to relative ``tol``.
    The start vector is drawn from a fixed seed so results are reproducible.
    """
    M = np.asarray(M, dtype=float)
    if not M.size or not np.any(M):
        return 0.0
    B = M.T @ M
    x = np.random.default_rng(seed).standard_normal(B.shape[0])
    x /= np.linalg.norm(x)
    lam = 0.0
    for _ in range(max_iter):
        y = B @ x
        new = float(x @ y)
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return 0.0
        x = y / norm
        if abs(new - lam) <= tol * new:
            return float(np.sqrt(max(float(x @ (B @ x)), new)))
        lam = new
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps")
