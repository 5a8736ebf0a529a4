"""Turn an l1 kernel with unit row sums into a symmetric one.

Pipeline: square-root the entries (l1 -> l2), normalize rows, read the
kernel as an operator T with columns θ(x), take ``T' = (T^T T)^{1/2}``,
cut T' down to finite propagation and symmetrize to get T'', and read off
``ψ(x) = T'' δ_x``. Squaring the entries of ψ gives back a symmetric l1
kernel. The truncation is measured, not promised: the report carries the
operator-norm error and the bounds it implies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import PreconditionError
from .kernels import SYMMETRY_TOL, Kernel, L2Kernel, variation
from .linalg import eigh_symmetric, spectral_norm

BOUND_SLACK = 1e-9


def alpha(row):
    """Entrywise ``sqrt(|η|)``; maps l1 rows to l2 rows of squared norm ||η||_1."""
    if isinstance(row, Mapping):
        return {z: float(np.sqrt(abs(v))) for z, v in row.items()}
    return np.sqrt(np.abs(np.asarray(row, dtype=float)))


def beta(row):
    """Entrywise ``|ξ|^2``; maps l2 rows to l1 rows of norm ||ξ||_2^2."""
    if isinstance(row, Mapping):
        return {z: float(v) ** 2 for z, v in row.items()}
    return np.abs(np.asarray(row, dtype=float)) ** 2


def alpha_kernel(phi: Kernel) -> L2Kernel:
    return L2Kernel(phi.space, tuple(alpha(r) for r in phi.rows))


def normalize(kernel: L2Kernel, tol: float = 0.1) -> L2Kernel:
    """Scale every row to unit l2 norm; rows shorter than ``1 - tol`` are refused."""
    norms = kernel.row_norms
    if np.any(norms < 1 - tol):
        worst = int(np.argmin(norms))
        raise PreconditionError(f"row {worst} has norm {norms[worst]:.6g} < 1 - {tol}")
    return L2Kernel(
        kernel.space,
        tuple({z: v / nrm for z, v in row.items()} for row, nrm in zip(kernel.rows, norms)),
    )


@dataclass(frozen=True, eq=False)
class PropagationOperator:
    """Real matrix ``M[y, x]`` on a finite metric space."""

    matrix: np.ndarray
    space: object = field(repr=False)

    @property
    def propagation(self) -> int:
        ys, xs = np.nonzero(self.matrix)
        return int(self.space.dist[ys, xs].max()) if len(ys) else 0

    def is_real(self) -> bool:
        return not np.iscomplexobj(self.matrix)

    def is_self_adjoint(self, tol: float = 1e-10) -> bool:
        return bool(np.abs(self.matrix - self.matrix.T).max(initial=0.0) <= tol)

    def is_psd(self, tol: float = 1e-10) -> bool:
        if not self.is_self_adjoint(tol):
            return False
        return bool(np.linalg.eigvalsh(self.matrix).min(initial=0.0) >= -tol)

    def apply(self, xi: np.ndarray) -> np.ndarray:
        return self.matrix @ xi

    def column(self, x: int) -> np.ndarray:
        return self.matrix[:, x]


def kernel_operator(theta: Kernel) -> PropagationOperator:
    """``(T ξ)(y) = Σ_x θ(x)(y) ξ(x)``, i.e. ``T[y, x] = θ(x)(y)``."""
    return PropagationOperator(theta.matrix().T.copy(), theta.space)


def positive_sqrt(T: PropagationOperator, method: str = "auto") -> PropagationOperator:
    """``(T^T T)^{1/2}`` by symmetric eigendecomposition.

    Eigenvalues at or below the round-off floor ``n * eps * λ_max`` are
    clamped to 0: they cannot be told apart from 0, and the square root
    would blow their noise up from 1e-16 to 1e-8.
    """
    gram = T.matrix.T @ T.matrix
    gram = (gram + gram.T) / 2
    w, V = eigh_symmetric(gram, method)
    floor = len(w) * np.finfo(float).eps * max(float(w.max(initial=0.0)), 0.0)
    root = (V * np.sqrt(np.where(w > floor, w, 0.0))) @ V.T
    return PropagationOperator((root + root.T) / 2, T.space)


def truncate(Tp: PropagationOperator, S_cut: float) -> tuple[PropagationOperator, float]:
    """Drop entries beyond distance ``S_cut``, symmetrize, and measure the change."""
    if S_cut < 0:
        raise ValueError("S_cut must be nonnegative")
    M = np.where(Tp.space.dist <= S_cut, Tp.matrix, 0.0)
    M = (M + M.T) / 2
    return PropagationOperator(M, Tp.space), spectral_norm(M - Tp.matrix)


def psi_kernel(T2: PropagationOperator) -> L2Kernel:
    """``ψ(x) = T'' δ_x``, the columns of T''."""
    return L2Kernel.from_matrix(T2.space, T2.matrix.T)


@dataclass(frozen=True, eq=False)
class SymmetrisationResult:
    psi: L2Kernel
    theta: L2Kernel
    T: PropagationOperator
    T_root: PropagationOperator
    T_cut: PropagationOperator
    truncation_error: float
    S_cut: float
    R: float

    @property
    def symmetry_defect(self) -> float:
        return self.psi.symmetry_defect

    @property
    def unital_defect(self) -> float:
        return float(np.abs(self.psi.row_norms - 1.0).max())

    @property
    def normalization_slack(self) -> float:
        return float(np.abs(self.theta.row_norms - 1.0).max())

    @property
    def sqrt_residual(self) -> float:
        """``max |T'^2 - T^T T|`` entrywise."""
        R2 = self.T_root.matrix @ self.T_root.matrix
        return float(np.abs(R2 - self.T.matrix.T @ self.T.matrix).max())

    @property
    def isometry_defect(self) -> float:
        """``max_x | ||T δ_x|| - ||T' δ_x|| |``."""
        a = np.linalg.norm(self.T.matrix, axis=0)
        b = np.linalg.norm(self.T_root.matrix, axis=0)
        return float(np.abs(a - b).max())

    @property
    def variation_before(self) -> float:
        return variation(self.theta, self.R, p=2).value

    @property
    def variation_after(self) -> float:
        return variation(self.psi, self.R, p=2).value

    def bound_checks(self) -> dict[str, bool]:
        err = self.truncation_error
        return {
            "symmetric": self.symmetry_defect <= SYMMETRY_TOL,
            "variation": self.variation_after <= self.variation_before + 2 * err + BOUND_SLACK,
            "unital": self.unital_defect <= err + self.normalization_slack + BOUND_SLACK,
            "propagation": self.psi.support_radius <= self.S_cut,
        }

    def report(self) -> dict:
        checks = self.bound_checks()
        return {
            "symmetry_defect": self.symmetry_defect,
            "unital_defect": self.unital_defect,
            "truncation_error": self.truncation_error,
            "propagation": self.psi.support_radius,
            "S_cut": self.S_cut,
            "R": self.R,
            "variation_before": self.variation_before,
            "variation_after": self.variation_after,
            "sqrt_residual": self.sqrt_residual,
            "isometry_defect": self.isometry_defect,
            "normalization_slack": self.normalization_slack,
            "checks": checks,
            "bound_check": all(checks.values()),
        }


def symmetrise(
    phi: Kernel,
    S_cut: float,
    R: float = 1,
    max_rowsum_dev: float = 0.1,
    method: str = "auto",
) -> SymmetrisationResult:
    if phi.rowsum_dev > max_rowsum_dev:
        raise PreconditionError(
            f"row sums deviate from 1 by {phi.rowsum_dev:.3g} > {max_rowsum_dev}"
        )
    theta = normalize(alpha_kernel(phi), tol=max_rowsum_dev)
    T = kernel_operator(theta)
    T_root = positive_sqrt(T, method)
    T_cut, err = truncate(T_root, S_cut)
    return SymmetrisationResult(psi_kernel(T_cut), theta, T, T_root, T_cut, err, S_cut, R)


def to_l1_symmetric(psi: L2Kernel) -> Kernel:
    """Square the entries of a symmetric l2 kernel; row sums become ``||ψ(x)||^2``."""
    if not psi.symmetric:
        raise PreconditionError(f"kernel is not symmetric (defect {psi.symmetry_defect:.3g})")
    return Kernel(psi.space, tuple(beta(row) for row in psi.rows))
