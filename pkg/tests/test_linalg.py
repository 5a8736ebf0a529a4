import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cheegerlab.linalg import ConvergenceError, eigh_symmetric, jacobi_eigh, spectral_norm

entries = st.floats(-10, 10, allow_nan=False)


def symmetric_matrices(max_n=8):
    return st.integers(1, max_n).flatmap(
        lambda n: arrays(float, (n, n), elements=entries).map(lambda a: (a + a.T) / 2)
    )


@given(symmetric_matrices())
def test_jacobi_matches_lapack(A):
    w, V, _ = jacobi_eigh(A)
    assert np.allclose(w, np.linalg.eigvalsh(A), atol=1e-9 * max(1.0, np.abs(A).max()))
    assert np.allclose(V.T @ V, np.eye(len(A)), atol=1e-10)
    assert np.allclose((V * w) @ V.T, A, atol=1e-9 * max(1.0, np.abs(A).max()))


def test_jacobi_diagonal_needs_no_sweeps():
    w, V, sweeps = jacobi_eigh(np.diag([3.0, 1.0, 2.0]))
    assert sweeps == 0 and w.tolist() == [1.0, 2.0, 3.0]


def test_jacobi_rejects_bad_input():
    with pytest.raises(ValueError):
        jacobi_eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ConvergenceError):
        jacobi_eigh(np.array([[1.0, 2.0], [2.0, 1.0]]), max_sweeps=0)


def test_eigh_dispatch():
    A = np.array([[2.0, 1.0], [1.0, 2.0]])
    for method in ("jacobi", "lapack", "auto"):
        assert np.allclose(eigh_symmetric(A, method)[0], [1.0, 3.0])
    with pytest.raises(ValueError):
        eigh_symmetric(A, "qr")


@given(st.integers(1, 7).flatmap(lambda n: arrays(float, (n, n + 1), elements=entries)))
def test_power_iteration_matches_svd(M):
    expected = np.linalg.norm(M, 2)
    assert spectral_norm(M) == pytest.approx(expected, rel=1e-6, abs=1e-12)


def test_power_iteration_is_reproducible():
    M = np.random.default_rng(3).standard_normal((20, 20))
    assert spectral_norm(M) == spectral_norm(M)
    assert spectral_norm(np.zeros((3, 3))) == 0.0
