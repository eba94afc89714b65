"""Dense matrix kernels: Hermitian eigendecomposition, SVD, singular value
thresholding and numerical rank, with deterministic ordering and phases."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SymmetryError

DEFAULT_HERMITIAN_TOL = 1e-8


@dataclass(frozen=True)
class EigenDecomposition:
    """Real eigenvalues sorted by descending |lambda| (ties: descending signed
    value, then solver index); eigenvector columns phase-normalized."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class SingularDecomposition:
    """Singular values descending, orthonormal left/right vector columns."""

    singular_values: np.ndarray
    left: np.ndarray
    right: np.ndarray


def phase_normalize(v: np.ndarray) -> np.ndarray:
    """Rotate a vector so its largest-magnitude entry (first among ties) is
    real positive; real vectors only flip sign."""
    v = np.asarray(v)
    j = int(np.argmax(np.abs(v)))
    pivot = v[j]
    if pivot == 0:
        return v.copy()
    return v * (np.conj(pivot) / abs(pivot))


def _as_real_if_possible(m: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(m) and float(np.abs(m.imag).max(initial=0.0)) == 0.0:
        return m.real.copy()
    return m


def hermitian_eigen(m: np.ndarray, herm_tol: float = DEFAULT_HERMITIAN_TOL) -> EigenDecomposition:
    """Full eigendecomposition of a (numerically) Hermitian matrix.

    The input is symmetrized to (M + M*)/2 before solving; deviations beyond
    herm_tol * ||M||_F are rejected.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    dev = float(np.linalg.norm(m - m.conj().T))
    scale = float(np.linalg.norm(m))
    if dev > herm_tol * max(scale, 1e-300):
        raise SymmetryError(
            f"matrix is not Hermitian: ||M - M*|| = {dev:.3e} exceeds {herm_tol:g} * ||M||"
        )
    h = _as_real_if_possible((m + m.conj().T) / 2.0)
    w, v = np.linalg.eigh(h)
    order = np.lexsort((np.arange(w.size), -w, -np.abs(w)))
    w = w[order]
    v = v[:, order]
    for i in range(v.shape[1]):
        v[:, i] = phase_normalize(v[:, i])
    return EigenDecomposition(w, v)


def leading_eigenpair_abs(
    m: np.ndarray, herm_tol: float = DEFAULT_HERMITIAN_TOL
) -> tuple[float, np.ndarray]:
    """Eigenpair of largest |eigenvalue| (canonical tie-break)."""
    eig = hermitian_eigen(m, herm_tol=herm_tol)
    return float(eig.eigenvalues[0]), eig.eigenvectors[:, 0]


def svd(m: np.ndarray) -> SingularDecomposition:
    """Thin SVD, M = sum_i s_i u_i v_i^*, with canonical phases."""
    m = np.asarray(m)
    if not np.isfinite(m).all():
        raise ValueError("matrix entries must be finite")
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    v = vh.conj().T
    for i in range(u.shape[1]):
        j = int(np.argmax(np.abs(u[:, i])))
        pivot = u[j, i]
        if pivot != 0:
            c = np.conj(pivot) / abs(pivot)
            u[:, i] = u[:, i] * c
            v[:, i] = v[:, i] * c
    return SingularDecomposition(s, u, v)


def svt(m: np.ndarray, tau: float) -> np.ndarray:
    """Singular value thresholding: shrink singular values by tau, floor at 0.

    This is the proximal map of tau * nuclear norm at M.
    """
    if tau < 0:
        raise ValueError("threshold must be nonnegative")
    m = np.asarray(m)
    if tau == 0:
        return m.copy()
    d = svd(m)
    keep = d.singular_values > tau
    if not keep.any():
        return np.zeros_like(m)
    u = d.left[:, keep]
    v = d.right[:, keep]
    s = d.singular_values[keep] - tau
    return (u * s) @ v.conj().T


def numerical_rank(m: np.ndarray, rel_tol: float | None = None) -> int:
    """Count singular values above rel_tol * s_max (0 for the zero matrix).

    Default rel_tol is (matrix side) * machine epsilon.
    """
    m = np.asarray(m)
    if rel_tol is None:
        rel_tol = max(m.shape) * np.finfo(np.float64).eps
    if not 0 < rel_tol < 1:
        raise ValueError("rel_tol must lie in (0, 1)")
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s[0]))
