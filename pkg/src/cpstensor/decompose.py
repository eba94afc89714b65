"""Matrix outer-product decompositions of conjugate partial-symmetric tensors.

A CPS tensor decomposes as sum_i lambda_i E_i o conj(E_i) with real weights
and orthonormal complex-symmetric matrices; the weights are exactly the
eigenvalues of the square unfolding.  This module provides the greedy
successive rank-one peeling, the one-shot eigendecomposition route, rank
statistics derived from them, the real vector-pair expansion, and the skew
counterpart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_CLASSIFY_TOL,
    Tensor4,
    mat_from_vec,
    require_symmetry,
    unfold,
)
from .report import SolverReport
from .spectral import hermitian_eigen, numerical_rank

# Relative gap under which two leading |eigenvalues| count as tied.
DEGENERATE_GAP = 1e-10


@dataclass(frozen=True)
class MatrixFactor:
    """One term lambda * E o conj(E): real weight, unit-Frobenius symmetric
    (not conjugate-transpose) matrix."""

    lam: float
    matrix: np.ndarray


@dataclass(frozen=True)
class MatrixDecomposition:
    """Ordered factor list, |lam_1| >= |lam_2| >= ...; with
    conjugated_second=False terms read lambda * E o E (real case)."""

    n: int
    factors: tuple[MatrixFactor, ...]
    conjugated_second: bool

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([f.lam for f in self.factors])


@dataclass(frozen=True)
class VectorPairFactor:
    """One term coeff * (p o p o q o q + q o q o p o p)."""

    coeff: float
    p: np.ndarray
    q: np.ndarray


@dataclass(frozen=True)
class SkewFactor:
    """One term coeff * (U o V - V o U)."""

    coeff: float
    u: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class RankBounds:
    """rank of the square unfolding and the CP-rank interval it implies."""

    rank_m: int
    max_factor_rank: int
    cp_lower: int
    cp_upper: int


def require_cps_compatible(t: Tensor4, tol: float = DEFAULT_CLASSIFY_TOL) -> None:
    """Reject input whose square unfolding is not Hermitian, i.e. anything
    outside the conjugate partial-symmetric class (real partial-symmetric and
    real symmetric tensors pass).  Complex tensors with plain pair-swap
    symmetry are rejected: the phase ambiguity of the eigenvectors breaks the
    rank-one peeling there."""
    require_symmetry(t, "cps", tol)


def _fold_symmetric_unit(v: np.ndarray) -> np.ndarray:
    e = mat_from_vec(v)
    e = (e + e.T) / 2.0
    return e / np.linalg.norm(e)


def _coeff(resid: np.ndarray, e: np.ndarray) -> float:
    # Re<A, E o conj(E)> — the optimal weight for the factor direction E.
    return float(np.real(np.einsum("ijkl,ij,kl->", resid, e.conj(), e)))


def successive_rank1(
    a: Tensor4,
    max_factors: int | None = None,
    tol: float = 1e-12,
) -> tuple[MatrixDecomposition, SolverReport]:
    """Greedy matrix outer-product decomposition.

    Repeatedly takes the largest-|eigenvalue| pair of the residual's square
    unfolding, folds the eigenvector to a symmetric unit matrix, subtracts the
    resulting term, and stops after `max_factors` terms (default n(n+1)/2) or
    when the residual drops below tol * ||A||_F.

    Report: objectives = extracted weights, residuals = ||A_j||_F after each
    deflation (prefixed with ||A_0||_F).
    """
    require_cps_compatible(a)
    n = a.n
    cap = n * (n + 1) // 2 if max_factors is None else int(max_factors)
    if cap < 1:
        raise ValueError("max_factors must be at least 1")
    norm0 = a.norm()
    resid = a.data.copy()
    factors: list[MatrixFactor] = []
    lams: list[float] = []
    resid_norms = [norm0]
    flags: set[str] = set()
    conj_second = not a.is_real()
    while len(factors) < cap and resid_norms[-1] > tol * norm0:
        m = unfold(Tensor4(resid), (1, 2)).matrix
        eig = hermitian_eigen(m)
        w = eig.eigenvalues
        if w.size > 1 and abs(w[0]) > 0 and abs(w[0]) - abs(w[1]) <= DEGENERATE_GAP * abs(w[0]):
            flags.add("degenerate_spectrum")
        e = _fold_symmetric_unit(eig.eigenvectors[:, 0])
        lam = _coeff(resid, e)
        resid = resid - lam * np.tensordot(e, e.conj(), axes=0)
        factors.append(MatrixFactor(lam, e))
        lams.append(lam)
        resid_norms.append(float(np.linalg.norm(resid)))
    converged = resid_norms[-1] <= tol * norm0
    report = SolverReport(
        iterations=len(factors),
        converged=converged,
        termination="residual_below_tol" if converged else "factor_cap",
        objectives=tuple(lams),
        residuals=tuple(resid_norms),
        flags=tuple(sorted(flags)),
    )
    return MatrixDecomposition(n, tuple(factors), conj_second), report


def full_decomposition(a: Tensor4, rel_tol: float | None = None) -> MatrixDecomposition:
    """One-shot decomposition from the eigenpairs of the square unfolding,
    keeping |eigenvalue| > rel_tol * max|eigenvalue| (default side * eps)."""
    require_cps_compatible(a)
    n = a.n
    m = unfold(a, (1, 2)).matrix
    if rel_tol is None:
        rel_tol = n * n * np.finfo(np.float64).eps
    eig = hermitian_eigen(m)
    w = eig.eigenvalues
    factors = []
    if w.size and abs(w[0]) > 0:
        floor = rel_tol * abs(w[0])
        for i in range(w.size):
            if abs(w[i]) <= floor:
                break
            factors.append(MatrixFactor(float(w[i]), _fold_symmetric_unit(eig.eigenvectors[:, i])))
    return MatrixDecomposition(n, tuple(factors), not a.is_real())


def reconstruct(dec: MatrixDecomposition) -> Tensor4:
    """Sum the factor terms back into a tensor."""
    total = np.zeros((dec.n,) * 4, dtype=np.complex128)
    for f in dec.factors:
        second = np.conj(f.matrix) if dec.conjugated_second else f.matrix
        total += f.lam * np.tensordot(f.matrix, second, axes=0)
    return Tensor4(total)


def rank_m(a: Tensor4, rel_tol: float | None = None) -> int:
    """Numerical rank of the square unfolding."""
    return numerical_rank(unfold(a, (1, 2)).matrix, rel_tol)


def cp_rank_bounds(a: Tensor4, rel_tol: float | None = None) -> RankBounds:
    """CP-rank interval [rank_m, r^2 * rank_m], r the largest factor rank."""
    rm = rank_m(a, rel_tol)
    dec = full_decomposition(a, rel_tol)
    r = max((numerical_rank(f.matrix) for f in dec.factors), default=0)
    return RankBounds(rank_m=rm, max_factor_rank=r, cp_lower=rm, cp_upper=r * r * rm)


def expand_vector_form(dec: MatrixDecomposition) -> list[VectorPairFactor]:
    """Expand a real decomposition into vector pair terms.

    Each symmetric factor E = sum_j beta_j u_j u_j^T contributes
    lam * beta_j * beta_k over eigenvector pairs j < k, and lam * beta_j^2 / 2
    on the diagonal so that coeff * (p o p o q o q + q o q o p o p) needs no
    special casing anywhere.
    """
    pairs: list[VectorPairFactor] = []
    for f in dec.factors:
        if float(np.abs(np.asarray(f.matrix).imag).max(initial=0.0)) > 1e-12:
            raise ValueError("vector pair expansion is defined for real factors only")
        e = np.asarray(f.matrix).real
        eig = hermitian_eigen(e)
        beta = eig.eigenvalues
        if beta.size == 0 or np.abs(beta).max() == 0:
            continue
        floor = e.shape[0] * np.finfo(np.float64).eps * np.abs(beta).max()
        idx = [i for i in range(beta.size) if abs(beta[i]) > floor]
        for pos, i in enumerate(idx):
            u = eig.eigenvectors[:, i].real
            pairs.append(VectorPairFactor(f.lam * beta[i] ** 2 / 2.0, u, u))
            for j in idx[pos + 1 :]:
                v = eig.eigenvectors[:, j].real
                pairs.append(VectorPairFactor(f.lam * beta[i] * beta[j], u, v))
    return pairs


def reconstruct_vector_pairs(pairs: list[VectorPairFactor], n: int) -> Tensor4:
    """Sum coeff * (p o p o q o q + q o q o p o p) terms."""
    total = np.zeros((n,) * 4)
    for f in pairs:
        pp = np.outer(f.p, f.p)
        qq = np.outer(f.q, f.q)
        term = np.tensordot(pp, qq, axes=0)
        total = total + f.coeff * (term + term.transpose(2, 3, 0, 1))
    return Tensor4(total)


def decompose_skew(a: Tensor4, rel_tol: float | None = None) -> list[SkewFactor]:
    """Decompose a real skew partial-symmetric tensor into coeff*(UoV - VoU).

    The square unfolding is real skew-symmetric, so i*M is Hermitian; each
    positive eigenvalue mu with eigenvector p + i q yields the invariant plane
    (sqrt(2) p, sqrt(2) q) and one factor with coefficient mu.
    """
    require_symmetry(a, "skew_ps")
    m = unfold(a, (1, 2)).matrix.real
    eig = hermitian_eigen(1j * m)
    w = eig.eigenvalues
    if w.size == 0 or np.abs(w).max() == 0:
        return []
    if rel_tol is None:
        rel_tol = m.shape[0] * np.finfo(np.float64).eps
    floor = rel_tol * np.abs(w).max()
    factors: list[SkewFactor] = []
    for i in range(w.size):
        if w[i] <= floor:
            continue
        vec = eig.eigenvectors[:, i]
        u_vec = np.sqrt(2.0) * vec.real
        v_vec = np.sqrt(2.0) * vec.imag
        # M p = mu q, M q = -mu p: the block is mu (v u^T - u v^T) with
        # u = sqrt(2) p, v = sqrt(2) q, i.e. U = fold(v), V = fold(u).
        factors.append(SkewFactor(float(w[i]), mat_from_vec(v_vec), mat_from_vec(u_vec)))
    factors.sort(key=lambda f: -abs(f.coeff))
    return factors


def reconstruct_skew(factors: list[SkewFactor], n: int) -> Tensor4:
    """Sum coeff * (U o V - V o U) terms."""
    total = np.zeros((n,) * 4)
    for f in factors:
        total = total + f.coeff * (
            np.tensordot(f.u, f.v, axes=0) - np.tensordot(f.v, f.u, axes=0)
        )
    return Tensor4(total)
