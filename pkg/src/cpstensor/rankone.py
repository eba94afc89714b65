"""Rank-one structure of conjugate partial-symmetric tensors.

A CPS tensor is rank-one exactly when its (3,2;1,4) unfolding is a rank-one
matrix, which turns the best rank-one approximation into matrix problems:
a nuclear-norm-regularized convex relaxation solved by ADMM (with a global
optimality certificate), a nonconvex two-block relaxation solved by
alternating minimization, and, for real partial-symmetric input, a
nuclear-regularized low-rank outer-product model solved by a proximal
linearized scheme.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

from .core import (
    Tensor4,
    fold,
    mat_from_vec,
    project_cps,
    require_symmetry,
    symmetry_deviations,
    unfold,
)
from .decompose import require_cps_compatible
from .report import SolverReport
from .spectral import leading_eigenpair_abs, numerical_rank, phase_normalize, svd, svt

CERTIFY_TOL = 1e-6


class SolverError(RuntimeError):
    """An iterative solver hit a degenerate state it cannot continue from."""


class NotRankOneError(ValueError):
    """Extraction was asked of a tensor whose unfolding rank exceeds one."""

    def __init__(self, rank: int):
        super().__init__(f"tensor is not rank-one: measured unfolding rank {rank}")
        self.rank = rank


@dataclass(frozen=True)
class Rank1CPS:
    """lam * x o x o conj(x) o conj(x) with unit, phase-normalized x."""

    lam: float
    x: np.ndarray

    def to_tensor(self) -> Tensor4:
        return rank1_cps_tensor(self.lam, self.x)


def rank1_cps_tensor(lam: float, x: np.ndarray) -> Tensor4:
    """Build lam * x o x o conj(x) o conj(x)."""
    x = np.asarray(x, dtype=np.complex128)
    xc = np.conj(x)
    return Tensor4(lam * np.einsum("i,j,k,l->ijkl", x, x, xc, xc))


@dataclass(frozen=True)
class RelaxConfig:
    """Knobs shared by the relaxation solvers.

    rho is the nuclear weight of the convex model and the coupling weight of
    the nonconvex one; tau_admm the augmented-Lagrangian parameter;
    lambda_nuc the nuclear weight of the proximal linearized model;
    warm_start_steps the number of alternating sweeps used to pick rho.
    """

    rho: float = 1.0
    tau_admm: float = 1.0
    lambda_nuc: float = 0.0
    tol: float = 1e-8
    max_iter: int = 1000
    warm_start_steps: int = 5

    def __post_init__(self) -> None:
        if self.rho <= 0 or self.tau_admm <= 0:
            raise ValueError("rho and tau_admm must be positive")
        if self.lambda_nuc < 0:
            raise ValueError("lambda_nuc must be nonnegative")
        if self.tol <= 0 or self.max_iter < 1 or self.warm_start_steps < 1:
            raise ValueError("invalid stopping parameters")


@dataclass(frozen=True)
class Certification:
    """Global-optimality check for the convex relaxation's output: unit
    Frobenius norm, unit nuclear norm of the (3,2;1,4) unfolding, and a
    nonzero optimal value."""

    frob_norm: float
    unfolding_nuclear_norm: float
    objective: float
    verdict: Literal["certified_global", "not_certified"]


def unfolding_nuclear_norm(t: Tensor4) -> float:
    """Nuclear norm of the (3,2;1,4) unfolding."""
    s = np.linalg.svd(unfold(t, (3, 2)).matrix, compute_uv=False)
    return float(s.sum())


def is_rank_one(t: Tensor4, rel_tol: float | None = None) -> bool:
    """Rank-one test via the (3,2;1,4) unfolding (exact for CPS tensors)."""
    require_cps_compatible(t)
    return numerical_rank(unfold(t, (3, 2)).matrix, rel_tol) == 1


def extract_rank1(t: Tensor4, rel_tol: float | None = None) -> Rank1CPS:
    """Recover (lam, x) from a rank-one CPS tensor.

    lam is the sole eigenvalue of the (3,2;1,4) unfolding (sign included) and
    x the conjugated leading singular direction of the folded eigenvector.
    """
    require_cps_compatible(t)
    m = unfold(t, (3, 2)).matrix
    rank = numerical_rank(m, rel_tol)
    if rank != 1:
        raise NotRankOneError(rank)
    mu, w = leading_eigenpair_abs(m)
    e = mat_from_vec(w)
    d = svd(e)
    x = phase_normalize(np.conj(d.left[:, 0]))
    # Optimal weight for the recovered direction; equals mu on exact input.
    lam = float(np.real(np.vdot(rank1_cps_tensor(1.0, x).data, t.data)))
    return Rank1CPS(lam, x)


def certify_global(x_hat: Tensor4, objective: float, tol: float = CERTIFY_TOL) -> Certification:
    """Certificate that a convex-relaxation solution solves the rank-one
    problem: ||X||_F = 1, unfolding nuclear norm = 1, objective != 0."""
    frob = x_hat.norm()
    nuc = unfolding_nuclear_norm(x_hat)
    ok = abs(frob - 1.0) <= tol and abs(nuc - 1.0) <= tol and abs(objective) > tol
    return Certification(
        frob_norm=frob,
        unfolding_nuclear_norm=nuc,
        objective=float(objective),
        verdict="certified_global" if ok else "not_certified",
    )


def alm_rank_one(t: Tensor4, cfg: RelaxConfig | None = None) -> tuple[Rank1CPS, SolverReport]:
    """Alternating minimization on the nonconvex two-block relaxation.

    The Y block is the best rank-one approximation, in the (3,2;1,4)
    unfolding, of the convex combination (T + rho X)/(1 + rho); the X block
    collapses Y to its dominant rank-one CPS component in closed form.  Every
    X iterate is exactly rank-one CPS.

    Report: objectives = coupled objective after each sweep, residuals =
    ||X_{k+1} - X_k||_F.
    """
    cfg = cfg or RelaxConfig()
    require_cps_compatible(t)
    n = t.n
    rho = cfg.rho
    x = np.zeros((n,) * 4, dtype=np.complex128)
    lam, xvec = 0.0, None
    objectives: list[float] = []
    residuals: list[float] = []
    converged = False
    sweeps = 0
    for sweeps in range(1, cfg.max_iter + 1):
        g = Tensor4((t.data + rho * x) / (1.0 + rho))
        mu, w = leading_eigenpair_abs(unfold(g, (3, 2)).matrix)
        y = fold(mu * np.outer(w, np.conj(w)), (3, 2))
        e = mat_from_vec(w)
        d = svd(e)
        sigma1 = float(d.singular_values[0])
        xvec = phase_normalize(np.conj(d.left[:, 0]))
        lam = mu * sigma1**2
        x_new = rank1_cps_tensor(lam, xvec).data
        step = float(np.linalg.norm(x_new - x))
        x = x_new
        objectives.append(
            0.5 * float(np.linalg.norm(t.data - y.data) ** 2)
            + 0.5 * rho * float(np.linalg.norm(x - y.data) ** 2)
        )
        residuals.append(step)
        if step < cfg.tol:
            converged = True
            break
    report = SolverReport(
        iterations=sweeps,
        converged=converged,
        termination="iterate_change_below_tol" if converged else "max_iter",
        objectives=tuple(objectives),
        residuals=tuple(residuals),
    )
    return Rank1CPS(float(lam), xvec), report


# Relative backoff applied to the warm-started nuclear weight.  On an exactly
# rank-one input the alternating sweeps align immediately and <T, X/||X||>
# equals the spectral maximum itself, where the convex model ties its optimum
# with zero and the iteration degenerates; stepping slightly inside keeps the
# rank-one point the strict optimum.
WARM_START_BACKOFF = 1e-3


def warm_start_rho(t: Tensor4, cfg: RelaxConfig | None = None) -> float:
    """Pick the convex model's nuclear weight as (1 - backoff) <T, X/||X||>
    after a few alternating sweeps."""
    cfg = cfg or RelaxConfig()
    r1, _ = alm_rank_one(t, replace(cfg, max_iter=cfg.warm_start_steps))
    x = r1.to_tensor()
    scale = x.norm()
    if scale == 0:
        raise SolverError("warm start produced a zero iterate")
    rho = float(np.real(np.vdot(x.data, t.data))) / scale
    if rho <= 0:
        raise SolverError(f"warm start produced a nonpositive weight {rho:.3e}")
    return (1.0 - WARM_START_BACKOFF) * rho


def admm_rank_one(
    t: Tensor4, cfg: RelaxConfig | None = None, warm_start: bool = True
) -> tuple[Tensor4, Certification, SolverReport]:
    """ADMM on the nuclear-norm-regularized convex relaxation.

    X update: project (tau Y + T + Lambda)/tau onto the CPS set and normalize
    to the unit sphere.  Y update: singular value thresholding of the
    (3,2;1,4) unfolding of X - Lambda/tau at rho/tau.  Multiplier update:
    Lambda += tau (Y - X).  Stops when ||Y - X||_F <= tol.

    With warm_start (default) rho is chosen by :func:`warm_start_rho`;
    otherwise cfg.rho is used.

    The iteration runs on the unit-Frobenius rescaling of T with rho scaled
    alongside; that leaves the minimizer untouched (the objective is just
    divided by ||T||_F) and makes the augmented parameter tau scale-free.
    Reported objectives are in the original scale.

    Report: objectives = relaxation objective at each X iterate, residuals =
    ||Y - X||_F; metrics carry per-iteration CPS and unit-norm deviations.
    """
    cfg = cfg or RelaxConfig()
    require_cps_compatible(t)
    scale = t.norm()
    if scale == 0:
        raise ValueError("the zero tensor has no certified rank-one approximation")
    rho = warm_start_rho(t, cfg) if warm_start else cfg.rho
    tau = cfg.tau_admm
    n = t.n
    t_bar = t.data / scale
    rho_bar = rho / scale
    y = t_bar.copy()
    lam_mult = np.zeros((n,) * 4, dtype=np.complex128)
    x_t: Tensor4 | None = None
    objectives: list[float] = []
    residuals: list[float] = []
    cps_devs: list[float] = []
    norm_devs: list[float] = []
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iter + 1):
        p = project_cps(Tensor4((tau * y + t_bar + lam_mult) / tau))
        p_norm = p.norm()
        if p_norm <= 1e-14:
            raise SolverError("projected iterate vanished; cannot normalize")
        x_t = Tensor4(p.data / p_norm)
        m = unfold(Tensor4(x_t.data - lam_mult / tau), (3, 2)).matrix
        y = fold(svt(m, rho_bar / tau), (3, 2)).data
        lam_mult = lam_mult + tau * (y - x_t.data)
        resid = float(np.linalg.norm(y - x_t.data))
        obj = float(-np.real(np.vdot(x_t.data, t.data))) + rho * unfolding_nuclear_norm(x_t)
        objectives.append(obj)
        residuals.append(resid)
        d = symmetry_deviations(x_t)
        cps_devs.append(max(d["pair"], d["swap_conj"]))
        norm_devs.append(abs(x_t.norm() - 1.0))
        if resid <= cfg.tol:
            converged = True
            break
    certification = certify_global(x_t, objectives[-1])
    report = SolverReport(
        iterations=iterations,
        converged=converged,
        termination="split_residual_below_tol" if converged else "max_iter",
        objectives=tuple(objectives),
        residuals=tuple(residuals),
        metrics={"cps_deviation": tuple(cps_devs), "norm_deviation": tuple(norm_devs)},
    )
    return x_t, certification, report


def _contract(m_a: np.ndarray, x: np.ndarray) -> np.ndarray:
    """(A X)_{ij} = sum_{kl} A_{ijkl} X_{kl} via the square unfolding."""
    n = x.shape[0]
    return (m_a @ x.reshape(-1, order="F")).reshape(n, n, order="F")


def plma_low_rank_approx(
    t: Tensor4, cfg: RelaxConfig | None = None
) -> tuple[float, np.ndarray, SolverReport]:
    """Proximal linearized scheme for the nuclear-regularized outer-product
    model min ||A - alpha X o X||_F^2 + lambda_nuc ||X||_* over unit symmetric
    X (real partial-symmetric input only).

    Each step thresholds the gradient step at lambda_nuc / t_k, renormalizes,
    and refits alpha.  The step size t_k backtracks (doubling from 1, at most
    60 times) until the local descent bound and an actual objective
    non-increase both hold, so the reported objective trace is monotone.

    Report: objectives = regularized objective values (initial value first),
    residuals = ||X_{k+1} - X_k||_F.
    """
    cfg = cfg or RelaxConfig()
    require_symmetry(t, "ps")
    a = t.data.real
    n = t.n
    m_a = unfold(t, (1, 2)).matrix.real
    lam_nuc = cfg.lambda_nuc

    def fval(alpha: float, x: np.ndarray) -> float:
        return float(np.linalg.norm(a - alpha * np.tensordot(x, x, axes=0)) ** 2)

    def nuc(x: np.ndarray) -> float:
        return float(np.linalg.svd(x, compute_uv=False).sum())

    # Start from one greedy peeling step.
    _, v = leading_eigenpair_abs(m_a)
    x = mat_from_vec(np.real(v))
    x = (x + x.T) / 2.0
    x = x / np.linalg.norm(x)
    alpha = float(np.einsum("ijkl,ij,kl->", a, x, x))

    obj = fval(alpha, x) + lam_nuc * nuc(x)
    objectives = [obj]
    residuals: list[float] = []
    converged = False
    termination = "max_iter"
    iterations = 0
    for iterations in range(1, cfg.max_iter + 1):
        grad = 4.0 * alpha**2 * float(np.linalg.norm(x) ** 2) * x - 4.0 * alpha * _contract(m_a, x)
        t_k = 1.0
        accepted = None
        for _ in range(61):
            x_hat = svt(x - grad / t_k, lam_nuc / t_k)
            x_hat = (x_hat + x_hat.T) / 2.0
            hat_norm = float(np.linalg.norm(x_hat))
            if hat_norm == 0.0:
                termination = "degenerate_shrinkage"
                break
            delta = x_hat - x
            lin_ok = fval(alpha, x_hat) <= (
                fval(alpha, x)
                + float(np.sum(delta * grad))
                + 0.5 * t_k * float(np.linalg.norm(delta) ** 2)
                + 1e-12 * max(1.0, obj)
            )
            x_new = x_hat / hat_norm
            alpha_new = float(np.einsum("ijkl,ij,kl->", a, x_new, x_new))
            obj_new = fval(alpha_new, x_new) + lam_nuc * nuc(x_new)
            if lin_ok and obj_new <= obj + 1e-14 * max(1.0, abs(obj)):
                accepted = (x_new, alpha_new, obj_new)
                break
            t_k *= 2.0
        if termination == "degenerate_shrinkage":
            break
        if accepted is None:
            raise SolverError("step size search exhausted 60 doublings without descent")
        x_new, alpha_new, obj_new = accepted
        step = float(np.linalg.norm(x_new - x))
        x, alpha, obj = x_new, alpha_new, obj_new
        objectives.append(obj)
        residuals.append(step)
        if step < cfg.tol:
            converged = True
            termination = "iterate_change_below_tol"
            break
    report = SolverReport(
        iterations=iterations,
        converged=converged,
        termination=termination,
        objectives=tuple(objectives),
        residuals=tuple(residuals),
    )
    return alpha, x, report
