"""Seeded random test instances with ground truth.

Every generator is deterministic in the seed; per-trial streams should be
derived from (seed, trial) so batches are order-independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Tensor4, mat_from_vec
from .rankone import rank1_cps_tensor
from .spectral import phase_normalize

KINDS = (
    "ps_pairs",
    "ps_orthonormal",
    "cps_orthonormal",
    "cps_vector_sum",
    "skew_ps",
    "rank1_cps",
)

# Minimum spacing of |lambda| values, relative to the largest, under the
# distinct_random policy.  Keeps greedy recovery well conditioned.
LAMBDA_GAP = 0.05


@dataclass(frozen=True)
class InstanceSpec:
    """What to generate: kind, size, term count, seed, and either random
    distinct weights (lambdas=None) or a given list."""

    kind: str
    n: int
    r: int = 1
    seed: int = 0
    lambdas: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown instance kind {self.kind!r}; expected one of {KINDS}")
        if self.n < 2:
            raise ValueError("dimension must be at least 2")
        if self.r < 1:
            raise ValueError("term count must be at least 1")
        if self.lambdas is not None and len(self.lambdas) != self.r:
            raise ValueError("given lambda list must have r entries")


@dataclass(frozen=True)
class GroundTruth:
    """Whatever data rebuilt the tensor: weights plus kind-specific factors."""

    kind: str
    lambdas: tuple[float, ...]
    matrices: tuple[np.ndarray, ...] = ()
    vectors: tuple[np.ndarray, ...] = ()
    vector_pairs: tuple[tuple[np.ndarray, np.ndarray], ...] = ()
    matrix_pairs: tuple[tuple[np.ndarray, np.ndarray], ...] = ()


def rng_for(seed: int, *key: int) -> np.random.Generator:
    """Independent stream for (seed, key...)."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


def distinct_lambdas(rng: np.random.Generator, r: int, gap: float = LAMBDA_GAP) -> np.ndarray:
    """Draw r nonzero weights in [-1, 1] whose |values| are pairwise separated
    by at least gap * max|value| (rejection sampling)."""
    while True:
        lam = rng.uniform(-1.0, 1.0, r)
        top = np.abs(lam).max()
        if top == 0:
            continue
        mags = np.sort(np.abs(lam))
        if mags[0] < gap * top:
            continue
        if r > 1 and np.min(np.diff(mags)) < gap * top:
            continue
        return lam


def orthonormal_symmetric(
    rng: np.random.Generator, n: int, count: int, complex_entries: bool
) -> list[np.ndarray]:
    """`count` mutually orthonormal symmetric n x n matrices (complex
    symmetric, not Hermitian, when complex_entries)."""
    cap = n * (n + 1) // 2
    if count > cap:
        raise ValueError(f"at most {cap} orthonormal symmetric matrices exist for n={n}")
    cols = []
    for _ in range(count):
        g = rng.standard_normal((n, n))
        if complex_entries:
            g = g + 1j * rng.standard_normal((n, n))
        g = (g + g.T) / 2.0
        cols.append(g.reshape(-1, order="F"))
    q, r = np.linalg.qr(np.column_stack(cols))
    if np.abs(np.diag(r)).min() < 1e-10:
        raise ValueError("degenerate draw; symmetric matrices were not independent")
    return [mat_from_vec(q[:, i]) for i in range(count)]


def generate_instance(spec: InstanceSpec) -> tuple[Tensor4, GroundTruth]:
    """Build the tensor for `spec` together with its ground truth."""
    rng = rng_for(spec.seed)
    n, r = spec.n, spec.r
    if spec.lambdas is not None:
        lam = np.array(spec.lambdas, dtype=float)
    elif spec.kind == "cps_vector_sum":
        lam = np.ones(r)
    else:
        lam = distinct_lambdas(rng, r)

    if spec.kind == "ps_pairs":
        # Componentwise uniform [0, 1] vectors: the coherent, sign-consistent
        # pairs this yields are the regime where nuclear-norm completion of
        # the square unfolding recovers reliably; zero-mean pairs leave the
        # relaxation without a unique low-rank interpolant noticeably often.
        total = np.zeros((n,) * 4)
        pairs = []
        for i in range(r):
            x = rng.uniform(0.0, 1.0, n)
            y = rng.uniform(0.0, 1.0, n)
            xx = np.outer(x, x)
            yy = np.outer(y, y)
            term = np.tensordot(xx, yy, axes=0)
            total = total + lam[i] * (term + term.transpose(2, 3, 0, 1))
            pairs.append((x, y))
        return Tensor4(total), GroundTruth(spec.kind, tuple(lam), vector_pairs=tuple(pairs))

    if spec.kind in ("ps_orthonormal", "cps_orthonormal"):
        complex_entries = spec.kind == "cps_orthonormal"
        mats = orthonormal_symmetric(rng, n, r, complex_entries)
        total = np.zeros((n,) * 4, dtype=np.complex128)
        for i, e in enumerate(mats):
            total = total + lam[i] * np.tensordot(e, np.conj(e), axes=0)
        return Tensor4(total), GroundTruth(spec.kind, tuple(lam), matrices=tuple(mats))

    if spec.kind == "cps_vector_sum":
        total = np.zeros((n,) * 4, dtype=np.complex128)
        vecs = []
        for i in range(r):
            a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            total = total + lam[i] * np.einsum("i,j,k,l->ijkl", a, a, np.conj(a), np.conj(a))
            vecs.append(a)
        return Tensor4(total), GroundTruth(spec.kind, tuple(lam), vectors=tuple(vecs))

    if spec.kind == "skew_ps":
        mats = orthonormal_symmetric(rng, n, 2 * r, complex_entries=False)
        total = np.zeros((n,) * 4)
        mat_pairs = []
        for i in range(r):
            u, v = mats[2 * i], mats[2 * i + 1]
            total = total + lam[i] * (
                np.tensordot(u, v, axes=0) - np.tensordot(v, u, axes=0)
            )
            mat_pairs.append((u, v))
        return Tensor4(total), GroundTruth(spec.kind, tuple(lam), matrix_pairs=tuple(mat_pairs))

    if spec.kind == "rank1_cps":
        if r != 1:
            raise ValueError("rank1_cps instances have exactly one term")
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        x = phase_normalize(x / np.linalg.norm(x))
        return (
            rank1_cps_tensor(float(lam[0]), x),
            GroundTruth(spec.kind, (float(lam[0]),), vectors=(x,)),
        )

    raise AssertionError(f"unhandled kind {spec.kind}")
