"""Independent brute-force oracles: plain index loops over the defining
identities, kept deliberately separate from the library's vectorized paths."""

from __future__ import annotations

import itertools

import numpy as np


def loop_outer_mm(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    n = x.shape[0]
    out = np.zeros((n, n, n, n), dtype=complex)
    for i, j, k, l in itertools.product(range(n), repeat=4):
        out[i, j, k, l] = x[i, j] * y[k, l]
    return out


def loop_inner(a: np.ndarray, b: np.ndarray) -> complex:
    total = 0.0 + 0.0j
    for idx in itertools.product(range(a.shape[0]), repeat=4):
        total += a[idx] * np.conj(b[idx])
    return total


def loop_unfold(a: np.ndarray, row_modes: tuple[int, int]) -> np.ndarray:
    """matrix[(i_b-1)n + i_a, (i_d-1)n + i_c] = T[i1,i2,i3,i4], col modes
    ascending, all 1-based in the definition, 0-based here."""
    n = a.shape[0]
    ra, rb = row_modes
    ca, cb = sorted({1, 2, 3, 4} - {ra, rb})
    out = np.zeros((n * n, n * n), dtype=complex)
    for idx in itertools.product(range(n), repeat=4):
        row = idx[rb - 1] * n + idx[ra - 1]
        col = idx[cb - 1] * n + idx[ca - 1]
        out[row, col] = a[idx]
    return out


def is_pair_symmetric(a: np.ndarray, tol: float) -> bool:
    for i, j, k, l in itertools.product(range(a.shape[0]), repeat=4):
        if abs(a[i, j, k, l] - a[j, i, k, l]) > tol:
            return False
        if abs(a[i, j, k, l] - a[i, j, l, k]) > tol:
            return False
    return True


def is_cps_loops(a: np.ndarray, tol: float) -> bool:
    """Entrywise check of the conjugate partial-symmetry definition."""
    if not is_pair_symmetric(a, tol):
        return False
    for i, j, k, l in itertools.product(range(a.shape[0]), repeat=4):
        if abs(a[i, j, k, l] - np.conj(a[k, l, i, j])) > tol:
            return False
    return True


def is_ps_loops(a: np.ndarray, tol: float) -> bool:
    if np.abs(a.imag).max() > tol or not is_pair_symmetric(a, tol):
        return False
    for i, j, k, l in itertools.product(range(a.shape[0]), repeat=4):
        if abs(a[i, j, k, l] - a[k, l, i, j]) > tol:
            return False
    return True


def is_skew_ps_loops(a: np.ndarray, tol: float) -> bool:
    if np.abs(a.imag).max() > tol or not is_pair_symmetric(a, tol):
        return False
    for i, j, k, l in itertools.product(range(a.shape[0]), repeat=4):
        if abs(a[i, j, k, l] + a[k, l, i, j]) > tol:
            return False
    return True


def cps_real_basis(n: int) -> list[np.ndarray]:
    """Orthonormal basis (over the reals, under Re<.,.>) of the conjugate
    partial-symmetric tensors, built entry group by entry group from the
    definition: unordered pairs P = {i<=j}, Q = {k<=l} give one real basis
    element when P == Q and a real/imaginary pattern pair when P != Q."""
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    basis: list[np.ndarray] = []

    def sites(p, q):
        i, j = p
        k, l = q
        return {(a, b, c, d) for a, b in {(i, j), (j, i)} for c, d in {(k, l), (l, k)}}

    for pi, p in enumerate(pairs):
        for q in pairs[pi:]:
            fwd = sites(p, q)
            bwd = sites(q, p)
            t = np.zeros((n, n, n, n), dtype=complex)
            if p == q:
                for s in fwd:
                    t[s] = 1.0
                basis.append(t / np.linalg.norm(t))
            else:
                for s in fwd:
                    t[s] = 1.0
                for s in bwd:
                    t[s] = 1.0
                basis.append(t / np.linalg.norm(t))
                t = np.zeros((n, n, n, n), dtype=complex)
                for s in fwd:
                    t[s] = 1.0j
                for s in bwd:
                    t[s] = -1.0j
                basis.append(t / np.linalg.norm(t))
    return basis


def project_cps_via_basis(y: np.ndarray, basis: list[np.ndarray]) -> np.ndarray:
    """Least-squares projection onto span of the basis under Re<.,.>."""
    out = np.zeros_like(y, dtype=complex)
    for b in basis:
        coeff = np.real(np.sum(y * np.conj(b)))
        out = out + coeff * b
    return out
