"""Dense fourth-order complex tensors and their partial-symmetry structure.

Entries live on a cubic index grid (i, j, k, l), stored internally 0-based in
lexicographic order with l fastest.  Published interfaces (file formats,
observation masks) use 1-based quadruples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

SymmetryTag = Literal["general", "symmetric", "hermitian", "ps", "skew_ps", "cps"]

SYMMETRY_TAGS: tuple[SymmetryTag, ...] = (
    "general",
    "symmetric",
    "hermitian",
    "ps",
    "skew_ps",
    "cps",
)

DEFAULT_CLASSIFY_TOL = 1e-10

# Index maps generating the partial-symmetry group: swaps inside the leading
# pair, inside the trailing pair, and of the two pairs.
PS_INDEX_MAPS: tuple[tuple[int, int, int, int], ...] = (
    (0, 1, 2, 3),
    (1, 0, 2, 3),
    (0, 1, 3, 2),
    (1, 0, 3, 2),
    (2, 3, 0, 1),
    (3, 2, 0, 1),
    (2, 3, 1, 0),
    (3, 2, 1, 0),
)


class SymmetryError(ValueError):
    """Input violates the symmetry class an operation requires."""


class MaskClosureError(ValueError):
    """Observation set is not closed under the partial-symmetry index maps."""


@dataclass(frozen=True)
class Tensor4:
    """Dense order-4 complex tensor over C^{n x n x n x n}.

    Immutable: the backing array is copied on construction and marked
    read-only, so values can be shared freely across threads.
    """

    data: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.data, dtype=np.complex128, order="C", copy=True)
        if arr.ndim != 4 or len(set(arr.shape)) != 1 or arr.shape[0] < 1:
            raise ValueError(f"expected a cubic order-4 array, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("tensor entries must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @classmethod
    def zeros(cls, n: int) -> "Tensor4":
        return cls(np.zeros((n, n, n, n)))

    def norm(self) -> float:
        """Frobenius norm."""
        return float(np.linalg.norm(self.data))

    def conj(self) -> "Tensor4":
        return Tensor4(np.conj(self.data))

    def is_real(self, tol: float = 0.0) -> bool:
        return float(np.abs(self.data.imag).max()) <= tol

    def __add__(self, other: "Tensor4") -> "Tensor4":
        return Tensor4(self.data + other.data)

    def __sub__(self, other: "Tensor4") -> "Tensor4":
        return Tensor4(self.data - other.data)

    def __neg__(self) -> "Tensor4":
        return Tensor4(-self.data)

    def __mul__(self, c) -> "Tensor4":
        return Tensor4(self.data * complex(c))

    __rmul__ = __mul__


@dataclass(frozen=True)
class SymmetryClass:
    """Most specific symmetry tag a tensor satisfies at a given tolerance."""

    tag: SymmetryTag
    tolerance: float


@dataclass(frozen=True)
class PairUnfolding:
    """A tensor flattened to an n^2 x n^2 matrix over a pair of row modes.

    For row modes (a, b) with complementary column modes (c, d) in ascending
    order, matrix[(i_b - 1) n + i_a, (i_d - 1) n + i_c] = T[i_1, i_2, i_3, i_4]
    (1-based), i.e. the first listed mode runs fastest on each side.
    """

    row_modes: tuple[int, int]
    col_modes: tuple[int, int]
    matrix: np.ndarray


def _check_same_n(a: Tensor4, b: Tensor4) -> None:
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")


def outer_product_mm(x: np.ndarray, y: np.ndarray) -> Tensor4:
    """Matrix outer product: result[i,j,k,l] = X[i,j] * Y[k,l]."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape or x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError(f"expected two square matrices of equal size, got {x.shape} and {y.shape}")
    return Tensor4(np.tensordot(x, y, axes=0))


def outer_product_vvvv(a, b, c, d) -> Tensor4:
    """Vector outer product: result[i,j,k,l] = a_i b_j c_k d_l."""
    a, b, c, d = (np.asarray(v) for v in (a, b, c, d))
    if not (a.shape == b.shape == c.shape == d.shape) or a.ndim != 1:
        raise ValueError("expected four vectors of equal length")
    return Tensor4(np.einsum("i,j,k,l->ijkl", a, b, c, d))


def inner_product(a: Tensor4, b: Tensor4) -> complex:
    """<A, B> = sum A_q * conj(B_q)."""
    _check_same_n(a, b)
    return complex(np.vdot(b.data, a.data))


def permute_conjugate(t: Tensor4, perm: Iterable[int], conjugate: bool = False) -> Tensor4:
    """Relocate entries: result[i1,i2,i3,i4] = T[i_perm(1), ..., i_perm(4)].

    `perm` is a 1-based bijection of (1, 2, 3, 4); entrywise conjugation is
    applied afterwards when `conjugate` is set.
    """
    perm = tuple(perm)
    if sorted(perm) != [1, 2, 3, 4]:
        raise ValueError(f"invalid mode permutation {perm}")
    out = t.data.transpose(tuple(p - 1 for p in perm))
    if conjugate:
        out = np.conj(out)
    return Tensor4(out)


def _unfold_axes(row_modes: tuple[int, int]) -> tuple[tuple[int, int], tuple[int, ...]]:
    a, b = row_modes
    if a == b or not {a, b} <= {1, 2, 3, 4}:
        raise ValueError(f"invalid row modes {row_modes}")
    c, d = sorted({1, 2, 3, 4} - {a, b})
    # Row index (i_b - 1) n + i_a: mode b slow, mode a fast; same on columns.
    return (c, d), (b - 1, a - 1, d - 1, c - 1)


def unfold(t: Tensor4, row_modes: tuple[int, int]) -> PairUnfolding:
    """Flatten over a mode pair; with rows (1,2) this is the square unfolding
    M(A)[(j-1)n+i, (l-1)n+k] = A_{ijkl}."""
    col_modes, axes = _unfold_axes(tuple(row_modes))
    n = t.n
    matrix = t.data.transpose(axes).reshape(n * n, n * n)
    return PairUnfolding(tuple(row_modes), col_modes, matrix)


def fold(matrix: np.ndarray, row_modes: tuple[int, int]) -> Tensor4:
    """Inverse of :func:`unfold` for the same row modes."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    n = round(matrix.shape[0] ** 0.5)
    if n * n != matrix.shape[0]:
        raise ValueError(f"matrix side {matrix.shape[0]} is not a perfect square")
    _, axes = _unfold_axes(tuple(row_modes))
    arr = matrix.reshape(n, n, n, n)
    # arr axes currently follow (b, a, d, c); send each mode back home.
    order = tuple(int(i) for i in np.argsort(axes))
    return Tensor4(arr.transpose(order))


def mat_from_vec(v: np.ndarray) -> np.ndarray:
    """Fold a length-n^2 vector into an n x n matrix, E[s,t] = v[(t-1)n+s]."""
    v = np.asarray(v)
    n = round(v.size ** 0.5)
    if n * n != v.size:
        raise ValueError(f"vector length {v.size} is not a perfect square")
    return v.reshape(n, n, order="F")


def vec_from_mat(e: np.ndarray) -> np.ndarray:
    """Inverse of :func:`mat_from_vec` (column stacking)."""
    return np.asarray(e).reshape(-1, order="F")


def symmetry_deviations(t: Tensor4) -> dict[str, float]:
    """Max-entry deviation from each defining index identity."""
    a = t.data

    def dev(x, y) -> float:
        return float(np.abs(x - y).max())

    swap = a.transpose(2, 3, 0, 1)
    pair = max(dev(a, a.transpose(1, 0, 2, 3)), dev(a, a.transpose(0, 1, 3, 2)))
    full = max(dev(a, a.transpose(p)) for p in itertools.permutations(range(4)))
    return {
        "pair": pair,
        "swap": dev(a, swap),
        "swap_conj": dev(a, np.conj(swap)),
        "swap_neg": dev(a, -swap),
        "full": full,
        "imag": float(np.abs(a.imag).max()),
    }


# Identities that must hold, per tag, in terms of symmetry_deviations keys.
# "imag" entries additionally require a real tensor.
_TAG_IDENTITIES: dict[SymmetryTag, tuple[str, ...]] = {
    "general": (),
    "hermitian": ("swap_conj",),
    "cps": ("pair", "swap_conj"),
    "ps": ("imag", "pair", "swap"),
    "skew_ps": ("imag", "pair", "swap_neg"),
    "symmetric": ("full",),
}


def satisfies_symmetry(t: Tensor4, tag: SymmetryTag, tol: float = DEFAULT_CLASSIFY_TOL) -> bool:
    """Whether the tag's defining identities hold within tol * ||T||_F."""
    if tag not in _TAG_IDENTITIES:
        raise ValueError(f"unknown symmetry tag {tag!r}")
    d = symmetry_deviations(t)
    thresh = tol * t.norm()
    return all(d[key] <= thresh for key in _TAG_IDENTITIES[tag])


def classify_symmetry(t: Tensor4, tol: float = DEFAULT_CLASSIFY_TOL) -> SymmetryClass:
    """Report the most specific symmetry class at relative tolerance `tol`.

    Specificity: symmetric (all 24 index permutations), then the real classes
    ps / skew_ps, then cps, then hermitian, then general.  A real tensor with
    pair-swap symmetry satisfies the cps identities trivially and is reported
    as ps, the sharper class.
    """
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    d = symmetry_deviations(t)
    thresh = tol * t.norm()
    real = d["imag"] <= thresh
    if d["full"] <= thresh:
        tag: SymmetryTag = "symmetric"
    elif real and d["pair"] <= thresh and d["swap"] <= thresh:
        tag = "ps"
    elif real and d["pair"] <= thresh and d["swap_neg"] <= thresh:
        tag = "skew_ps"
    elif d["pair"] <= thresh and d["swap_conj"] <= thresh:
        tag = "cps"
    elif d["swap_conj"] <= thresh:
        tag = "hermitian"
    else:
        tag = "general"
    return SymmetryClass(tag, tol)


def require_symmetry(t: Tensor4, tag: SymmetryTag, tol: float = DEFAULT_CLASSIFY_TOL) -> None:
    """Raise SymmetryError naming the violated identity unless `tag` holds."""
    d = symmetry_deviations(t)
    thresh = tol * t.norm()
    names = {
        "pair": "within-pair index symmetry",
        "swap": "pair-swap symmetry",
        "swap_conj": "pair-swap-with-conjugation symmetry",
        "swap_neg": "pair-swap antisymmetry",
        "full": "full index symmetry",
        "imag": "real-valuedness",
    }
    bad = [key for key in _TAG_IDENTITIES[tag] if d[key] > thresh]
    if bad:
        detail = "; ".join(f"{names[k]} deviation {d[k]:.3e}" for k in bad)
        raise SymmetryError(
            f"input is not {tag} at tolerance {tol:g} (threshold {thresh:.3e}): {detail}"
        )


def project_cps(y: Tensor4) -> Tensor4:
    """Orthogonal projection (under Re<.,.>) onto the conjugate
    partial-symmetric tensors: the average of the eight index maps, the
    pair-swapped four conjugated."""
    a = y.data
    s = (
        a
        + a.transpose(0, 1, 3, 2)
        + a.transpose(1, 0, 2, 3)
        + a.transpose(1, 0, 3, 2)
        + np.conj(a.transpose(2, 3, 0, 1))
        + np.conj(a.transpose(3, 2, 0, 1))
        + np.conj(a.transpose(2, 3, 1, 0))
        + np.conj(a.transpose(3, 2, 1, 0))
    )
    return Tensor4(s / 8.0)


def project_ps(y: Tensor4) -> Tensor4:
    """Same eight-term average without conjugation; the orthogonal projector
    onto partial-symmetric tensors for real input.  Exposed for testing."""
    a = y.data
    s = (
        a
        + a.transpose(0, 1, 3, 2)
        + a.transpose(1, 0, 2, 3)
        + a.transpose(1, 0, 3, 2)
        + a.transpose(2, 3, 0, 1)
        + a.transpose(3, 2, 0, 1)
        + a.transpose(2, 3, 1, 0)
        + a.transpose(3, 2, 1, 0)
    )
    return Tensor4(s / 8.0)


@dataclass(frozen=True)
class SampleMask:
    """Set of observed 1-based index quadruples, closed under the
    partial-symmetry index maps."""

    n: int
    flags: np.ndarray

    def __post_init__(self) -> None:
        flags = np.array(self.flags, dtype=bool, copy=True)
        if flags.shape != (self.n,) * 4:
            raise ValueError(f"mask shape {flags.shape} does not match n={self.n}")
        for m in PS_INDEX_MAPS[1:]:
            if not np.array_equal(flags, flags.transpose(m)):
                raise MaskClosureError(
                    "observation set is not closed under the partial-symmetry index maps"
                )
        flags.flags.writeable = False
        object.__setattr__(self, "flags", flags)

    @classmethod
    def from_quadruples(
        cls, n: int, quadruples: Iterable[tuple[int, int, int, int]], close: bool = False
    ) -> "SampleMask":
        """Build from 1-based quadruples; `close` adds the missing orbit
        members instead of rejecting an unclosed set."""
        flags = np.zeros((n,) * 4, dtype=bool)
        for q in quadruples:
            i, j, k, l = q
            if not all(1 <= v <= n for v in (i, j, k, l)):
                raise ValueError(f"quadruple {q} out of range for n={n}")
            flags[i - 1, j - 1, k - 1, l - 1] = True
        if close:
            closed = flags
            for m in PS_INDEX_MAPS[1:]:
                closed = closed | flags.transpose(m)
            flags = closed
        return cls(n, flags)

    @classmethod
    def full(cls, n: int) -> "SampleMask":
        return cls(n, np.ones((n,) * 4, dtype=bool))

    @classmethod
    def empty(cls, n: int) -> "SampleMask":
        return cls(n, np.zeros((n,) * 4, dtype=bool))

    @property
    def observed(self) -> frozenset[tuple[int, int, int, int]]:
        idx = np.argwhere(self.flags)
        return frozenset(tuple(int(v) + 1 for v in row) for row in idx)

    def count(self) -> int:
        return int(self.flags.sum())

    def fill_ratio(self) -> float:
        return self.count() / self.n**4


def apply_mask(t: Tensor4, mask: SampleMask) -> Tensor4:
    """Zero out unobserved entries."""
    if t.n != mask.n:
        raise ValueError(f"dimension mismatch: tensor n={t.n}, mask n={mask.n}")
    return Tensor4(t.data * mask.flags)
