"""Text file formats: tensors, observation masks, decompositions, rank-one
results, and ground truth records.

Floats are written with 17 significant digits so every file round-trips
bit-exactly through the loader.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import MaskClosureError, SampleMask, Tensor4
from .decompose import MatrixDecomposition, MatrixFactor
from .instances import GroundTruth
from .rankone import Rank1CPS


class FileFormatError(ValueError):
    """Input file does not follow the documented layout."""


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def _read_header(lines: list[str], pos: int, expected: dict[str, str | None]) -> tuple[dict, int]:
    header: dict[str, str] = {}
    for key, required in expected.items():
        if pos >= len(lines):
            raise FileFormatError(f"missing header line {key!r}")
        parts = lines[pos].split()
        if len(parts) != 2 or parts[0] != key:
            raise FileFormatError(f"expected header line '{key} <value>', got {lines[pos]!r}")
        if required is not None and parts[1] != required:
            raise FileFormatError(f"header {key}={parts[1]!r}; this reader handles {required!r}")
        header[key] = parts[1]
        pos += 1
    return header, pos


def _nonempty_lines(path: str | Path) -> list[str]:
    text = Path(path).read_text()
    return [ln.strip() for ln in text.splitlines() if ln.strip()]


def save_tensor(path: str | Path, t: Tensor4) -> None:
    """Header n / order / field, then n^4 're im' records in canonical
    (i, j, k, l) order, l fastest."""
    lines = [f"n {t.n}", "order 4", "field complex"]
    flat = t.data.reshape(-1)
    lines.extend(f"{_fmt(z.real)} {_fmt(z.imag)}" for z in flat)
    Path(path).write_text("\n".join(lines) + "\n")


def load_tensor(path: str | Path) -> Tensor4:
    lines = _nonempty_lines(path)
    header, pos = _read_header(lines, 0, {"n": None, "order": "4", "field": "complex"})
    try:
        n = int(header["n"])
    except ValueError as exc:
        raise FileFormatError(f"bad dimension {header['n']!r}") from exc
    if n < 1:
        raise FileFormatError("dimension must be positive")
    body = lines[pos:]
    if len(body) != n**4:
        raise FileFormatError(f"expected {n**4} entry records, found {len(body)}")
    values = np.empty(n**4, dtype=np.complex128)
    for idx, line in enumerate(body):
        parts = line.split()
        if len(parts) != 2:
            raise FileFormatError(f"entry record {idx + 1} is not 're im': {line!r}")
        try:
            values[idx] = complex(float(parts[0]), float(parts[1]))
        except ValueError as exc:
            raise FileFormatError(f"bad number in entry record {idx + 1}: {line!r}") from exc
    return Tensor4(values.reshape((n,) * 4))


def save_mask(path: str | Path, mask: SampleMask) -> None:
    """Header n, then one 1-based quadruple per line."""
    lines = [f"n {mask.n}"]
    for row in np.argwhere(mask.flags):
        lines.append(" ".join(str(int(v) + 1) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def load_mask(path: str | Path, close: bool = False) -> SampleMask:
    """Load and verify closure; `close` completes the orbits instead of
    rejecting an unclosed set."""
    lines = _nonempty_lines(path)
    header, pos = _read_header(lines, 0, {"n": None})
    n = int(header["n"])
    quads = []
    for line in lines[pos:]:
        parts = line.split()
        if len(parts) != 4:
            raise FileFormatError(f"mask record is not a quadruple: {line!r}")
        try:
            quads.append(tuple(int(v) for v in parts))
        except ValueError as exc:
            raise FileFormatError(f"bad index in mask record: {line!r}") from exc
    try:
        return SampleMask.from_quadruples(n, quads, close=close)
    except MaskClosureError:
        raise
    except ValueError as exc:
        raise FileFormatError(str(exc)) from exc


def save_decomposition(path: str | Path, dec: MatrixDecomposition) -> None:
    """Header n / count / conjugated_second, then per factor a 'lambda' line
    and n^2 're im' matrix records, row-major."""
    lines = [
        f"n {dec.n}",
        f"count {len(dec.factors)}",
        f"conjugated_second {int(dec.conjugated_second)}",
    ]
    for f in dec.factors:
        lines.append(f"lambda {_fmt(f.lam)}")
        for z in np.asarray(f.matrix, dtype=np.complex128).reshape(-1):
            lines.append(f"{_fmt(z.real)} {_fmt(z.imag)}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_decomposition(path: str | Path) -> MatrixDecomposition:
    lines = _nonempty_lines(path)
    header, pos = _read_header(lines, 0, {"n": None, "count": None, "conjugated_second": None})
    n = int(header["n"])
    count = int(header["count"])
    conj2 = bool(int(header["conjugated_second"]))
    factors = []
    for _ in range(count):
        if pos >= len(lines) or not lines[pos].startswith("lambda "):
            raise FileFormatError("expected a 'lambda <value>' line")
        lam = float(lines[pos].split()[1])
        pos += 1
        if pos + n * n > len(lines):
            raise FileFormatError("truncated factor matrix")
        entries = np.empty(n * n, dtype=np.complex128)
        for idx in range(n * n):
            parts = lines[pos + idx].split()
            if len(parts) != 2:
                raise FileFormatError(f"matrix record is not 're im': {lines[pos + idx]!r}")
            entries[idx] = complex(float(parts[0]), float(parts[1]))
        pos += n * n
        factors.append(MatrixFactor(lam, entries.reshape(n, n)))
    return MatrixDecomposition(n, tuple(factors), conj2)


def save_rank1(path: str | Path, r1: Rank1CPS) -> None:
    """One 'lambda' line, then the unit vector as 're im' records."""
    lines = [f"lambda {_fmt(r1.lam)}"]
    for z in np.asarray(r1.x, dtype=np.complex128):
        lines.append(f"{_fmt(z.real)} {_fmt(z.imag)}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_rank1(path: str | Path) -> Rank1CPS:
    lines = _nonempty_lines(path)
    if not lines or not lines[0].startswith("lambda "):
        raise FileFormatError("expected a 'lambda <value>' first line")
    lam = float(lines[0].split()[1])
    vec = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise FileFormatError(f"vector record is not 're im': {line!r}")
        vec.append(complex(float(parts[0]), float(parts[1])))
    return Rank1CPS(lam, np.array(vec))


def _complex_array_to_json(arr: np.ndarray) -> list:
    arr = np.asarray(arr, dtype=np.complex128)
    return [arr.real.tolist(), arr.imag.tolist()]


def save_ground_truth(path: str | Path, gt: GroundTruth) -> None:
    """JSON record of the generating data (complex arrays as [re, im])."""
    doc = {
        "kind": gt.kind,
        "lambdas": list(gt.lambdas),
        "matrices": [_complex_array_to_json(m) for m in gt.matrices],
        "vectors": [_complex_array_to_json(v) for v in gt.vectors],
        "vector_pairs": [
            [_complex_array_to_json(p), _complex_array_to_json(q)] for p, q in gt.vector_pairs
        ],
        "matrix_pairs": [
            [_complex_array_to_json(u), _complex_array_to_json(v)] for u, v in gt.matrix_pairs
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")
