"""Iteration traces shared by the iterative solvers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SolverReport:
    """Trace of one solver run.

    The meaning of `objectives` and `residuals` is documented by each solver;
    `metrics` carries named per-iteration diagnostics (e.g. iterate norms).
    """

    iterations: int
    converged: bool
    termination: str
    objectives: tuple[float, ...] = ()
    residuals: tuple[float, ...] = ()
    flags: tuple[str, ...] = ()
    metrics: dict[str, tuple[float, ...]] = field(default_factory=dict)
