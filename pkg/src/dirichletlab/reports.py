"""Structured verdicts shared by every checker and experiment suite."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

#: Absolute tolerance scale for pointwise comparisons, multiplied by
#: (1 + sup-norm of the data) unless the caller overrides it.
TOLERANCE_SCALE = 1e-9

#: Dense eigendecompositions are used up to this many vertices; larger
#: targets fall back to iterative methods.
DENSE_EIG_LIMIT = 2000


def default_tolerance(*fields: np.ndarray, tol: float | None = None) -> float:
    """Return `tol` if given, else the scale-aware default 1e-9*(1+max |f|)."""
    if tol is not None:
        if tol <= 0:
            raise ValueError("tolerance must be positive")
        return float(tol)
    scale = 1.0
    for f in fields:
        f = np.asarray(f, dtype=float)
        if f.size:
            scale = max(scale, 1.0 + float(np.max(np.abs(f))))
    return TOLERANCE_SCALE * scale


def default_t_grid() -> np.ndarray:
    """Geometric time grid for semigroup monotonicity tests: 41 points, 2^-20..2^10."""
    return np.geomspace(2.0**-20, 2.0**10, 41)


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a single checker run.

    `worst_violation` is tolerance-adjusted: the maximum over all checked
    constraints of (LHS - RHS - tol), so `worst_violation <= 0` exactly when
    the check passes.  `witness_vertex`/`witness_time` locate the worst
    constraint when one exists.  `parameters` records the inputs needed to
    reproduce the verdict; `timings` is wall-clock bookkeeping and carries no
    semantic content.
    """

    passed: bool
    worst_violation: float
    witness_vertex: int | None
    witness_time: float | None
    method: str
    parameters: dict[str, Any] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.passed != (self.worst_violation <= 0):
            raise ValueError("verdict must match the sign of worst_violation")

    def to_dict(self) -> dict[str, Any]:
        return {
            "verdict": "pass" if self.passed else "fail",
            "worst_violation": float(self.worst_violation),
            "witness": {
                "vertex": None if self.witness_vertex is None else int(self.witness_vertex),
                "t": None if self.witness_time is None else float(self.witness_time),
            },
            "method": self.method,
            "parameters": _plain(self.parameters),
            "timings": {k: float(v) for k, v in self.timings.items()},
        }


def make_report(
    excess: float,
    tol: float,
    method: str,
    witness_vertex: int | None = None,
    witness_time: float | None = None,
    parameters: dict[str, Any] | None = None,
    timings: dict[str, float] | None = None,
) -> CheckReport:
    """Build a CheckReport from a raw constraint excess max(LHS - RHS)."""
    violation = float(excess) - float(tol)
    params = dict(parameters or {})
    params.setdefault("tol", float(tol))
    return CheckReport(
        passed=violation <= 0,
        worst_violation=violation,
        witness_vertex=witness_vertex,
        witness_time=witness_time,
        method=method,
        parameters=params,
        timings=dict(timings or {}),
    )


@dataclass(frozen=True)
class SuiteReport:
    """Aggregate of many checker runs (one experiment suite)."""

    name: str
    passed: bool
    trials: int
    failures: int
    worst_violation: float
    parameters: dict[str, Any] = field(default_factory=dict)
    rows: list[dict[str, Any]] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "experiment": self.name,
            "verdict": "pass" if self.passed else "fail",
            "trials": int(self.trials),
            "failures": int(self.failures),
            "worst_violation": float(self.worst_violation),
            "parameters": _plain(self.parameters),
            "timings": {k: float(v) for k, v in self.timings.items()},
        }


def _plain(value: Any) -> Any:
    """Recursively convert numpy scalars/arrays to JSON-ready Python values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    return value
