"""Scale schedules and scaled/clipped/quantized problem versions.

A schedule is a geometric ladder of positive constants normalized by the
problem's largest coefficient magnitude.  Applying one constant to a
problem and pushing the result through a hardware precision spec yields a
version of the objective that the low-precision sampler sees as a
genuinely different problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from hpe.problem import (
    LINEAR_HALF_RANGE,
    QUADRATIC_HALF_RANGE,
    PrecisionSpec,
    Problem,
    quantize_value,
)

__all__ = ["ScaleSchedule", "make_schedule", "apply_version", "SQRT2"]

SQRT2 = math.sqrt(2.0)

DEFAULT_VERSIONS = 20
DEFAULT_DIVISOR = 8.0


@dataclass(frozen=True)
class ScaleSchedule:
    """Geometric ladder of version scale constants.

    ``max_magnitude`` is the largest |coefficient| of the source problem;
    ``constants[0] = 1 / (divisor * max_magnitude)`` and each successive
    constant multiplies by ``step_ratio``.  The default ratio sqrt(2)
    advances half a bit of resolution per version.
    """

    max_magnitude: float
    constants: tuple[float, ...]
    divisor: float = DEFAULT_DIVISOR
    step_ratio: float = SQRT2

    def __post_init__(self) -> None:
        if not self.max_magnitude > 0:
            raise ValueError(f"max_magnitude must be positive, got {self.max_magnitude!r}")
        if not self.constants:
            raise ValueError("a schedule needs at least one scale constant")
        if any(not c > 0 for c in self.constants):
            raise ValueError("scale constants must all be positive")
        if not self.divisor > 0 or not self.step_ratio > 0:
            raise ValueError("divisor and step_ratio must be positive")

    def __len__(self) -> int:
        return len(self.constants)


def make_schedule(
    problem: Problem,
    versions: int = DEFAULT_VERSIONS,
    divisor: float = DEFAULT_DIVISOR,
    step_ratio: float = SQRT2,
) -> ScaleSchedule:
    """Build the scale ladder for ``problem``.

    The first constant is ``1 / (divisor * d)`` where d is the largest
    coefficient magnitude; each later constant is the previous one times
    ``step_ratio``, so the recurrence holds exactly in floating point.
    """
    if versions < 1:
        raise ValueError(f"need at least one version, got {versions}")
    if not divisor > 0:
        raise ValueError(f"divisor must be positive, got {divisor}")
    if not step_ratio > 0:
        raise ValueError(f"step_ratio must be positive, got {step_ratio}")
    d = problem.max_abs_coefficient()
    if d == 0.0:
        raise ValueError("degenerate problem, no scale: every coefficient is zero")
    constants = [1.0 / (divisor * d)]
    for _ in range(versions - 1):
        constants.append(constants[-1] * step_ratio)
    return ScaleSchedule(
        max_magnitude=d,
        constants=tuple(constants),
        divisor=float(divisor),
        step_ratio=float(step_ratio),
    )


def apply_version(problem: Problem, scale: float, hardware: PrecisionSpec | None) -> Problem:
    """Scale every coefficient by ``scale`` and push through the hardware grid.

    With a precision spec, scaled linear terms are rounded and clamped to
    [-2, 2] and scaled couplers to [-1, 1]; the result is flagged
    hardware-feasible.  With ``hardware=None`` the problem is purely
    rescaled: no clipping, no quantization (unconstrained hardware).
    """
    if not scale > 0:
        raise ValueError(f"version scale must be positive, got {scale!r}")
    scale = float(scale)
    if hardware is None:
        lin = {i: scale * a for i, a in problem.linear.items()}
        quad = {p: scale * b for p, b in problem.quadratic.items()}
        return Problem(problem.num_qubits, lin, quad)
    lin = {
        i: quantize_value(scale * a, hardware, LINEAR_HALF_RANGE)
        for i, a in problem.linear.items()
    }
    quad = {
        p: quantize_value(scale * b, hardware, QUADRATIC_HALF_RANGE)
        for p, b in problem.quadratic.items()
    }
    return Problem(problem.num_qubits, lin, quad, hardware_feasible=True)
