"""Ising problem and sample types, energy evaluation, and coefficient quantization.

The objective over spins ``q_i in {-1, +1}`` is

    sum_i a_i * q_i  +  sum_{i<j} b_ij * q_i * q_j

with each unordered coupler counted exactly once.  Linear coefficients live
on qubits, quadratic coefficients on unordered qubit pairs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from hpe import _kernels

__all__ = [
    "PrecisionSpec",
    "Problem",
    "Sample",
    "energy",
    "energies",
    "quantize_value",
    "quantize_problem",
    "read_problem",
    "write_problem",
    "problem_to_dict",
    "problem_from_dict",
]

LINEAR_HALF_RANGE = 2.0
QUADRATIC_HALF_RANGE = 1.0


@dataclass(frozen=True)
class PrecisionSpec:
    """Signed fixed-point precision: 1 sign bit plus ``bits - 1`` resolution bits.

    The representable grid on the unit interval has increment
    ``step = 2**-(bits - 1)``, which is a power of two and therefore exact
    in binary floating point.
    """

    bits: int

    def __post_init__(self) -> None:
        if not isinstance(self.bits, int) or isinstance(self.bits, bool):
            raise ValueError(f"precision bits must be an integer, got {self.bits!r}")
        if not 2 <= self.bits <= 64:
            raise ValueError(
                f"precision bits must be in [2, 64] (1 sign bit + at least 1 "
                f"resolution bit), got {self.bits}"
            )

    @property
    def step(self) -> float:
        return 2.0 ** (1 - self.bits)


@dataclass(frozen=True)
class Sample:
    """One full spin assignment; every value is -1 or +1."""

    spins: tuple[int, ...]

    def __post_init__(self) -> None:
        spins = tuple(int(v) for v in self.spins)
        if not spins:
            raise ValueError("a sample needs at least one spin")
        if any(v not in (-1, 1) for v in spins):
            raise ValueError("spins must be -1 or +1")
        object.__setattr__(self, "spins", spins)

    def __len__(self) -> int:
        return len(self.spins)

    @classmethod
    def from_array(cls, row: Iterable[int]) -> "Sample":
        return cls(tuple(int(v) for v in row))

    def to_array(self) -> np.ndarray:
        return np.array(self.spins, dtype=np.int8)


class CompiledProblem:
    """Flat array view of a problem, shared by the numeric kernels.

    ``linear`` is a dense length-n vector; edges are sorted by (i, j); the
    CSR adjacency stores both directions of every coupler.  Array layouts
    (and hence floating-point summation orders) are canonical, so repeated
    evaluation is bit-for-bit reproducible.
    """

    __slots__ = (
        "num_qubits",
        "linear",
        "edge_i",
        "edge_j",
        "edge_w",
        "indptr",
        "indices",
        "weights",
    )

    def __init__(self, problem: "Problem") -> None:
        n = problem.num_qubits
        self.num_qubits = n
        lin = np.zeros(n, dtype=np.float64)
        for i, a in problem.linear.items():
            lin[i] = a
        self.linear = lin

        pairs = sorted(problem.quadratic)
        self.edge_i = np.array([p[0] for p in pairs], dtype=np.int32)
        self.edge_j = np.array([p[1] for p in pairs], dtype=np.int32)
        self.edge_w = np.array([problem.quadratic[p] for p in pairs], dtype=np.float64)

        counts = np.zeros(n + 1, dtype=np.int64)
        for i, j in pairs:
            counts[i + 1] += 1
            counts[j + 1] += 1
        indptr = np.cumsum(counts)
        indices = np.zeros(indptr[-1], dtype=np.int32)
        weights = np.zeros(indptr[-1], dtype=np.float64)
        cursor = indptr[:-1].copy()
        for (i, j), w in zip(pairs, self.edge_w):
            indices[cursor[i]] = j
            weights[cursor[i]] = w
            cursor[i] += 1
            indices[cursor[j]] = i
            weights[cursor[j]] = w
            cursor[j] += 1
        self.indptr = indptr
        self.indices = indices
        self.weights = weights

    def energy_rows(self, rows: np.ndarray) -> np.ndarray:
        """Energies of a (num_rows, n) spin matrix, in canonical summation order."""
        q = np.ascontiguousarray(rows, dtype=np.int8)
        out = np.empty(q.shape[0], dtype=np.float64)
        _kernels.energy_rows(q, self.linear, self.edge_i, self.edge_j, self.edge_w, out)
        return out

    def energy_row(self, row: np.ndarray) -> float:
        # Single rows go through the same kernel as batches, so equal spin
        # rows always score bit-identically regardless of the call shape.
        return float(self.energy_rows(np.asarray(row, dtype=np.int8)[None, :])[0])


@dataclass(frozen=True)
class Problem:
    """Ising objective on an undirected graph.

    ``linear`` maps qubit index -> coefficient, ``quadratic`` maps an
    unordered index pair -> coupler coefficient.  Keys are normalized to
    (min, max); a pair may appear at most once and self-couplings are
    rejected.  ``hardware_feasible`` marks problems whose coefficients sit
    inside the sampler's native ranges: linear in [-2, 2], quadratic in
    [-1, 1].  Instances are immutable after construction.
    """

    num_qubits: int
    linear: dict[int, float] = field(default_factory=dict)
    quadratic: dict[tuple[int, int], float] = field(default_factory=dict)
    hardware_feasible: bool = False

    def __post_init__(self) -> None:
        n = self.num_qubits
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ValueError(f"num_qubits must be a positive integer, got {n!r}")
        lin: dict[int, float] = {}
        for i, a in self.linear.items():
            i = int(i)
            if not 0 <= i < n:
                raise ValueError(f"linear index {i} out of range [0, {n})")
            a = float(a)
            if not math.isfinite(a):
                raise ValueError(f"linear coefficient at {i} is not finite: {a!r}")
            lin[i] = a
        quad: dict[tuple[int, int], float] = {}
        for key, b in self.quadratic.items():
            i, j = int(key[0]), int(key[1])
            if i == j:
                raise ValueError(f"self-coupling {{{i},{i}}} is not allowed")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"coupler {{{i},{j}}} out of range [0, {n})")
            if i > j:
                i, j = j, i
            if (i, j) in quad:
                raise ValueError(f"duplicate coupler {{{i},{j}}}")
            b = float(b)
            if not math.isfinite(b):
                raise ValueError(f"coupler {{{i},{j}}} coefficient is not finite: {b!r}")
            quad[(i, j)] = b
        if self.hardware_feasible:
            bad_a = [i for i, a in lin.items() if abs(a) > LINEAR_HALF_RANGE]
            bad_b = [p for p, b in quad.items() if abs(b) > QUADRATIC_HALF_RANGE]
            if bad_a or bad_b:
                raise ValueError(
                    "hardware-feasible problem has out-of-range coefficients: "
                    f"linear {bad_a}, quadratic {bad_b}"
                )
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "quadratic", quad)
        object.__setattr__(self, "_compiled_cache", None)

    def compiled(self) -> CompiledProblem:
        """Array view used by the kernels; built once and cached."""
        cache = getattr(self, "_compiled_cache")
        if cache is None:
            cache = CompiledProblem(self)
            object.__setattr__(self, "_compiled_cache", cache)
        return cache

    def max_abs_coefficient(self) -> float:
        """Largest coefficient magnitude over linear and quadratic terms."""
        mags = [abs(v) for v in self.linear.values()]
        mags += [abs(v) for v in self.quadratic.values()]
        return max(mags, default=0.0)

    def min_nonzero_coefficient(self) -> float:
        """Smallest nonzero coefficient magnitude, or 0.0 if all are zero."""
        mags = [abs(v) for v in self.linear.values() if v != 0.0]
        mags += [abs(v) for v in self.quadratic.values() if v != 0.0]
        return min(mags, default=0.0)


def energy(problem: Problem, sample: Sample) -> float:
    """Objective value of one sample; each coupler counted exactly once."""
    if len(sample) != problem.num_qubits:
        raise ValueError(
            f"dimension mismatch: problem has {problem.num_qubits} qubits, "
            f"sample has {len(sample)} spins"
        )
    return problem.compiled().energy_row(sample.to_array())


def energies(problem: Problem, rows: np.ndarray) -> np.ndarray:
    """Objective values of a (num_samples, num_qubits) spin matrix."""
    rows = np.asarray(rows)
    if rows.ndim != 2 or rows.shape[1] != problem.num_qubits:
        raise ValueError(
            f"dimension mismatch: problem has {problem.num_qubits} qubits, "
            f"got spin matrix of shape {rows.shape}"
        )
    if not np.all(np.abs(rows) == 1):
        raise ValueError("spin matrix entries must be -1 or +1")
    return problem.compiled().energy_rows(rows)


def quantize_value(x: float, spec: PrecisionSpec, half_range: float) -> float:
    """Round ``x`` to the nearest multiple of ``spec.step``, then clamp.

    Ties round away from zero.  The result is clamped to
    ``[-half_range, +half_range]`` and is always an exact multiple of the
    step, so a second application is the identity.
    """
    if half_range not in (1, 2):
        raise ValueError(f"half_range must be 1 or 2, got {half_range!r}")
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot quantize non-finite value {x!r}")
    half_range = float(half_range)
    # The clamp bound itself is a grid multiple, so saturated values are exact.
    if x >= half_range:
        return half_range
    if x <= -half_range:
        return -half_range
    units = x / spec.step  # exact: step is a power of two
    if units >= 0.0:
        k = math.floor(units + 0.5)
    else:
        k = math.ceil(units - 0.5)
    v = k * spec.step
    if v > half_range:
        return half_range
    if v < -half_range:
        return -half_range
    return v


def quantize_problem(problem: Problem, spec: PrecisionSpec) -> Problem:
    """Quantize every coefficient onto the precision grid.

    Linear coefficients clamp to [-2, 2], quadratic ones to [-1, 1]; the
    result is flagged hardware-feasible.
    """
    lin = {i: quantize_value(a, spec, LINEAR_HALF_RANGE) for i, a in problem.linear.items()}
    quad = {p: quantize_value(b, spec, QUADRATIC_HALF_RANGE) for p, b in problem.quadratic.items()}
    return Problem(problem.num_qubits, lin, quad, hardware_feasible=True)


def problem_to_dict(problem: Problem) -> dict:
    """JSON-ready dict: entries sorted by index, couplers listed as [i, j, b] with i < j."""
    return {
        "num_qubits": problem.num_qubits,
        "linear": [[i, a] for i, a in sorted(problem.linear.items())],
        "quadratic": [[i, j, b] for (i, j), b in sorted(problem.quadratic.items())],
    }


def problem_from_dict(data: dict) -> Problem:
    """Parse the on-disk problem schema, rejecting malformed or duplicate entries."""
    if not isinstance(data, dict):
        raise ValueError("problem document must be a JSON object")
    try:
        n = data["num_qubits"]
        linear_entries = data["linear"]
        quadratic_entries = data["quadratic"]
    except KeyError as exc:
        raise ValueError(f"problem document is missing key {exc}") from None
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"num_qubits must be a positive integer, got {n!r}")
    linear: dict[int, float] = {}
    for entry in linear_entries:
        if len(entry) != 2:
            raise ValueError(f"linear entry must be [index, coefficient], got {entry!r}")
        i, a = entry
        if not isinstance(i, int) or isinstance(i, bool):
            raise ValueError(f"linear index must be an integer, got {i!r}")
        if i in linear:
            raise ValueError(f"duplicate linear entry for qubit {i}")
        linear[i] = float(a)
    quadratic: dict[tuple[int, int], float] = {}
    for entry in quadratic_entries:
        if len(entry) != 3:
            raise ValueError(f"quadratic entry must be [i, j, coefficient], got {entry!r}")
        i, j, b = entry
        if not isinstance(i, int) or not isinstance(j, int) or isinstance(i, bool) or isinstance(j, bool):
            raise ValueError(f"quadratic indices must be integers, got {entry!r}")
        if i >= j:
            raise ValueError(f"quadratic entry must list the smaller index first, got [{i}, {j}]")
        if (i, j) in quadratic:
            raise ValueError(f"duplicate quadratic entry for pair {{{i},{j}}}")
        quadratic[(i, j)] = float(b)
    return Problem(n, linear, quadratic)


def write_problem(problem: Problem, path: str | Path) -> None:
    """Write the problem as UTF-8 JSON; float repr round-trips exactly."""
    Path(path).write_text(json.dumps(problem_to_dict(problem)) + "\n", encoding="utf-8")


def read_problem(path: str | Path) -> Problem:
    """Read a problem written by :func:`write_problem`."""
    return problem_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
