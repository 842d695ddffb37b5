"""Pluggable sample generation standing in for annealing hardware.

Three kinds behind one entry point: ``exact`` (exhaustive ground-state
oracle), ``anneal`` (seeded single-spin-flip simulated annealing, one
independent chain per sample) and ``random`` (uniform spins, a control).
Given the same problem and config, every kind returns bit-identical
sample sets, regardless of internal parallelism.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from hpe import _kernels
from hpe.problem import Problem, Sample, energies
from hpe.seeds import MASK64, mix64

__all__ = [
    "SAMPLER_KINDS",
    "EXACT_QUBIT_LIMIT",
    "SamplerConfig",
    "SampleSet",
    "solve_exact",
    "sample",
    "write_sample_set_csv",
]

SAMPLER_KINDS = ("exact", "anneal", "random")

EXACT_QUBIT_LIMIT = 24

_ENUM_CHUNK = 1 << 16


@dataclass(frozen=True)
class SamplerConfig:
    """How to draw a sample set.

    ``sweeps`` and the two temperatures only apply to the ``anneal`` kind;
    left as None they are derived from the problem being sampled: 10 sweeps
    per qubit, initial temperature twice the largest coefficient magnitude,
    final temperature 1% of the smallest nonzero coefficient magnitude.
    """

    kind: str
    seed: int = 0
    num_samples: int = 1
    sweeps: int | None = None
    initial_temperature: float | None = None
    final_temperature: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in SAMPLER_KINDS:
            raise ValueError(f"unknown sampler kind {self.kind!r}, expected one of {SAMPLER_KINDS}")
        if not isinstance(self.num_samples, int) or self.num_samples < 1:
            raise ValueError(f"num_samples must be a positive integer, got {self.num_samples!r}")
        if not 0 <= int(self.seed) <= MASK64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed!r}")
        if self.sweeps is not None and self.sweeps < 1:
            raise ValueError(f"sweeps must be >= 1, got {self.sweeps!r}")
        for name in ("initial_temperature", "final_temperature"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ValueError(f"{name} must be positive, got {value!r}")
        if (
            self.initial_temperature is not None
            and self.final_temperature is not None
            and self.initial_temperature < self.final_temperature
        ):
            raise ValueError("initial_temperature must be >= final_temperature")


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Ordered, immutable collection of equal-length samples."""

    array: np.ndarray
    source_label: str = ""

    def __post_init__(self) -> None:
        arr = np.array(self.array, dtype=np.int8, copy=True)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"sample set must be a non-empty 2-d spin matrix, got shape {arr.shape}")
        if not np.all(np.abs(arr) == 1):
            raise ValueError("sample set spins must be -1 or +1")
        arr.setflags(write=False)
        object.__setattr__(self, "array", arr)

    @property
    def num_qubits(self) -> int:
        return self.array.shape[1]

    def __len__(self) -> int:
        return self.array.shape[0]

    def __getitem__(self, index: int) -> Sample:
        return Sample.from_array(self.array[index])

    def __iter__(self) -> Iterator[Sample]:
        for row in self.array:
            yield Sample.from_array(row)

    def energies(self, problem: Problem) -> np.ndarray:
        return energies(problem, self.array)


def solve_exact(problem: Problem) -> Sample:
    """Global minimizer by exhaustive enumeration.

    Among ties the lexicographically smallest spin sequence wins, treating
    -1 < +1.  Guarded to 24 qubits.
    """
    n = problem.num_qubits
    if n > EXACT_QUBIT_LIMIT:
        raise ValueError(
            f"solve_exact enumerates 2**num_qubits states and is limited to "
            f"{EXACT_QUBIT_LIMIT} qubits, got {n}"
        )
    compiled = problem.compiled()
    # Qubit i maps to bit (n-1-i) of the state index, so ascending index
    # order is exactly lexicographic order with -1 < +1; keeping the first
    # strict improvement therefore keeps the lexicographically smallest tie.
    shifts = np.arange(n - 1, -1, -1, dtype=np.uint64)
    total = 1 << n
    best_energy = np.inf
    best_state = 0
    for start in range(0, total, _ENUM_CHUNK):
        states = np.arange(start, min(start + _ENUM_CHUNK, total), dtype=np.uint64)
        spins = (((states[:, None] >> shifts) & 1).astype(np.int8) * 2 - 1)
        chunk_energies = compiled.energy_rows(spins)
        k = int(np.argmin(chunk_energies))
        if chunk_energies[k] < best_energy:
            best_energy = chunk_energies[k]
            best_state = int(states[k])
    bits = (best_state >> np.arange(n - 1, -1, -1, dtype=np.uint64)) & 1
    return Sample.from_array(bits.astype(np.int8) * 2 - 1)


def _anneal_parameters(problem: Problem, config: SamplerConfig) -> tuple[int, float, float]:
    sweeps = config.sweeps if config.sweeps is not None else 10 * problem.num_qubits
    largest = problem.max_abs_coefficient()
    t_init = config.initial_temperature
    if t_init is None:
        t_init = 2.0 * largest if largest > 0 else 1.0
    t_final = config.final_temperature
    if t_final is None:
        smallest = problem.min_nonzero_coefficient()
        t_final = 0.01 * (smallest if smallest > 0 else t_init)
    t_final = min(t_final, t_init)
    return sweeps, t_init, t_final


def sample(problem: Problem, config: SamplerConfig) -> SampleSet:
    """Draw ``config.num_samples`` samples of ``problem``.

    Sample r uses the derived stream seed ``mix64(config.seed, r)``, so the
    set is a pure function of (problem, config) and chains may be generated
    in any order or in parallel.
    """
    n = problem.num_qubits
    rows = np.empty((config.num_samples, n), dtype=np.int8)
    label = f"{config.kind}:seed={config.seed}"
    if config.kind == "exact":
        rows[:] = solve_exact(problem).to_array()
        return SampleSet(rows, label)
    seeds = np.array(
        [mix64(config.seed, r) for r in range(config.num_samples)], dtype=np.uint64
    )
    if config.kind == "random":
        _kernels.random_spins(seeds, rows)
        return SampleSet(rows, label)
    sweeps, t_init, t_final = _anneal_parameters(problem, config)
    compiled = problem.compiled()
    _kernels.anneal_spins(
        compiled.linear,
        compiled.indptr,
        compiled.indices,
        compiled.weights,
        sweeps,
        t_init,
        t_final,
        seeds,
        rows,
    )
    return SampleSet(rows, label)


def write_sample_set_csv(sample_set: SampleSet, problem: Problem, path: str | Path) -> None:
    """Dump a sample set with per-sample energies under ``problem``.

    Header: ``sample_index,spin_0,...,spin_{N-1},energy``; spins are
    written as -1/1 and energies with 17 significant digits.
    """
    values = sample_set.energies(problem)
    n = sample_set.num_qubits
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["sample_index"] + [f"spin_{i}" for i in range(n)] + ["energy"])
        for index, (row, value) in enumerate(zip(sample_set.array, values)):
            writer.writerow([index] + [int(v) for v in row] + [f"{value:.17g}"])
