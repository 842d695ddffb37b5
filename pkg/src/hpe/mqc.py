"""Multi-qubit correction: merge sample pairs along disagreement components.

Two samples that disagree on a set of qubits partition that set into
connected components of the coupling graph.  No edge crosses between two
components, so flipping one component changes the energy independently of
the others; adopting exactly the strictly-improving flips yields a sample
whose energy never exceeds either parent's.  Reducing a whole set runs a
balanced pairwise tournament of such merges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from hpe import _kernels
from hpe.problem import CompiledProblem, Problem, Sample
from hpe.samplers import SampleSet

__all__ = [
    "DifferencePartition",
    "difference_components",
    "combine",
    "reduce",
    "reduce_left_fold",
]


@dataclass(frozen=True)
class DifferencePartition:
    """Disjoint qubit groups covering exactly the disagreement set.

    Each group is the vertex set of one connected component of the coupling
    graph restricted to the disagreeing indices; no edge of the problem
    joins two distinct groups.  Groups are ordered by smallest member.
    """

    components: tuple[frozenset[int], ...]

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)


def _check_dimensions(problem: Problem, *samples: Sample) -> None:
    for s in samples:
        if len(s) != problem.num_qubits:
            raise ValueError(
                f"dimension mismatch: problem has {problem.num_qubits} qubits, "
                f"sample has {len(s)} spins"
            )


def difference_components(s: Sample, t: Sample, problem: Problem) -> DifferencePartition:
    """Partition the indices where ``s`` and ``t`` disagree into graph components."""
    _check_dimensions(problem, s, t)
    disagreement = [i for i, (a, b) in enumerate(zip(s.spins, t.spins)) if a != b]
    parent = {i: i for i in disagreement}

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in problem.quadratic:
        if i in parent and j in parent:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[rj] = ri

    groups: dict[int, list[int]] = {}
    for i in disagreement:
        groups.setdefault(find(i), []).append(i)
    components = sorted((frozenset(members) for members in groups.values()), key=min)
    return DifferencePartition(tuple(components))


def _combine_rows(compiled: CompiledProblem, s: np.ndarray, t: np.ndarray) -> np.ndarray:
    return _kernels.merge_spins(
        s, t, compiled.linear, compiled.indptr, compiled.indices, compiled.weights
    )


def combine(s: Sample, t: Sample, problem: Problem) -> Sample:
    """Merge two samples; the result's energy is <= min of the parents'.

    Starting from ``s``, each disagreement component independently adopts
    ``t``'s spins exactly when that strictly lowers the energy; zero-gain
    components keep ``s``.  ``combine(s, s) == s``.
    """
    _check_dimensions(problem, s, t)
    merged = _combine_rows(problem.compiled(), s.to_array(), t.to_array())
    return Sample.from_array(merged)


def _as_matrix(samples: SampleSet | Sequence[Sample], problem: Problem) -> np.ndarray:
    if isinstance(samples, SampleSet):
        matrix = samples.array
    else:
        if len(samples) == 0:
            raise ValueError("cannot reduce an empty sample set")
        matrix = np.array([s.spins for s in samples], dtype=np.int8)
    if matrix.shape[1] != problem.num_qubits:
        raise ValueError(
            f"dimension mismatch: problem has {problem.num_qubits} qubits, "
            f"samples have {matrix.shape[1]} spins"
        )
    return matrix


def _reduce_matrix(compiled: CompiledProblem, matrix: np.ndarray) -> np.ndarray:
    """Balanced tournament of merges over the rows, in index order.

    Round pairing is (0,1), (2,3), ...; an odd row passes through to the
    next round.  The pairing structure alone defines the result.
    """
    rows = [matrix[i] for i in range(matrix.shape[0])]
    while len(rows) > 1:
        merged = [
            _combine_rows(compiled, rows[k], rows[k + 1]) for k in range(0, len(rows) - 1, 2)
        ]
        if len(rows) % 2:
            merged.append(rows[-1])
        rows = merged
    return rows[0]


def reduce(samples: SampleSet | Sequence[Sample], problem: Problem) -> Sample:
    """Reduce a sample set to a single sample with energy <= the set minimum."""
    matrix = _as_matrix(samples, problem)
    return Sample.from_array(_reduce_matrix(problem.compiled(), matrix))


def reduce_left_fold(samples: SampleSet | Sequence[Sample], problem: Problem) -> Sample:
    """Sequential fold variant of :func:`reduce`; same contract, different pairing."""
    matrix = _as_matrix(samples, problem)
    compiled = problem.compiled()
    acc = matrix[0]
    for k in range(1, matrix.shape[0]):
        acc = _combine_rows(compiled, acc, matrix[k])
    return Sample.from_array(acc)
