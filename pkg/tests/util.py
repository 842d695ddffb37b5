"""Shared test oracles and factories.

Oracles here are deliberately independent of the library's evaluation
paths: plain dict/loop arithmetic, exhaustive enumeration, and
Fraction-exact rounding.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

import numpy as np

from hpe.problem import Problem, Sample


def oracle_energy(problem: Problem, spins: Sequence[int]) -> float:
    """Straight-line objective evaluation from the coefficient dicts."""
    total = 0.0
    for i, a in problem.linear.items():
        total += a * spins[i]
    for (i, j), b in problem.quadratic.items():
        total += b * spins[i] * spins[j]
    return total


def all_states(n: int):
    """All spin tuples in lexicographic order, -1 before +1."""
    return itertools.product((-1, 1), repeat=n)


def oracle_ground(problem: Problem) -> tuple[float, list[tuple[int, ...]]]:
    """(minimum energy, all minimizing spin tuples) by exhaustive search."""
    best = None
    argmins: list[tuple[int, ...]] = []
    for spins in all_states(problem.num_qubits):
        e = oracle_energy(problem, spins)
        if best is None or e < best:
            best = e
            argmins = [spins]
        elif e == best:
            argmins.append(spins)
    assert best is not None
    return best, argmins


def oracle_quantize(x: float, step: float, half_range: float) -> float:
    """Exact-rational nearest-multiple rounding, ties away from zero, then clamp."""
    units = Fraction(x) / Fraction(step)
    floor = units.numerator // units.denominator
    frac = units - floor
    if frac > Fraction(1, 2):
        k = floor + 1
    elif frac < Fraction(1, 2):
        k = floor
    else:  # exact tie: away from zero
        k = floor + 1 if units > 0 else floor
    v = Fraction(k) * Fraction(step)
    v = max(Fraction(-half_range), min(Fraction(half_range), v))
    return float(v)


def random_problem(
    rng: np.random.Generator,
    num_qubits: int,
    density: float = 1.0,
    ensure_edges: bool = False,
) -> Problem:
    """Uniform random instance; independent of the harness generator."""
    linear = {i: float(v) for i, v in enumerate(rng.uniform(-2.0, 2.0, num_qubits))}
    quadratic = {}
    for i in range(num_qubits):
        for j in range(i + 1, num_qubits):
            if density >= 1.0 or rng.random() < density:
                quadratic[(i, j)] = float(rng.uniform(-1.0, 1.0))
    if ensure_edges and not quadratic and num_qubits >= 2:
        quadratic[(0, 1)] = float(rng.uniform(-1.0, 1.0))
    return Problem(num_qubits, linear, quadratic)


def random_sample(rng: np.random.Generator, num_qubits: int) -> Sample:
    return Sample(tuple(int(v) for v in rng.choice((-1, 1), size=num_qubits)))
