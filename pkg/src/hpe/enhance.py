"""High-precision enhancement: recover precision beyond the sampler's grid.

The pipeline builds K scaled/clipped/quantized versions of a base problem,
samples each version independently, pools one sample per version into
cross-version sets, merges each set down to one sample, and merges those
survivors into the final answer.  Every merge scores energies with the
base problem's full-precision coefficients, never a version's.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from hpe.mqc import _reduce_matrix
from hpe.problem import PrecisionSpec, Problem, Sample
from hpe.samplers import SamplerConfig, SampleSet, sample
from hpe.scaling import ScaleSchedule, apply_version
from hpe.seeds import SHUFFLE_STREAM, mix64

__all__ = ["PAIRING_MODES", "HpeResult", "build_versions", "run_hpe"]

PAIRING_MODES = ("index", "shuffle")


@dataclass(frozen=True)
class HpeResult:
    """Outcome of one enhancement run.

    ``final`` is the answer; ``intermediates`` are the per-cross-set
    survivors it was reduced from.  All energies are evaluated under the
    base problem.  ``per_version_sets`` retains the raw per-version sample
    sets when diagnostics were requested (in sampling order, before any
    pairing shuffle).
    """

    final: Sample
    final_energy: float
    intermediates: tuple[Sample, ...]
    intermediate_energies: tuple[float, ...]
    per_version_sets: tuple[SampleSet, ...] | None = None


def build_versions(
    base: Problem, schedule: ScaleSchedule, hardware: PrecisionSpec | None
) -> list[Problem]:
    """One scaled problem per schedule constant, pushed through the hardware grid."""
    return [apply_version(base, c, hardware) for c in schedule.constants]


def run_hpe(
    base: Problem,
    schedule: ScaleSchedule,
    hardware: PrecisionSpec | None,
    sampler: SamplerConfig,
    *,
    pairing: str = "index",
    keep_version_sets: bool = False,
) -> HpeResult:
    """Run the full enhancement pipeline on ``base``.

    Version k is sampled with the derived seed ``mix64(sampler.seed, k)``.
    Cross-version set i pools the i-th sample of every version (or of every
    shuffled version when ``pairing="shuffle"``); each set reduces to one
    survivor and the survivors reduce to the final sample.  Raises
    RuntimeError if the merge contract is ever violated: the final energy
    must not exceed any survivor's, and no survivor may exceed its own
    pool's minimum.
    """
    if pairing not in PAIRING_MODES:
        raise ValueError(f"unknown pairing mode {pairing!r}, expected one of {PAIRING_MODES}")
    compiled = base.compiled()
    num_samples = sampler.num_samples

    version_sets: list[SampleSet] = []
    pooled = np.empty(
        (len(schedule), num_samples, base.num_qubits), dtype=np.int8
    )
    for k in range(len(schedule)):
        version = apply_version(base, schedule.constants[k], hardware)
        drawn = sample(version, replace(sampler, seed=mix64(sampler.seed, k)))
        if keep_version_sets:
            version_sets.append(drawn)
        rows = drawn.array
        if pairing == "shuffle":
            order = np.random.default_rng(
                mix64(sampler.seed, SHUFFLE_STREAM, k)
            ).permutation(num_samples)
            rows = rows[order]
        pooled[k] = rows

    survivors = np.empty((num_samples, base.num_qubits), dtype=np.int8)
    for i in range(num_samples):
        survivors[i] = _reduce_matrix(compiled, pooled[:, i, :])
    final_row = _reduce_matrix(compiled, survivors)

    # One stacked evaluation keeps every energy on the identical code path,
    # so equal rows always get equal floats and the exact (zero-tolerance)
    # contract checks below cannot be tripped by summation-order noise.
    num_versions = len(schedule)
    stacked = np.concatenate(
        [
            pooled.reshape(num_versions * num_samples, base.num_qubits),
            survivors,
            final_row[None, :],
        ]
    )
    stacked_energies = compiled.energy_rows(stacked)
    pool_energies = stacked_energies[: num_versions * num_samples].reshape(
        num_versions, num_samples
    )
    survivor_energies = stacked_energies[num_versions * num_samples : -1]
    final_energy = float(stacked_energies[-1])

    pool_minima = pool_energies.min(axis=0)
    if np.any(survivor_energies > pool_minima):
        worst = int(np.argmax(survivor_energies - pool_minima))
        raise RuntimeError(
            f"merge contract violated: survivor {worst} has energy "
            f"{survivor_energies[worst]!r} above its pool minimum {pool_minima[worst]!r}"
        )
    if final_energy > survivor_energies.min():
        raise RuntimeError(
            f"merge contract violated: final energy {final_energy!r} above the "
            f"best survivor {survivor_energies.min()!r}"
        )

    return HpeResult(
        final=Sample.from_array(final_row),
        final_energy=final_energy,
        intermediates=tuple(Sample.from_array(row) for row in survivors),
        intermediate_energies=tuple(float(e) for e in survivor_energies),
        per_version_sets=tuple(version_sets) if keep_version_sets else None,
    )
