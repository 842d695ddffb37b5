"""High-precision Ising optimization on low-precision samplers.

The library solves an Ising objective whose coefficients carry more
precision than the sampler honors, by sampling many positively scaled,
clipped and quantized versions of the objective and merging the pooled
samples with multi-qubit correction, always scoring against the
full-precision coefficients.
"""

from hpe.enhance import HpeResult, build_versions, run_hpe
from hpe.harness import (
    CaseSpec,
    ChimeraGraph,
    ComparisonRecord,
    RandomGraph,
    TableRow,
    aggregate,
    emit_csv,
    emit_table,
    generate_case,
    parse_graph,
    read_records,
    run_case,
    run_cases,
    run_experiment,
)
from hpe.mqc import DifferencePartition, combine, difference_components, reduce, reduce_left_fold
from hpe.problem import (
    PrecisionSpec,
    Problem,
    Sample,
    energies,
    energy,
    quantize_problem,
    quantize_value,
    read_problem,
    write_problem,
)
from hpe.samplers import SampleSet, SamplerConfig, sample, solve_exact, write_sample_set_csv
from hpe.scaling import ScaleSchedule, apply_version, make_schedule

__version__ = "0.1.0"

__all__ = [
    "CaseSpec",
    "ChimeraGraph",
    "ComparisonRecord",
    "DifferencePartition",
    "HpeResult",
    "PrecisionSpec",
    "Problem",
    "RandomGraph",
    "Sample",
    "SamplerConfig",
    "SampleSet",
    "ScaleSchedule",
    "TableRow",
    "aggregate",
    "apply_version",
    "build_versions",
    "combine",
    "difference_components",
    "emit_csv",
    "emit_table",
    "energies",
    "energy",
    "generate_case",
    "make_schedule",
    "parse_graph",
    "quantize_problem",
    "quantize_value",
    "read_problem",
    "read_records",
    "reduce",
    "reduce_left_fold",
    "run_case",
    "run_cases",
    "run_experiment",
    "run_hpe",
    "sample",
    "solve_exact",
    "write_problem",
    "write_sample_set_csv",
]
