"""Experiment harness: generate problem batches, compare the three solvers, tabulate.

Per case it records three energies under the full-precision base problem:
``e_dw`` (best raw sample of the hardware-precision baseline), ``e_m``
(merge-reduced baseline sample set) and ``e_h`` (the enhancement
pipeline's answer), plus the exhaustive optimum where small enough.
Aggregation counts how the three compare across cases, matching the
report-table layout, and persists per-case energies as CSV.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from hpe.enhance import PAIRING_MODES, run_hpe
from hpe.mqc import reduce as mqc_reduce
from hpe.problem import PrecisionSpec, Problem, energy, quantize_problem, write_problem
from hpe.samplers import (
    EXACT_QUBIT_LIMIT,
    SAMPLER_KINDS,
    SamplerConfig,
    sample,
    solve_exact,
)
from hpe.scaling import DEFAULT_DIVISOR, DEFAULT_VERSIONS, SQRT2, apply_version, make_schedule
from hpe.seeds import BASELINE_STREAM, ENHANCE_STREAM, PROBLEM_STREAM, mix64
from hpe.topology import chimera_edges, chimera_num_qubits, random_edges

import numpy as np

__all__ = [
    "RandomGraph",
    "ChimeraGraph",
    "CaseSpec",
    "ComparisonRecord",
    "TableRow",
    "parse_graph",
    "graph_label",
    "generate_case",
    "run_case",
    "run_cases",
    "run_experiment",
    "aggregate",
    "emit_table",
    "emit_csv",
    "read_records",
    "write_run_meta",
    "read_run_meta",
    "meta_path_for",
]

EQUALITY_REL_TOL = 1e-12

RESULTS_HEADER = ("case_index", "e_dw", "e_m", "e_h", "e_exact")

_GENERATE_ATTEMPTS = 100


@dataclass(frozen=True)
class RandomGraph:
    """Uniform random topology: each pair coupled with probability ``density``."""

    density: float

    def __post_init__(self) -> None:
        if not 0.0 < self.density <= 1.0:
            raise ValueError(f"edge density must be in (0, 1], got {self.density!r}")


@dataclass(frozen=True)
class ChimeraGraph:
    """Chimera cell-grid topology with ``rows x cols`` cells of shore size ``shore``."""

    rows: int
    cols: int
    shore: int

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1 or self.shore < 1:
            raise ValueError(
                f"chimera dimensions must be positive, got "
                f"({self.rows}, {self.cols}, {self.shore})"
            )

    @property
    def num_qubits(self) -> int:
        return chimera_num_qubits(self.rows, self.cols, self.shore)


def parse_graph(text: str) -> RandomGraph | ChimeraGraph:
    """Parse a topology descriptor: ``random:RHO`` or ``chimera:R,C,T``."""
    kind, _, args = text.partition(":")
    if kind == "random":
        try:
            return RandomGraph(float(args))
        except ValueError as exc:
            raise ValueError(f"bad random-graph descriptor {text!r}: {exc}") from None
    if kind == "chimera":
        parts = args.split(",")
        if len(parts) != 3:
            raise ValueError(f"bad chimera descriptor {text!r}, expected chimera:R,C,T")
        try:
            rows, cols, shore = (int(p) for p in parts)
        except ValueError:
            raise ValueError(f"bad chimera descriptor {text!r}, expected integers") from None
        return ChimeraGraph(rows, cols, shore)
    raise ValueError(f"unknown graph kind {kind!r}, expected random:RHO or chimera:R,C,T")


def graph_label(graph: RandomGraph | ChimeraGraph) -> str:
    if isinstance(graph, RandomGraph):
        return f"random:{graph.density:g}"
    return f"chimera:{graph.rows},{graph.cols},{graph.shore}"


def precision_label(spec: PrecisionSpec | None) -> str:
    """Bit count as text, or ``dbl`` for unconstrained double precision."""
    return "dbl" if spec is None else str(spec.bits)


@dataclass(frozen=True)
class CaseSpec:
    """Full description of one experiment batch.

    Desk-scale defaults: 64 qubits on a density-0.1 random graph, 100
    cases, 200 samples per sampler invocation, 20 versions.  ``samples``
    counts per version for the enhancement pipeline (and is also the
    baseline sample count).
    """

    num_qubits: int = 64
    graph: RandomGraph | ChimeraGraph = RandomGraph(0.1)
    base_precision: PrecisionSpec | None = PrecisionSpec(9)
    hardware_precision: PrecisionSpec | None = PrecisionSpec(3)
    cases: int = 100
    samples: int = 200
    seed: int = 0
    versions: int = DEFAULT_VERSIONS
    divisor: float = DEFAULT_DIVISOR
    step_ratio: float = SQRT2
    sampler_kind: str = "anneal"
    pairing: str = "index"
    sweeps: int | None = None
    initial_temperature: float | None = None
    final_temperature: float | None = None

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise ValueError(f"num_qubits must be positive, got {self.num_qubits!r}")
        if isinstance(self.graph, ChimeraGraph) and self.graph.num_qubits != self.num_qubits:
            raise ValueError(
                f"num_qubits={self.num_qubits} does not match the chimera topology "
                f"({self.graph.num_qubits} qubits)"
            )
        if self.cases < 1 or self.samples < 1:
            raise ValueError("cases and samples must both be >= 1")
        if self.versions < 1:
            raise ValueError(f"versions must be >= 1, got {self.versions!r}")
        if not self.divisor > 0 or not self.step_ratio > 0:
            raise ValueError("divisor and step_ratio must be positive")
        if self.sampler_kind not in SAMPLER_KINDS:
            raise ValueError(
                f"unknown sampler kind {self.sampler_kind!r}, expected one of {SAMPLER_KINDS}"
            )
        if self.pairing not in PAIRING_MODES:
            raise ValueError(
                f"unknown pairing mode {self.pairing!r}, expected one of {PAIRING_MODES}"
            )


@dataclass(frozen=True)
class ComparisonRecord:
    """Per-case energies under the base problem; ``e_exact`` present when computed."""

    case_index: int
    e_dw: float
    e_m: float
    e_h: float
    e_exact: float | None = None

    def __post_init__(self) -> None:
        if self.e_m > self.e_dw:
            raise ValueError(
                f"case {self.case_index}: merged energy {self.e_m!r} exceeds the raw "
                f"sampler minimum {self.e_dw!r}; the merge contract forbids this"
            )
        if self.e_exact is not None and self.e_exact > min(self.e_dw, self.e_m, self.e_h):
            raise ValueError(
                f"case {self.case_index}: exhaustive optimum {self.e_exact!r} exceeds a "
                f"reported energy; the oracle contract forbids this"
            )


@dataclass(frozen=True)
class TableRow:
    """One aggregated line of the comparison table."""

    bp_label: str
    hp_label: str
    cases: int
    samples: int
    dw_lt_h: int
    m_lt_h: int
    m_eq_h: int
    h_lt_m: int

    def __post_init__(self) -> None:
        total = self.m_lt_h + self.m_eq_h + self.h_lt_m
        if total != self.cases:
            raise ValueError(
                f"m/h counts must partition the cases: {self.m_lt_h} + {self.m_eq_h} "
                f"+ {self.h_lt_m} != {self.cases}"
            )


def generate_case(spec: CaseSpec, case_index: int) -> Problem:
    """Draw the base problem for one case, deterministically in (seed, case_index).

    Topology first, then linear coefficients uniform on [-2, 2], couplers
    uniform on [-1, 1], then quantization at the base precision (skipped
    when unconstrained).  A draw whose coefficients are all zero is retried
    with the next derived seed, at most 100 times.
    """
    n = spec.num_qubits
    for attempt in range(_GENERATE_ATTEMPTS):
        rng = np.random.default_rng(mix64(spec.seed, PROBLEM_STREAM, case_index, attempt))
        if isinstance(spec.graph, RandomGraph):
            edges = random_edges(n, spec.graph.density, rng)
        else:
            edges = chimera_edges(spec.graph.rows, spec.graph.cols, spec.graph.shore)
        linear_values = rng.uniform(-2.0, 2.0, n)
        coupler_values = rng.uniform(-1.0, 1.0, len(edges))
        problem = Problem(
            n,
            {i: float(v) for i, v in enumerate(linear_values)},
            {pair: float(v) for pair, v in zip(edges, coupler_values)},
        )
        if spec.base_precision is not None:
            problem = quantize_problem(problem, spec.base_precision)
        if problem.max_abs_coefficient() > 0.0:
            return problem
    raise ValueError(
        f"failed to generate a problem with any nonzero coefficient for case "
        f"{case_index} after {_GENERATE_ATTEMPTS} attempts"
    )


def _sampler_config(spec: CaseSpec, seed: int) -> SamplerConfig:
    return SamplerConfig(
        kind=spec.sampler_kind,
        seed=seed,
        num_samples=spec.samples,
        sweeps=spec.sweeps,
        initial_temperature=spec.initial_temperature,
        final_temperature=spec.final_temperature,
    )


def run_case(base: Problem, spec: CaseSpec, case_index: int = 0) -> ComparisonRecord:
    """Score the three solvers on one base problem.

    The baseline sees the problem at unit scale through the hardware grid
    (clip + quantize only); its best raw sample gives ``e_dw`` and its
    merge-reduction gives ``e_m``.  The enhancement pipeline gives ``e_h``.
    Every energy is evaluated with the base problem's full coefficients,
    all through the same scalar path so that identical spin rows always
    score identically.
    """
    hardware_view = apply_version(base, 1.0, spec.hardware_precision)
    baseline = sample(hardware_view, _sampler_config(spec, mix64(spec.seed, BASELINE_STREAM, case_index)))
    baseline_energies = baseline.energies(base)
    e_dw = energy(base, baseline[int(np.argmin(baseline_energies))])
    e_m = energy(base, mqc_reduce(baseline, base))

    schedule = make_schedule(base, spec.versions, spec.divisor, spec.step_ratio)
    result = run_hpe(
        base,
        schedule,
        spec.hardware_precision,
        _sampler_config(spec, mix64(spec.seed, ENHANCE_STREAM, case_index)),
        pairing=spec.pairing,
    )
    e_h = energy(base, result.final)

    e_exact = None
    if base.num_qubits <= EXACT_QUBIT_LIMIT:
        e_exact = energy(base, solve_exact(base))
    return ComparisonRecord(case_index, e_dw, e_m, e_h, e_exact)


def run_cases(
    spec: CaseSpec,
    *,
    emit_problems_dir: str | Path | None = None,
    progress: Callable[[ComparisonRecord], None] | None = None,
) -> list[ComparisonRecord]:
    """Generate and run every case of ``spec`` in index order."""
    problems_dir = None
    if emit_problems_dir is not None:
        problems_dir = Path(emit_problems_dir)
        problems_dir.mkdir(parents=True, exist_ok=True)
    records = []
    for case_index in range(spec.cases):
        problem = generate_case(spec, case_index)
        if problems_dir is not None:
            write_problem(problem, problems_dir / f"case_{case_index:05d}.json")
        record = run_case(problem, spec, case_index)
        records.append(record)
        if progress is not None:
            progress(record)
    return records


def aggregate(
    records: Sequence[ComparisonRecord],
    *,
    bp_label: str = "?",
    hp_label: str = "?",
    samples: int = 0,
    rel_tol: float = EQUALITY_REL_TOL,
) -> TableRow:
    """Count the pairwise outcomes across records.

    ``e_m`` vs ``e_h`` is classified with a relative equality tolerance so
    that exact grid ties are never split by float noise; ``e_dw < e_h`` is
    counted strictly.
    """
    if not records:
        raise ValueError("cannot aggregate zero records")
    dw_lt_h = m_lt_h = m_eq_h = h_lt_m = 0
    for record in records:
        if record.e_dw < record.e_h:
            dw_lt_h += 1
        if math.isclose(record.e_m, record.e_h, rel_tol=rel_tol, abs_tol=0.0):
            m_eq_h += 1
        elif record.e_m < record.e_h:
            m_lt_h += 1
        else:
            h_lt_m += 1
    return TableRow(
        bp_label=bp_label,
        hp_label=hp_label,
        cases=len(records),
        samples=samples,
        dw_lt_h=dw_lt_h,
        m_lt_h=m_lt_h,
        m_eq_h=m_eq_h,
        h_lt_m=h_lt_m,
    )


def emit_table(rows: Sequence[TableRow]) -> str:
    """Markdown comparison table, one line per aggregated row."""
    if not rows:
        raise ValueError("cannot emit an empty table")
    lines = [
        "| BP | HP | Cases | Samples | dw<h | m<h | m=h | h<m |",
        "| --- | --- | --- | --- | --- | --- | --- | --- |",
    ]
    for row in rows:
        lines.append(
            f"| {row.bp_label} | {row.hp_label} | {row.cases} | {row.samples} "
            f"| {row.dw_lt_h} | {row.m_lt_h} | {row.m_eq_h} | {row.h_lt_m} |"
        )
    return "\n".join(lines)


def _format_energy(value: float | None) -> str:
    return "" if value is None else f"{value:.17g}"


def emit_csv(records: Sequence[ComparisonRecord], path: str | Path) -> None:
    """Write per-case energies with 17 significant digits (lossless round-trip)."""
    if not records:
        raise ValueError("cannot write zero records")
    lines = [",".join(RESULTS_HEADER)]
    for r in records:
        lines.append(
            f"{r.case_index},{_format_energy(r.e_dw)},{_format_energy(r.e_m)},"
            f"{_format_energy(r.e_h)},{_format_energy(r.e_exact)}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_records(path: str | Path) -> list[ComparisonRecord]:
    """Read a results CSV written by :func:`emit_csv`."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [line for line in text.splitlines() if line]
    if not lines or tuple(lines[0].split(",")) != RESULTS_HEADER:
        raise ValueError(
            f"{path}: expected header {','.join(RESULTS_HEADER)!r}, "
            f"got {lines[0] if lines else ''!r}"
        )
    records = []
    for line in lines[1:]:
        fields = line.split(",")
        if len(fields) != len(RESULTS_HEADER):
            raise ValueError(f"{path}: malformed row {line!r}")
        records.append(
            ComparisonRecord(
                case_index=int(fields[0]),
                e_dw=float(fields[1]),
                e_m=float(fields[2]),
                e_h=float(fields[3]),
                e_exact=float(fields[4]) if fields[4] else None,
            )
        )
    return records


def meta_path_for(csv_path: str | Path) -> Path:
    return Path(str(csv_path) + ".meta.json")


def write_run_meta(csv_path: str | Path, spec: CaseSpec) -> None:
    """Sidecar JSON describing a results CSV (labels for ``hpe table``)."""
    meta = {
        "bp": precision_label(spec.base_precision),
        "hp": precision_label(spec.hardware_precision),
        "cases": spec.cases,
        "samples": spec.samples,
        "qubits": spec.num_qubits,
        "graph": graph_label(spec.graph),
        "seed": spec.seed,
        "versions": spec.versions,
        "divisor": spec.divisor,
        "step_ratio": spec.step_ratio,
        "sampler": spec.sampler_kind,
        "pairing": spec.pairing,
    }
    meta_path_for(csv_path).write_text(
        json.dumps(meta, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def read_run_meta(csv_path: str | Path) -> dict | None:
    path = meta_path_for(csv_path)
    if not path.exists():
        return None
    return json.loads(path.read_text(encoding="utf-8"))


def run_experiment(
    spec: CaseSpec,
    out_csv: str | Path | None = None,
    *,
    emit_problems_dir: str | Path | None = None,
    progress: Callable[[ComparisonRecord], None] | None = None,
) -> tuple[list[ComparisonRecord], TableRow]:
    """Run all cases, aggregate, and optionally persist CSV plus metadata sidecar."""
    records = run_cases(spec, emit_problems_dir=emit_problems_dir, progress=progress)
    row = aggregate(
        records,
        bp_label=precision_label(spec.base_precision),
        hp_label=precision_label(spec.hardware_precision),
        samples=spec.samples,
    )
    if out_csv is not None:
        emit_csv(records, out_csv)
        write_run_meta(out_csv, spec)
    return records, row
