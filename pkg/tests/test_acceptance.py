"""Acceptance suite: one test per release criterion, tolerances pinned.

Each test prints a single pass line (visible with ``pytest -s``); the
terminal summary lists every criterion's outcome either way.  The two
pattern-reproduction tests run the full desk-scale harness and take a few
minutes each.
"""

import subprocess
import sys
import time

import numpy as np
import pytest

from hpe import _kernels
from hpe.enhance import run_hpe
from hpe.harness import CaseSpec, RandomGraph, aggregate, emit_csv, read_records, run_cases
from hpe.mqc import combine, reduce
from hpe.problem import (
    PrecisionSpec,
    energy,
    quantize_problem,
    quantize_value,
    read_problem,
    write_problem,
)
from hpe.samplers import SamplerConfig, sample, solve_exact
from hpe.scaling import apply_version, make_schedule

from util import random_problem, random_sample


@pytest.fixture(scope="module", autouse=True)
def warm_kernels():
    # JIT compilation happens here so the timed criteria measure the
    # algorithms, not compiler startup.
    _kernels.warm_up()


def _passed(line: str) -> None:
    print(f"\n[acceptance] {line}: PASS", flush=True)


def test_c1_merge_contract_bulk_trials():
    """combine() never exceeds the pair minimum: 10,000 trials, 2..64 qubits."""
    rng = np.random.default_rng(101)
    started = time.perf_counter()
    trials = 0
    violations = 0
    for _ in range(2000):
        n = int(rng.integers(2, 65))
        density = float(rng.uniform(0.05, 1.0))
        problem = random_problem(rng, n, density=density)
        for _ in range(5):
            s, t = random_sample(rng, n), random_sample(rng, n)
            merged = combine(s, t, problem)
            if energy(problem, merged) > min(energy(problem, s), energy(problem, t)):
                violations += 1
            trials += 1
    elapsed = time.perf_counter() - started
    assert trials >= 10_000
    assert violations == 0
    assert elapsed < 60.0, f"{trials} trials took {elapsed:.1f}s"
    _passed(f"c1 merge contract: {trials} trials, 0 violations, {elapsed:.1f}s")


def test_c2_reduction_reaches_optimum_small_instances():
    """Annealed 10-qubit dense instances: reduce hits the exhaustive optimum >= 95/100."""
    rng = np.random.default_rng(0)
    hits = 0
    for t in range(100):
        problem = random_problem(rng, 10, density=1.0)
        floor = energy(problem, solve_exact(problem))
        drawn = sample(problem, SamplerConfig(kind="anneal", seed=5000 + t, num_samples=500))
        if energy(problem, reduce(drawn, problem)) == floor:
            hits += 1
    assert hits >= 95, f"only {hits}/100 runs reached the optimum"
    _passed(f"c2 reduction optimality: {hits}/100 at the exhaustive optimum")


def test_c3_minimizer_set_invariant_under_positive_scaling():
    """Pure positive scaling preserves the exact minimizer set, 100/100 problems."""
    rng = np.random.default_rng(303)
    n = 10
    states = np.array(
        [[1 if (k >> (n - 1 - i)) & 1 else -1 for i in range(n)] for k in range(1 << n)],
        dtype=np.int8,
    )
    preserved = 0
    for _ in range(100):
        problem = random_problem(rng, n, density=1.0)
        base_energies = problem.compiled().energy_rows(states)
        base_argmin = set(np.flatnonzero(base_energies == base_energies.min()))
        ok = True
        for c in make_schedule(problem, versions=20).constants:
            scaled = apply_version(problem, c, None)
            scaled_energies = scaled.compiled().energy_rows(states)
            scaled_argmin = set(np.flatnonzero(scaled_energies == scaled_energies.min()))
            if scaled_argmin != base_argmin:
                ok = False
                break
        preserved += ok
    assert preserved == 100, f"minimizer set changed in {100 - preserved} problems"
    _passed("c3 minimizer-set invariance under scaling: 100/100")


def test_c4_quantization_bounds_and_idempotence():
    """|quantize(x) - clamp(x)| <= step/2 and idempotence over 10^6 draws."""
    rng = np.random.default_rng(404)
    total = 1_000_000
    bits = rng.integers(2, 17, size=total)
    half_ranges = rng.choice([1.0, 2.0], size=total)
    xs = rng.uniform(-4.0, 4.0, size=total)
    # force a slice of exact half-step ties, the worst case for the bound
    tie_count = 10_000
    tie_steps = 2.0 ** (1 - bits[:tie_count].astype(np.float64))
    xs[:tie_count] = (rng.integers(-16, 17, size=tie_count) * 2 + 1) * tie_steps / 2
    violations = 0
    for k in range(total):
        spec = PrecisionSpec(int(bits[k]))
        half_range = float(half_ranges[k])
        x = float(xs[k])
        v = quantize_value(x, spec, half_range)
        clamped = min(max(x, -half_range), half_range)
        if abs(v - clamped) > spec.step / 2:
            violations += 1
        elif not -half_range <= v <= half_range:
            violations += 1
        elif quantize_value(v, spec, half_range) != v:
            violations += 1
    assert violations == 0
    _passed(f"c4 quantization bounds: {total} draws, 0 violations")


def test_c5_feasibility_pattern_three_bit_hardware():
    """Desk-scale 9-bit problems on 3-bit hardware: enhancement rarely loses to raw sampling."""
    spec = CaseSpec(
        num_qubits=64,
        graph=RandomGraph(0.1),
        base_precision=PrecisionSpec(9),
        hardware_precision=PrecisionSpec(3),
        cases=100,
        samples=200,
        seed=20260809,
        versions=20,
    )
    started = time.perf_counter()
    records = run_cases(spec)
    elapsed = time.perf_counter() - started
    assert all(r.e_m <= r.e_dw for r in records), "merge contract broken in a case"
    row = aggregate(records, bp_label="9", hp_label="3", samples=spec.samples)
    assert row.dw_lt_h <= 10, f"raw sampler beat enhancement in {row.dw_lt_h}/100 cases"
    assert row.m_lt_h + row.m_eq_h + row.h_lt_m == 100
    assert elapsed < 600.0, f"run took {elapsed:.0f}s"
    _passed(
        f"c5 feasibility pattern: dw<h={row.dw_lt_h} m<h={row.m_lt_h} "
        f"m=h={row.m_eq_h} h<m={row.h_lt_m}, {elapsed:.0f}s"
    )


def test_c6_high_precision_pattern_nine_bit_hardware():
    """17- and 33-bit problems on 9-bit hardware: enhancement never loses to raw sampling."""
    started = time.perf_counter()
    rows = {}
    for bp in (17, 33):
        spec = CaseSpec(
            num_qubits=64,
            graph=RandomGraph(0.1),
            base_precision=PrecisionSpec(bp),
            hardware_precision=PrecisionSpec(9),
            cases=50,
            samples=200,
            seed=77_000 + bp,
            versions=20,
        )
        records = run_cases(spec)
        rows[bp] = aggregate(records, bp_label=str(bp), hp_label="9", samples=spec.samples)
    elapsed = time.perf_counter() - started
    for bp, row in rows.items():
        assert row.dw_lt_h == 0, f"BP={bp}: raw sampler beat enhancement {row.dw_lt_h} times"
        assert row.m_lt_h <= 5, f"BP={bp}: merged baseline beat enhancement {row.m_lt_h}/50 times"
        assert row.m_lt_h + row.m_eq_h + row.h_lt_m == 50
    assert any(row.h_lt_m > 0 for row in rows.values()), "enhancement never strictly won"
    assert elapsed < 900.0, f"runs took {elapsed:.0f}s"
    _passed(
        "c6 high-precision pattern: "
        + "; ".join(
            f"BP={bp}: dw<h={row.dw_lt_h} m<h={row.m_lt_h} m=h={row.m_eq_h} h<m={row.h_lt_m}"
            for bp, row in rows.items()
        )
        + f", {elapsed:.0f}s"
    )


def test_c7_structural_invariants_inline():
    """Every survivor beats its pool minimum and the final beats every survivor, exactly."""
    rng = np.random.default_rng(707)
    base = quantize_problem(random_problem(rng, 16, density=0.5), PrecisionSpec(9))
    schedule = make_schedule(base, versions=10)
    config = SamplerConfig(kind="anneal", seed=4242, num_samples=50)
    # run_hpe re-raises internally on any violation; verify independently here
    result = run_hpe(base, schedule, PrecisionSpec(3), config, keep_version_sets=True)
    for i in range(config.num_samples):
        pool = [version_set[i] for version_set in result.per_version_sets]
        pool_min = min(energy(base, s) for s in pool)
        assert result.intermediate_energies[i] <= pool_min
    assert result.final_energy <= min(result.intermediate_energies)
    assert result.final_energy == energy(base, result.final)
    _passed("c7 structural invariants: exact, zero tolerance")


def test_c8_cli_byte_determinism(tmp_path):
    """Two identical CLI runs produce byte-identical CSV output."""
    args = [
        sys.executable, "-m", "hpe", "run",
        "--qubits", "16", "--graph", "random:0.3",
        "--bp", "9", "--hp", "3",
        "--cases", "4", "--samples", "50", "--versions", "5",
        "--seed", "77", "--quiet",
    ]
    outputs = []
    for name in ("first.csv", "second.csv"):
        out = tmp_path / name
        proc = subprocess.run(
            args + ["--out", str(out)], capture_output=True, text=True, timeout=600
        )
        assert proc.returncode == 0, proc.stderr
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    assert len(read_records(tmp_path / "first.csv")) == 4
    _passed("c8 determinism: byte-identical CSV across executions")


def test_c9_file_format_round_trip(tmp_path):
    """Problem JSON and results CSV reproduce every value exactly."""
    rng = np.random.default_rng(909)
    # continuous coefficients exercise the 17-significant-digit round trip
    problem = random_problem(rng, 12, density=0.4)
    problem_path = tmp_path / "problem.json"
    write_problem(problem, problem_path)
    loaded = read_problem(problem_path)
    assert loaded.num_qubits == problem.num_qubits
    assert loaded.linear == problem.linear
    assert loaded.quadratic == problem.quadratic

    spec = CaseSpec(
        num_qubits=10,
        graph=RandomGraph(0.4),
        base_precision=None,
        hardware_precision=None,
        cases=3,
        samples=20,
        seed=11,
        versions=3,
    )
    records = run_cases(spec)
    csv_path = tmp_path / "results.csv"
    emit_csv(records, csv_path)
    assert read_records(csv_path) == records
    _passed("c9 file formats: exact round trip")
