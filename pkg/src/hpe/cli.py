"""Command line interface: run experiment batches, print tables, solve one problem."""

from __future__ import annotations

import math
from pathlib import Path

import click

from hpe.enhance import PAIRING_MODES, run_hpe
from hpe.harness import (
    CaseSpec,
    ChimeraGraph,
    aggregate,
    emit_table,
    parse_graph,
    read_records,
    read_run_meta,
    run_experiment,
)
from hpe.problem import PrecisionSpec, energy, read_problem
from hpe.samplers import SAMPLER_KINDS, SamplerConfig
from hpe.scaling import DEFAULT_DIVISOR, DEFAULT_VERSIONS, SQRT2, make_schedule
from hpe.seeds import MASK64

_SEED_RANGE = click.IntRange(0, MASK64)


def _parse_precision(_ctx, param, value: str) -> PrecisionSpec | None:
    if value.lower() == "dbl":
        return None
    try:
        bits = int(value)
    except ValueError:
        raise click.BadParameter(f"expected a bit count or 'dbl', got {value!r}", param=param)
    try:
        return PrecisionSpec(bits)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param=param)


def _parse_graph(_ctx, param, value: str):
    try:
        return parse_graph(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param=param)


def _parse_step_ratio(_ctx, param, value: str) -> float:
    if value.lower() == "sqrt2":
        return SQRT2
    try:
        ratio = float(value)
    except ValueError:
        raise click.BadParameter(f"expected a number or 'sqrt2', got {value!r}", param=param)
    if not ratio > 0 or not math.isfinite(ratio):
        raise click.BadParameter(f"step ratio must be positive and finite, got {value!r}", param=param)
    return ratio


@click.group()
def main() -> None:
    """Solve high-precision Ising objectives with a low-precision sampler."""


@main.command()
@click.option("--qubits", type=click.IntRange(min=1), default=None, help="Problem size; derived from the topology for chimera graphs.")
@click.option("--graph", default="random:0.1", callback=_parse_graph, show_default=True, help="Topology: random:RHO or chimera:R,C,T.")
@click.option("--bp", required=True, callback=_parse_precision, help="Base problem precision: bit count or 'dbl'.")
@click.option("--hp", required=True, callback=_parse_precision, help="Hardware precision: bit count or 'dbl'.")
@click.option("--cases", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--samples", type=click.IntRange(min=1), default=200, show_default=True, help="Samples per sampler invocation (per version for the enhancement pipeline).")
@click.option("--versions", type=click.IntRange(min=1), default=DEFAULT_VERSIONS, show_default=True)
@click.option("--c0-divisor", type=float, default=DEFAULT_DIVISOR, show_default=True, help="First scale constant is 1/(divisor * max coefficient magnitude).")
@click.option("--step-ratio", default="sqrt2", callback=_parse_step_ratio, show_default=True, help="Per-version scale multiplier (number or 'sqrt2').")
@click.option("--sampler", type=click.Choice(SAMPLER_KINDS), default="anneal", show_default=True)
@click.option("--seed", type=_SEED_RANGE, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True, path_type=Path), required=True, help="Results CSV path; a <out>.meta.json sidecar is written next to it.")
@click.option("--emit-problems", type=click.Path(file_okay=False, path_type=Path), default=None, help="Also write every generated problem as JSON into this directory.")
@click.option("--pairing", type=click.Choice(PAIRING_MODES), default="index", show_default=True)
@click.option("--quiet", is_flag=True, help="Suppress per-case progress on stderr.")
def run(qubits, graph, bp, hp, cases, samples, versions, c0_divisor, step_ratio, sampler, seed, out, emit_problems, pairing, quiet) -> None:
    """Run a batch of generated cases and write per-case energies to CSV."""
    if isinstance(graph, ChimeraGraph):
        derived = graph.num_qubits
        if qubits is not None and qubits != derived:
            raise click.ClickException(
                f"--qubits {qubits} conflicts with the chimera topology ({derived} qubits)"
            )
        qubits = derived
    elif qubits is None:
        qubits = 64
    try:
        spec = CaseSpec(
            num_qubits=qubits,
            graph=graph,
            base_precision=bp,
            hardware_precision=hp,
            cases=cases,
            samples=samples,
            seed=seed,
            versions=versions,
            divisor=c0_divisor,
            step_ratio=step_ratio,
            sampler_kind=sampler,
            pairing=pairing,
        )
    except ValueError as exc:
        raise click.ClickException(str(exc))

    def progress(record) -> None:
        if not quiet:
            click.echo(
                f"case {record.case_index + 1}/{cases}: e_dw={record.e_dw:.6g} "
                f"e_m={record.e_m:.6g} e_h={record.e_h:.6g}",
                err=True,
            )

    try:
        _, row = run_experiment(spec, out, emit_problems_dir=emit_problems, progress=progress)
    except (ValueError, OSError, RuntimeError) as exc:
        raise click.ClickException(str(exc))
    click.echo(emit_table([row]))


@main.command()
@click.argument("results_csv", type=click.Path(exists=True, dir_okay=False, path_type=Path))
def table(results_csv: Path) -> None:
    """Print the markdown comparison table for a results CSV."""
    try:
        records = read_records(results_csv)
        meta = read_run_meta(results_csv)
    except (ValueError, OSError) as exc:
        raise click.ClickException(str(exc))
    meta = meta or {}
    row = aggregate(
        records,
        bp_label=str(meta.get("bp", "?")),
        hp_label=str(meta.get("hp", "?")),
        samples=int(meta.get("samples", 0)),
    )
    click.echo(emit_table([row]))


@main.command()
@click.argument("problem_json", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--hp", required=True, callback=_parse_precision, help="Hardware precision: bit count or 'dbl'.")
@click.option("--samples", type=click.IntRange(min=1), default=200, show_default=True)
@click.option("--seed", type=_SEED_RANGE, default=0, show_default=True)
@click.option("--versions", type=click.IntRange(min=1), default=DEFAULT_VERSIONS, show_default=True)
@click.option("--c0-divisor", type=float, default=DEFAULT_DIVISOR, show_default=True)
@click.option("--step-ratio", default="sqrt2", callback=_parse_step_ratio, show_default=True)
@click.option("--sampler", type=click.Choice(SAMPLER_KINDS), default="anneal", show_default=True)
@click.option("--pairing", type=click.Choice(PAIRING_MODES), default="index", show_default=True)
def solve(problem_json: Path, hp, samples, seed, versions, c0_divisor, step_ratio, sampler, pairing) -> None:
    """Run the enhancement pipeline on one stored problem and print its answer."""
    try:
        problem = read_problem(problem_json)
        schedule = make_schedule(problem, versions, c0_divisor, step_ratio)
        config = SamplerConfig(kind=sampler, seed=seed, num_samples=samples)
        result = run_hpe(problem, schedule, hp, config, pairing=pairing)
        value = energy(problem, result.final)
    except (ValueError, OSError, RuntimeError) as exc:
        raise click.ClickException(str(exc))
    click.echo("spins: " + " ".join(str(v) for v in result.final.spins))
    click.echo(f"energy: {value:.17g}")


if __name__ == "__main__":
    main()
