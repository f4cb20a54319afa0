"""The ``gatework`` command line.

Subcommands: serve (HTTP API + console), simulate (regime simulator),
stats (shares / ztest / summary / frontier), validate-dataset, and replay.
The store root comes from --root or the GATEWORK_ROOT environment
variable.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from gatework import __version__
from gatework.core.log import replay as replay_log
from gatework.data import BENCHMARK_MANIFEST, CALIBRATION_FILE, data_path
from gatework.errors import DistributionMismatch, ManifestInvalid
from gatework.quality import GRADE_ORDER
from gatework.core.types import sha256_hex
from gatework.stats import (
    load_benchmark,
    frontier_points,
    quality_shares,
    read_results_file,
    summarize_time_price,
    two_prop_z_one_sided,
)

ROOT_OPTION = click.option(
    "--root",
    default="./gatework-store",
    show_default=True,
    help="Store root directory; the GATEWORK_ROOT environment variable overrides it.",
)


def resolve_root(cli_value: str) -> str:
    import os

    return os.environ.get("GATEWORK_ROOT") or cli_value


@click.group()
@click.version_option(version=__version__, prog_name="gatework")
def main():
    """Hybrid task orchestration engine: service, simulator, and statistics."""


@main.command()
@ROOT_OPTION
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8800, show_default=True, type=int)
@click.option("--fixtures", default=None, help="Scripted worker fixture directory.")
@click.option("--console-dir", default=None, help="Static console assets to serve under /console.")
def serve(root, host, port, fixtures, console_dir):
    """Run the HTTP service over a file-backed store."""
    import uvicorn

    root = resolve_root(root)

    from gatework.service.api import create_app
    from gatework.service.store import TaskStore

    store = TaskStore(root, fixtures_dir=fixtures)
    app = create_app(store, console_dir=console_dir)
    click.echo(f"gatework service on http://{host}:{port} (root: {root})")
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command()
@ROOT_OPTION
@click.option("--config", "config_path", default=None, help="Simulation config JSON (default: shipped calibration).")
@click.option("--seed", default=None, type=int, help="Override the config seed.")
@click.option("--n-tasks", default=None, type=int, help="Override the task count.")
@click.option("--regime", default=None, type=click.Choice(["hybrid", "ai_only", "human_only"]))
@click.option("--out", default=None, help="Records output path (default: runs/<run-id>/records.jsonl).")
@click.option("--parallel", default=1, show_default=True, type=int)
def simulate(root, config_path, seed, n_tasks, regime, out, parallel):
    """Run the deterministic regime simulator and write records + manifest."""
    from gatework.sim import load_sim_config, run_simulation, write_records_file

    root = resolve_root(root)

    config_file = Path(config_path) if config_path else data_path(CALIBRATION_FILE)
    config = load_sim_config(config_file).with_overrides(regime=regime, n_tasks=n_tasks, seed=seed)
    records = run_simulation(config, parallel=parallel)

    config_hash = sha256_hex(config_file.read_bytes())
    run_id = f"{config.regime.value}-{config.seed}-{config.n_tasks}"
    run_dir = Path(root) / "runs" / run_id
    run_dir.mkdir(parents=True, exist_ok=True)
    records_path = Path(out) if out else run_dir / "records.jsonl"
    write_records_file(records_path, records)
    manifest = {
        "run_id": run_id,
        "regime": config.regime.value,
        "seed": config.seed,
        "n_tasks": config.n_tasks,
        "config_file": str(config_file),
        "config_sha256": config_hash,
        "code_version": __version__,
        "records": str(records_path),
        "note": "synthetic run; aggregates describe the fitted model, not real-world measurements",
    }
    (run_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")

    good = sum(r.quality.value == "Good" for r in records) / len(records)
    declined = sum(r.quality.value == "Decline" for r in records) / len(records)
    click.echo(f"wrote {len(records)} records to {records_path}")
    click.echo(f"manifest: {run_dir / 'manifest.json'}")
    click.echo(f"[model-internal] Good {100 * good:.1f}% | Decline {100 * declined:.1f}%")


@main.group()
def stats():
    """Evaluation statistics over results files."""


def _read_results(path):
    from gatework.stats import read_results_file

    try:
        return read_results_file(path)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc


@stats.command()
@click.option("--results", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--system", required=True)
@click.option("--criterion", default="Overall", show_default=True)
@click.option("--as-json", "as_json", is_flag=True, help="Machine-readable output.")
def shares(results, system, criterion, as_json):
    """Good/Mediocre/Bad/Decline shares with binomial standard errors."""
    records = _read_results(results)
    estimates = quality_shares(records, system, criterion)
    if as_json:
        click.echo(
            json.dumps(
                {g.value: {"pct": e.pct, "pct_se": e.pct_se, "n": e.n} for g, e in estimates.items()},
                sort_keys=True,
            )
        )
        return
    click.echo(f"{system} / {criterion} (n={estimates[GRADE_ORDER[0]].n})")
    for grade in GRADE_ORDER:
        e = estimates[grade]
        click.echo(f"  {grade.value:<9} {e.pct:5.1f} +- {e.pct_se:.1f}")


@stats.command()
@click.argument("x1", type=int)
@click.argument("n1", type=int)
@click.argument("x2", type=int)
@click.argument("n2", type=int)
@click.option("--as-json", "as_json", is_flag=True)
def ztest(x1, n1, x2, n2, as_json):
    """One-sided two-proportion z-test (H1: p1 > p2), pooled variance."""
    result = two_prop_z_one_sided(x1, n1, x2, n2)
    if as_json:
        click.echo(json.dumps({"z": result.z, "p_one_sided": result.p_one_sided}))
    else:
        click.echo(f"z = {result.z:.4f}   one-sided p = {result.p_one_sided:.6f}")


@stats.command()
@click.option("--results", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--system", required=True)
@click.option("--replicates", default=10_000, show_default=True, type=int)
@click.option("--as-json", "as_json", is_flag=True)
def summary(results, system, replicates, as_json):
    """Price and time summaries: avg with sample SD, median with bootstrap SE."""
    records = _read_results(results)
    row = summarize_time_price(records, system, n_replicates=replicates)
    if as_json:
        click.echo(json.dumps(row.to_dict(), sort_keys=True))
        return
    click.echo(f"{system}  (avg +- sample sd | median +- bootstrap se)")
    for name, metric in (("price", row.price), ("connect", row.connect), ("exec", row.exec), ("total", row.total)):
        if metric is None:
            click.echo(f"  {name:<8} -")
            continue
        unit = "USD" if name == "price" else "h"
        click.echo(
            f"  {name:<8} {metric.avg:7.1f} +- {metric.avg_sd:5.1f} {unit:<4}| "
            f"{metric.median:7.2f} +- {metric.median_boot_se:.2f} {unit}"
        )


@stats.command()
@click.option("--results", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--replicates", default=1000, show_default=True, type=int)
@click.option("--as-json", "as_json", is_flag=True)
def frontier(results, replicates, as_json):
    """Quality-vs-time frontier: (median total hours, % Good) per system."""
    records = _read_results(results)
    systems = sorted({r.system_id for r in records})
    summaries = {s: summarize_time_price(records, s, n_replicates=replicates) for s in systems}
    share_maps = {s: quality_shares(records, s, "Overall") for s in systems}
    points = frontier_points(summaries, share_maps)
    if as_json:
        click.echo(
            json.dumps(
                [{"system": p.system_id, "median_total_h": p.median_total_h, "pct_good": p.pct_good} for p in points]
            )
        )
        return
    for p in points:
        click.echo(f"  ({p.median_total_h:6.2f} h, {p.pct_good:4.1f} % Good)  {p.system_id}")


@main.command(name="validate-dataset")
@click.option(
    "--manifest",
    default=None,
    type=click.Path(dir_okay=False),
    help="Manifest to validate (default: the released benchmark).",
)
def validate_dataset(manifest):
    """Check a dataset manifest against the released distribution; nonzero exit on mismatch."""
    path = Path(manifest) if manifest else data_path(*BENCHMARK_MANIFEST)
    try:
        dataset = load_benchmark(path, strict=True)
    except DistributionMismatch as exc:
        click.echo("distribution mismatch:")
        for line in exc.mismatches:
            click.echo(f"  {line}")
        sys.exit(1)
    except ManifestInvalid as exc:
        click.echo(f"invalid manifest: {exc}")
        sys.exit(2)
    click.echo(dataset.validation_report())


@main.command()
@ROOT_OPTION
@click.argument("task_id")
def replay(root, task_id):
    """Rebuild a task's state from its persisted event log and print it."""
    root = resolve_root(root)
    events_file = Path(root) / "tasks" / f"{task_id}.events"
    if not events_file.is_file():
        click.echo(f"no event log for task {task_id!r} under {root}", err=True)
        sys.exit(1)
    from gatework.core.log import read_events_file

    log = read_events_file(events_file)
    state = replay_log(log)
    click.echo(f"task {task_id}: {len(log)} events -> phase {state.phase.value} (version {state.version})")
    for event in log:
        click.echo(f"  [{event.seq:04d}] t={event.wall_time:>10}ms {event.actor.value:<9} {event.kind.value}")


if __name__ == "__main__":
    main()
