"""Command line entry points: crowd simulation, log audit, and the service.

``simulate`` writes the metrics (canonical form) and the full event log to
an output directory and exits nonzero iff any invariant was violated;
``replay`` re-folds a log and reports violations; ``dump-events`` prints a
project's persisted log.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import events as ev
from .canonical import canonicalize
from .errors import CrowdFlowError, StateError
from .replay import replay_log_file
from .simulator import SimulationConfig, run_simulation


@click.group()
def main() -> None:
    """Microtask workflow service, simulator, and audit tools."""


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Simulation config file (JSON).")
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False),
              help="Directory for metrics and the event log.")
def simulate(config_path: str, out_dir: str) -> None:
    """Run a seeded crowd simulation and write metrics + event log."""
    config = SimulationConfig.from_dict(
        json.loads(Path(config_path).read_text(encoding="utf-8"))
    )
    result = run_simulation(config)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "metrics.json").write_text(
        canonicalize(result.metrics.to_dict()) + "\n", encoding="utf-8"
    )
    ev.write_log(out / "events.ndjson", result.events)
    metrics = result.metrics
    click.echo(f"events: {len(result.events)}")
    click.echo(f"completed: {canonicalize(metrics.completed_by_kind)}")
    click.echo(f"skipped: {canonicalize(metrics.skipped_by_kind)}")
    click.echo(f"invariant violations: {len(metrics.invariant_violations)}")
    if metrics.invariant_violations:
        for violation in metrics.invariant_violations:
            click.echo(f"  {violation}", err=True)
        sys.exit(1)


@main.command()
@click.option("--log", "log_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Event log file (newline-delimited canonical records).")
def replay(log_path: str) -> None:
    """Re-fold an event log and check every invariant at every prefix."""
    try:
        report = replay_log_file(log_path)
    except StateError as exc:
        click.echo(f"corrupt log: {exc}", err=True)
        sys.exit(2)
    click.echo(f"events checked: {report.events_checked}")
    click.echo(f"review microtasks generated: {report.reviews_generated}")
    click.echo(f"reviewable submissions: {report.reviewable_submissions}")
    if report.state is not None and report.state.project_id:
        click.echo(f"project: {report.state.project_id}")
    if report.violations:
        click.echo(f"violations ({len(report.violations)}):", err=True)
        for violation in report.violations:
            click.echo(f"  {violation}", err=True)
        sys.exit(1)
    click.echo("violations: none")


@main.command(name="dump-events")
@click.option("--project", "project_id", required=True, help="Project id.")
@click.option("--data-dir", default="./data", type=click.Path(file_okay=False),
              help="Service data directory (default ./data).")
def dump_events(project_id: str, data_dir: str) -> None:
    """Print a project's event log, one canonical record per line."""
    log_path = Path(data_dir) / project_id / "events.ndjson"
    if not log_path.exists():
        click.echo(f"no event log for project {project_id} under {data_dir}", err=True)
        sys.exit(2)
    for event in ev.read_log(log_path):
        click.echo(event.to_record())


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8080, show_default=True, type=int)
@click.option("--data-dir", default="./data", type=click.Path(file_okay=False),
              show_default=True)
@click.option("--tokens", "token_file", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Static token file; omit for dev-mode tokens"
                   " (worker:<id> / client:<id>).")
@click.option("--harness", "harness_command", default=None,
              help="Executor harness command; omit for the in-process mock.")
def serve(host: str, port: int, data_dir: str, token_file: str | None,
          harness_command: str | None) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .sandbox import SubprocessExecutor
    from .service import Authenticator, ProjectRegistry, create_app

    executor = None
    if harness_command:
        executor = SubprocessExecutor(harness_command.split())
    registry = ProjectRegistry(data_dir=data_dir, executor=executor)
    authenticator = (
        Authenticator.from_token_file(token_file, dev_mode=False)
        if token_file
        else Authenticator()
    )
    app = create_app(registry, authenticator)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    try:
        main()
    except CrowdFlowError as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
