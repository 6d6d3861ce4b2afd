"""Command-line front door: stats reports, sweeps, preset listing, serving.

Exit codes: 0 success (including sweeps with per-row errors), 1 runtime
failure, 2 configuration or validation failure. All randomness flows
from the single ``--seed`` flag; identical invocations produce identical
output bytes.
"""

from __future__ import annotations

import json
import logging
import os
import socket
import sys
import tempfile

import click

from . import __version__
from .distributions import PowerLawParams, closed_form_stats
from .errors import FundsimError
from .experiments import (
    plan_from_dict,
    plan_to_dict,
    preset,
    preset_descriptions,
    run_sweep,
)

logger = logging.getLogger(__name__)


def _setup_logging() -> None:
    level = os.environ.get("FUNDSIM_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Monte Carlo simulator for early-stage venture fund returns."""
    _setup_logging()


@main.command("stats")
@click.option("--alpha", type=float, required=True, help="Power-law tail exponent.")
@click.option("--xmin", type=float, required=True, help="Minimum return multiple.")
@click.option("--k", type=int, default=1, show_default=True, help="Moment order.")
def cmd_stats(alpha: float, xmin: float, k: int) -> None:
    """Print closed-form statistics of the raw power law as JSON."""
    try:
        stats = closed_form_stats(PowerLawParams(alpha, xmin), k)
    except FundsimError as exc:
        raise click.UsageError(str(exc))
    click.echo(json.dumps(stats.to_dict(), indent=2))


@main.command("simulate")
@click.option("--config", "config_path", type=click.Path(), help="JSON plan file.")
@click.option("--preset", "preset_name", type=str, help="Start from a named preset.")
@click.option("--seed", type=int, default=None, help="Master seed (64-bit unsigned).")
@click.option("--out", "out_path", type=click.Path(), required=True, help="Output file.")
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["csv", "json"]),
    default="csv",
    show_default=True,
)
@click.option("--threads", type=int, default=None, help="Worker threads (default: all cores).")
@click.option("--alpha", type=float, default=None, help="Override world tail exponent.")
@click.option("--xmin", type=float, default=None, help="Override minimum return.")
@click.option("--bound", type=str, default=None, help="Single return cap, or 'inf'.")
@click.option("--n-funds", type=int, default=None, help="Funds per cohort.")
@click.option("--n-replicates", type=int, default=None, help="Replicate pools.")
@click.option("--pool-size", type=int, default=None, help="Deals per pool.")
def cmd_simulate(
    config_path,
    preset_name,
    seed,
    out_path,
    fmt,
    threads,
    alpha,
    xmin,
    bound,
    n_funds,
    n_replicates,
    pool_size,
) -> None:
    """Run a sweep and write the metrics table to disk atomically.

    The plan is assembled from the preset (if given), then the config
    file, then individual flags; later sources override earlier ones.
    """
    if config_path is None and preset_name is None:
        raise click.UsageError("provide --config and/or --preset")
    try:
        plan_dict = {}
        if preset_name is not None:
            plan_dict = plan_to_dict(preset(preset_name))
        if config_path is not None:
            try:
                with open(config_path, "r", encoding="utf-8") as fh:
                    file_dict = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise click.UsageError(f"cannot read config {config_path}: {exc}")
            if not isinstance(file_dict, dict):
                raise click.UsageError("config file must hold a JSON object")
            plan_dict.update(file_dict)
        for key, value in {
            "master_seed": seed,
            "world_alpha": alpha,
            "x_min": xmin,
            "n_funds": n_funds,
            "n_replicates": n_replicates,
            "pool_size": pool_size,
        }.items():
            if value is not None:
                plan_dict[key] = value
        if bound is not None:
            plan_dict["bounds"] = [_parse_bound(bound)]
        if threads is not None and threads < 1:
            raise click.UsageError(f"--threads must be >= 1 (got {threads})")
        plan = plan_from_dict(plan_dict)
    except FundsimError as exc:
        raise click.UsageError(str(exc))

    result = run_sweep(plan, max_workers=threads)
    payload = result.to_csv() if fmt == "csv" else result.to_json()
    _write_atomic(out_path, payload)
    errors = [row for row in result.rows if row.error is not None]
    for row in errors:
        click.echo(f"warning: cell {row.cell} failed: {row.error}", err=True)
    click.echo(
        f"wrote {len(result.rows)} grid cells ({len(errors)} failed) to {out_path}",
        err=True,
    )


@main.command("presets")
def cmd_preset_list() -> None:
    """List available presets with one-line descriptions."""
    for name, description in preset_descriptions().items():
        click.echo(f"{name}: {description}")


@main.command("serve")
@click.option(
    "--bind",
    default=None,
    help="host:port to listen on [default: env FUNDSIM_BIND or 127.0.0.1:8000].",
)
@click.option("--max-cells", type=int, default=None, help="Per-request grid cell budget.")
@click.option("--max-concurrent", type=int, default=None, help="Concurrent sweep budget.")
def cmd_serve(bind, max_cells, max_concurrent) -> None:
    """Run the HTTP simulation service until interrupted."""
    import uvicorn

    from .service import create_app

    bind = bind or os.environ.get("FUNDSIM_BIND", "127.0.0.1:8000")
    host, _, port_text = bind.rpartition(":")
    if not host or not port_text.isdigit():
        raise click.UsageError(f"--bind must look like host:port (got {bind!r})")
    port = int(port_text)
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        click.echo(f"error: cannot bind {bind}: {exc}", err=True)
        sys.exit(1)
    finally:
        probe.close()
    app = create_app(max_cells=max_cells, max_concurrent=max_concurrent)
    click.echo(f"fundsim {__version__} serving on http://{bind}", err=True)
    log_level = os.environ.get("FUNDSIM_LOG", "warning").lower()
    if log_level not in {"critical", "error", "warning", "info", "debug", "trace"}:
        log_level = "warning"
    uvicorn.run(app, host=host, port=port, log_level=log_level)


def _parse_bound(text: str) -> float | None:
    lowered = text.strip().lower()
    if lowered in {"inf", "none", "unbounded"}:
        return None
    try:
        return float(text)
    except ValueError:
        raise click.UsageError(f"--bound must be a number or 'inf' (got {text!r})")


def _write_atomic(path: str, payload: str) -> None:
    """Write via a temp file and rename, so readers never see partial output."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".fundsim-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


if __name__ == "__main__":
    main()
