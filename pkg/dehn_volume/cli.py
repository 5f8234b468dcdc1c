"""
CLI interface for dehn-volume.

Commands:
    volume: Complex volume of a Dehn filling
    check: Residual table of every consistency check
    apoly: Exact eliminant in (M, L) of a two-tetrahedron census manifold
    table: Psi over a list of fillings
    history: Stored runs

Exit codes: 0 success, 1 numerical failure or failed check, 2 configuration error.
"""

from __future__ import annotations

import contextlib
import json
import logging
import sys
from typing import Any, Callable, Iterator, Optional

import click

from dehn_volume import __version__
from dehn_volume.errors import ConfigError, DehnVolumeError

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2

_LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _emit_error(exc: BaseException, json_output: bool) -> None:
    if json_output:
        payload = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        click.echo(json.dumps(payload), err=True)
    else:
        click.echo(f"Error: {exc}", err=True)


@contextlib.contextmanager
def _handle_errors(json_output: bool) -> Iterator[None]:
    try:
        yield
    except (ConfigError, FileNotFoundError) as exc:
        _emit_error(exc, json_output)
        sys.exit(EXIT_CONFIG)
    except DehnVolumeError as exc:
        _emit_error(exc, json_output)
        sys.exit(EXIT_FAILURE)


def _echo_json(payload: Any) -> None:
    click.echo(json.dumps(payload, indent=2))


def _run_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """Options shared by the commands that run the volume pipeline."""
    options = [
        click.option("--config", "config_path", default=None, help="Run config JSON file."),
        click.option("--census", default=None, help="Bundled triangulation (e.g. fig8)."),
        click.option("--triangulation", default=None, help="Triangulation JSON file."),
        click.option("--holonomy", default=None, help="Explicit 'M,L' per cusp, ';' separated."),
        click.option("--uv", default=None, help="(u, v) override 'u,v' per cusp, ';' separated."),
        click.option("--reference-uv", is_flag=True, help="Use the census reference (u, v)."),
        click.option("--link-exterior", is_flag=True, help="CS modulo pi^2 instead of pi^2/2."),
        click.option("--starts", type=int, default=None, help="Random starts per sweep."),
        click.option("--seed", type=int, default=None, help="Random seed."),
        click.option("--k-range", default=None, help="Winding sweep 'low:high' (default -8:8)."),
        click.option("--precision", type=int, default=None, help="Decimals in text output."),
        click.option("--json", "json_output", is_flag=True, help="Emit JSON."),
        click.option("--save", is_flag=True, help="Store the run in the results database."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _build_config(ctx: click.Context, config_path: Optional[str], **flags: Any) -> Any:
    """RunConfig from the optional file, overridden by the flags that were given."""
    from dehn_volume.config import (
        RunConfig,
        load_run_config,
        parse_holonomy,
        parse_k_range,
        parse_uv,
    )

    config = load_run_config(config_path) if config_path else RunConfig()
    if flags.get("triangulation"):
        config.triangulation = flags["triangulation"]
    if flags.get("census"):
        config.census = flags["census"]
        config.triangulation = None
    if flags.get("fill"):
        config.filling = flags["fill"]
    if flags.get("holonomy"):
        config.holonomy = parse_holonomy(flags["holonomy"])
    if flags.get("uv"):
        config.uv = parse_uv(flags["uv"])
    if flags.get("k_range"):
        config.k_range = parse_k_range(flags["k_range"])
    for name in ("starts", "seed", "precision", "debug_perturb_a"):
        if flags.get(name) is not None:
            setattr(config, name, flags[name])
    for name in ("reference_uv", "link_exterior", "json_output", "save"):
        if flags.get(name):
            setattr(config, name, True)
    config.db_url = ctx.obj["db_url"]
    config.validate()
    return config


def _save(config: Any, results: list[Any]) -> None:
    from dehn_volume.store.store import ResultsDB

    db = ResultsDB(config.db_url)
    try:
        for result in results:
            db.record_run(result)
    finally:
        db.close()


# ---------------------------------------------------------------------------
# CLI group
# ---------------------------------------------------------------------------


@click.group()
@click.version_option(version=__version__, prog_name="dehn-volume")
@click.option("--db-url", default="sqlite:///dehn_volume.db", help="Results database URL.")
@click.option("--verbose", "-v", count=True, help="-v for progress, -vv for solver detail.")
@click.pass_context
def cli(ctx: click.Context, db_url: str, verbose: int) -> None:
    """Complex volumes of Dehn fillings from deformed Ptolemy coordinates."""
    ctx.ensure_object(dict)
    ctx.obj["db_url"] = db_url
    logging.basicConfig(
        level=_LOG_LEVELS[min(verbose, len(_LOG_LEVELS) - 1)],
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


# ---------------------------------------------------------------------------
# volume
# ---------------------------------------------------------------------------


@cli.command()
@click.option("--fill", default=None, help="Filling 'r/s' or 'inf' per cusp, ',' separated.")
@click.option("--debug-perturb-a", type=float, default=None, hidden=True)
@_run_options
@click.pass_context
def volume(ctx: click.Context, config_path: Optional[str], **flags: Any) -> None:
    """Compute the complex volume of a filling."""
    from dehn_volume.pipeline import run_volume
    from dehn_volume.report import render_volume

    json_output = bool(flags.get("json_output"))
    with _handle_errors(json_output):
        config = _build_config(ctx, config_path, **flags)
        result = run_volume(config)
        if config.save:
            _save(config, [result])
        if config.json_output:
            _echo_json(result.to_dict())
        else:
            click.echo(render_volume(result, config.precision), nl=False)
    sys.exit(EXIT_OK if result.passed else EXIT_FAILURE)


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------


@cli.command()
@click.option("--fill", default=None, help="Filling 'r/s' or 'inf' per cusp, ',' separated.")
@click.option(
    "--debug-perturb-a",
    type=float,
    default=None,
    help="Add this multiple of pi*i to one log-cocycle value (the edge check must fail).",
)
@_run_options
@click.pass_context
def check(ctx: click.Context, config_path: Optional[str], **flags: Any) -> None:
    """Run every consistency check and print the residuals."""
    from dehn_volume.pipeline import run_volume
    from dehn_volume.report import render_checks

    json_output = bool(flags.get("json_output"))
    with _handle_errors(json_output):
        config = _build_config(ctx, config_path, **flags)
        result = run_volume(config)
        if config.save:
            _save(config, [result])
        if config.json_output:
            _echo_json(
                {
                    "checks": {c.name: c.to_dict() for c in result.checks},
                    "passed": result.passed,
                }
            )
        else:
            click.echo(render_checks(result.checks, config.precision), nl=False)
    sys.exit(EXIT_OK if result.passed else EXIT_FAILURE)


# ---------------------------------------------------------------------------
# apoly
# ---------------------------------------------------------------------------


@cli.command()
@click.option("--census", default="fig8", help="Bundled triangulation.")
@click.option("--triangulation", default=None, help="Triangulation JSON file.")
@click.option("--at-meridian", type=int, default=None, help="Also factor the eliminant at M = n.")
@click.option("--json", "json_output", is_flag=True, help="Emit JSON.")
def apoly(
    census: str, triangulation: Optional[str], at_meridian: Optional[int], json_output: bool
) -> None:
    """Print the exact eliminant in (M, L)."""
    from dehn_volume.config import RunConfig
    from dehn_volume.peripheral.apoly import a_polynomial, factor_at_meridian, format_polynomial
    from dehn_volume.pipeline import load_triangulation

    with _handle_errors(json_output):
        complex_ = load_triangulation(RunConfig(census=census, triangulation=triangulation))
        expr = a_polynomial(complex_)
        text = format_polynomial(expr)
        factored = factor_at_meridian(expr, at_meridian) if at_meridian is not None else None
    if json_output:
        payload: dict[str, Any] = {"manifold": complex_.name, "polynomial": text}
        if factored is not None:
            payload["at_meridian"] = {"M": at_meridian, "factored": factored}
        _echo_json(payload)
    else:
        click.echo(text)
        if factored is not None:
            click.echo(f"M = {at_meridian}: {factored}")


# ---------------------------------------------------------------------------
# table
# ---------------------------------------------------------------------------


@cli.command()
@click.option(
    "--fill", "fills", multiple=True, help="Filling per row (repeatable, default 1/5 .. 4/5)."
)
@_run_options
@click.pass_context
def table(
    ctx: click.Context, config_path: Optional[str], fills: tuple[str, ...], **flags: Any
) -> None:
    """Psi for a list of fillings."""
    from dehn_volume.pipeline import TABLE_FILLINGS, run_table
    from dehn_volume.report import render_table

    json_output = bool(flags.get("json_output"))
    with _handle_errors(json_output):
        config = _build_config(ctx, config_path, **flags)
        results = run_table(config, fills or TABLE_FILLINGS)
        if config.save:
            _save(config, results)
        if config.json_output:
            _echo_json([r.to_dict() for r in results])
        else:
            click.echo(render_table(results, config.precision), nl=False)
    sys.exit(EXIT_OK if all(r.passed for r in results) else EXIT_FAILURE)


# ---------------------------------------------------------------------------
# history
# ---------------------------------------------------------------------------


@cli.command()
@click.option("--manifold", default=None, help="Only runs on this manifold.")
@click.option("--limit", type=int, default=50, help="Number of runs to show.")
@click.option("--delete", "delete_id", type=int, default=None, help="Delete a stored run.")
@click.option("--precision", type=int, default=9, help="Decimals in text output.")
@click.option("--json", "json_output", is_flag=True, help="Emit JSON.")
@click.pass_context
def history(
    ctx: click.Context,
    manifold: Optional[str],
    limit: int,
    delete_id: Optional[int],
    precision: int,
    json_output: bool,
) -> None:
    """List or delete stored runs."""
    from dehn_volume.report import render_history
    from dehn_volume.store.store import ResultsDB

    db = ResultsDB(ctx.obj["db_url"])
    try:
        if delete_id is not None:
            if not db.delete_run(delete_id):
                _emit_error(ConfigError(f"No stored run with id {delete_id}"), json_output)
                sys.exit(EXIT_CONFIG)
            click.echo(f"Deleted run {delete_id}")
            return
        runs = db.list_runs(manifold=manifold, limit=limit)
        if json_output:
            _echo_json([run.to_dict() for run in runs])
        else:
            click.echo(render_history(runs, precision), nl=False)
    finally:
        db.close()


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
