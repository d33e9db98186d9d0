"""Command line surface: ``qgame solve | oracle | landscape``.

Exit codes: 0 success, 2 input error, 3 angles underdetermined, 4 I/O failure.
Reports go to stdout as JSON, diagnostics to stderr.
"""
import sys
import traceback
from typing import Optional

import click
from loguru import logger

from app.config import get_settings
from app.exceptions import ServiceError
from app.services.analysis_service import AnalysisService


def _service() -> AnalysisService:
    settings = get_settings()
    logger.remove()
    # look sys.stderr up per message so redirected streams are honoured
    logger.add(lambda message: sys.stderr.write(message), level=settings.log_level)
    return AnalysisService(settings)


def _fail(ctx: click.Context, e: ServiceError):
    logger.error(f"{type(e).__name__}: {str(e)}\nTraceback: {''.join(traceback.format_tb(e.__traceback__))}")
    click.echo(f"error: {e}", err=True)
    ctx.exit(e.exit_code)


@click.group()
def qgame() -> None:
    """Nash equilibria of the two-player quantum pay-operator game."""


@qgame.command()
@click.argument('path', type=click.Path(dir_okay=False))
@click.pass_context
def solve(ctx: click.Context, path: str) -> None:
    """Classify the game in PATH analytically and print the report."""
    service = _service()
    try:
        spec = service.load_spec(path)
        report = service.analyze(spec)
    except ServiceError as e:
        _fail(ctx, e)
        return
    click.echo(report.model_dump_json(indent=2))


@qgame.command()
@click.argument('path', type=click.Path(dir_okay=False))
@click.option('--resolution', type=click.IntRange(min=8), default=None, help="Grid points per circle.")
@click.option('--epsilon', type=click.FloatRange(min=0.0), default=None, help="Deviation tolerance (payoff units).")
@click.pass_context
def oracle(ctx: click.Context, path: str, resolution: Optional[int], epsilon: Optional[float]) -> None:
    """Run the analytic pipeline and the brute-force grid oracle on PATH."""
    service = _service()
    try:
        spec = service.load_spec(path)
        report = service.analyze_with_oracle(spec, resolution=resolution, epsilon=epsilon)
    except ServiceError as e:
        _fail(ctx, e)
        return
    click.echo(report.model_dump_json(indent=2))


@qgame.command()
@click.argument('path', type=click.Path(dir_okay=False))
@click.option('--resolution', type=click.IntRange(min=8), default=None, help="Grid points per circle.")
@click.option('--out', type=click.Path(dir_okay=False), default=None, help="Output CSV file (stdout if omitted).")
@click.pass_context
def landscape(ctx: click.Context, path: str, resolution: Optional[int], out: Optional[str]) -> None:
    """Dump g and <H> over the angle grid as CSV rows phi_x,phi_y,g,H."""
    service = _service()
    try:
        spec = service.load_spec(path)
        rows = service.landscape_rows(spec, resolution=resolution)
        if out is None:
            click.echo(service.render_landscape(rows), nl=False)
        else:
            service.write_landscape(rows, out)
            logger.info(f"Wrote {len(rows)} rows to {out}")
    except ServiceError as e:
        _fail(ctx, e)


if __name__ == "__main__":  # pragma: no cover
    qgame()
