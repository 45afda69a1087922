"""Shared plumbing of the CLI commands: grid options, error translation, parallel sampling"""
import functools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import click
from pydantic import ValidationError

from app.core.config import settings
from app.core.errors import NumericalError, RangeOverflow, SingularPotential
from app.schemas.config import OutputFormat

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2


def grid_options(fn):
    """--xmin/--xmax/--samples/--output/--format"""
    options = [
        click.option("--xmin", type=float, default=-10.0, show_default=True),
        click.option("--xmax", type=float, default=10.0, show_default=True),
        click.option("--samples", type=int, default=401, show_default=True),
        click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
                     help="File to write; stdout when omitted"),
        click.option("--format", "fmt", type=click.Choice([f.value for f in OutputFormat]),
                     default=OutputFormat.CSV.value, show_default=True),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def eps_options(fn):
    fn = click.option("--eps-im", type=float, required=True, help="Im of the factorization energy")(fn)
    fn = click.option("--eps-re", type=float, required=True, help="Re of the factorization energy")(fn)
    return fn


def handle_errors(fn):
    """
    Translate failures into the exit-code contract:
    2 bad configuration, 3 numerical failure, 4 singular partner, 5 excluded eps
    """
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ValidationError as e:
            click.echo(f"configuration error: {e}", err=True)
            raise SystemExit(EXIT_CONFIG)
        except SingularPotential as e:
            click.echo(str(e), err=True)
            click.echo(e.report.model_dump_json(indent=2), err=True)
            raise SystemExit(e.exit_code)
        except NumericalError as e:
            logger.debug("numerical failure", exc_info=True)
            click.echo(f"{type(e).__name__}: {e}", err=True)
            raise SystemExit(e.exit_code)
        except OverflowError as e:
            logger.debug("float overflow", exc_info=True)
            click.echo(f"RangeOverflow: {e}", err=True)
            raise SystemExit(RangeOverflow.exit_code)
    return wrapper


def sample(fn: Callable[[float], Sequence[float]], xs) -> list[list[float]]:
    """Rows [x, *fn(x)] in grid order; fans out over settings.workers threads"""
    def row(x):
        values = [float(v) for v in fn(float(x))]
        if not all(math.isfinite(v) for v in values):
            raise RangeOverflow(f"non-finite sample at x={float(x):.6g}")
        return [float(x), *values]

    if settings.workers <= 1 or len(xs) < 2:
        return [row(x) for x in xs]
    with ThreadPoolExecutor(max_workers=settings.workers) as pool:
        return list(pool.map(row, xs))


def complex_columns(value: complex) -> tuple[float, float]:
    return value.real, value.imag
