import logging
from pathlib import Path

import click

from app.api.deps import complex_columns, grid_options, handle_errors, sample
from app.schemas.config import EvalConfig
from app.schemas.ladder import LadderFamily, LadderState
from app.schemas.oscillator import Combo, OscillatorKind, SolutionSpec
from app.services.ladder import LadderWave
from app.services.oscillator import solution_wave
from app.services.storage import storage_service

logger = logging.getLogger(__name__)


@click.command("eval")
@click.option("--kind", type=click.Choice([k.value for k in OscillatorKind]), default="inverted", show_default=True)
@click.option("--combo", type=click.Choice([c.value for c in Combo]), default="left", show_default=True)
@click.option("--energy", type=float, default=0.0, show_default=True)
@click.option("--C", "C", type=float, default=1.0, show_default=True, help="Even coefficient of a general combination")
@click.option("--D", "D", type=float, default=0.0, show_default=True, help="Odd coefficient of a general combination")
@click.option("--family", type=click.Choice([f.value for f in LadderFamily]), default=None,
              help="Emit a ladder state instead; needs --n")
@click.option("--n", type=int, default=None)
@grid_options
@handle_errors
def cmd_eval(kind, combo, energy, C, D, family, n, xmin, xmax, samples, output, fmt):
    """Sample a solution of the oscillator SSE on a grid"""
    config = EvalConfig(
        kind=kind, combo=combo, energy=energy, C=C, D=D, family=family, n=n,
        xmin=xmin, xmax=xmax, samples=samples, output=output, format=fmt,
    )
    if config.family is not None:
        wave = LadderWave(LadderState(family=config.family, n=config.n))
    else:
        spec = SolutionSpec(kind=config.kind, energy=config.energy, combo=config.combo, C=config.C, D=config.D)
        wave = solution_wave(spec)
    logger.info("evaluating %r on %d samples", wave, config.samples)

    if config.real_valued:
        header = ["x", "value"]
        rows = sample(lambda x: [wave.value(x).real], config.grid())
    else:
        header = ["x", "re", "im"]
        rows = sample(lambda x: complex_columns(complex(wave.value(x))), config.grid())

    storage_service.write_table(
        header, rows, storage_service.metadata("eval", config),
        output=Path(output) if output else None, fmt=config.format,
    )
