import logging
from pathlib import Path

import click

from app.api.deps import eps_options, grid_options, handle_errors, sample
from app.core.errors import ExcludedEpsilon, SingularPotential
from app.schemas.config import PartnerConfig
from app.services.susy import ComplexPartner, complex_transform, partner_scan, validate_epsilon
from app.services.storage import storage_service

logger = logging.getLogger(__name__)


def checked_partner(eps: complex, interval: tuple[float, float], scan_samples: int) -> ComplexPartner:
    """
    Complex-case partner for eps, refused unless its w is free of zeros on interval

    :raises ExcludedEpsilon: eps on the real axis or a lattice point
    :raises SingularPotential: the scan found a zero of w
    """
    energy = validate_epsilon(eps)
    if not energy.usable:
        raise ExcludedEpsilon(energy)
    sup = ComplexPartner(complex_transform(eps))
    report = partner_scan(sup, interval, scan_samples)
    if report.is_singular:
        raise SingularPotential(report)
    logger.info("eps=%s (%s, seed %s) is nonsingular on [%g, %g]",
                eps, energy.classification.value, energy.seed_label, *interval)
    return sup


@click.command("partner")
@eps_options
@click.option("--scan-samples", type=int, default=4000, show_default=True)
@click.option("--emit-w", is_flag=True, help="Add the w column")
@grid_options
@handle_errors
def cmd_partner(eps_re, eps_im, scan_samples, emit_w, xmin, xmax, samples, output, fmt):
    """Sample the complex-case SUSY partner V_2 next to V_0 = -x^2/2"""
    config = PartnerConfig(
        eps_re=eps_re, eps_im=eps_im, scan_samples=scan_samples, emit_w=emit_w,
        xmin=xmin, xmax=xmax, samples=samples, output=output, format=fmt,
    )
    sup = checked_partner(config.eps, (config.xmin, config.xmax), config.scan_samples)

    def columns(x: float) -> list[float]:
        row = [sup.V2(x), -x * x / 2]
        if config.emit_w:
            row.append(sup.w(x))
        return row

    header = ["x", "V2", "V0"] + (["w"] if config.emit_w else [])
    rows = sample(columns, config.grid())
    storage_service.write_table(
        header, rows, storage_service.metadata("partner", config),
        output=Path(output) if output else None, fmt=config.format,
    )
