from pathlib import Path

import click

from app.api.deps import complex_columns, eps_options, grid_options, handle_errors, sample
from app.api.partner import checked_partner
from app.schemas.algebra import EigenNormalization, PartnerEigenfunction
from app.schemas.config import EigenConfig
from app.schemas.susy import PARTNER_COMBOS
from app.services.algebra import eigen_wave
from app.services.oscillator import scattering_wave
from app.services.storage import split_complex, storage_service


@click.command("eigenfunction")
@eps_options
@click.option("--energy", type=float, required=True, help="Real energy E of the input eigenfunction")
@click.option("--combo", type=click.Choice([c.value for c in PARTNER_COMBOS]), default="left", show_default=True)
@click.option("--normalization", type=click.Choice([n.value for n in EigenNormalization]),
              default=EigenNormalization.BFACTOR.value, show_default=True)
@click.option("--with-psi0", is_flag=True, help="Add the input eigenfunction psi_E")
@click.option("--scan-samples", type=int, default=4000, show_default=True)
@grid_options
@handle_errors
def cmd_eigenfunction(eps_re, eps_im, energy, combo, normalization, with_psi0, scan_samples,
                      xmin, xmax, samples, output, fmt):
    """Sample psi_E^(2) = B^+ psi_E, an eigenfunction of the complex-case partner at E"""
    config = EigenConfig(
        eps_re=eps_re, eps_im=eps_im, energy=energy, combo=combo, normalization=normalization,
        with_psi0=with_psi0, scan_samples=scan_samples,
        xmin=xmin, xmax=xmax, samples=samples, output=output, format=fmt,
    )
    checked_partner(config.eps, (config.xmin, config.xmax), config.scan_samples)
    target = PartnerEigenfunction(
        eps=config.eps, E=config.energy, base_combo=config.combo, normalization=config.normalization
    )
    psi2 = eigen_wave(target)
    psi0 = scattering_wave(config.combo, config.energy)

    waves = [psi2, psi0] if config.with_psi0 else [psi2]
    names = ["psi2", "psi0"][: len(waves)]

    if config.real_valued:
        header = ["x", *names]

        def columns(x: float) -> list[float]:
            return [complex(w.value(x)).real for w in waves]
    else:
        header = ["x", *(c for name in names for c in split_complex(name))]

        def columns(x: float) -> list[float]:
            return [c for w in waves for c in complex_columns(complex(w.value(x)))]

    rows = sample(columns, config.grid())
    storage_service.write_table(
        header, rows, storage_service.metadata("eigenfunction", config),
        output=Path(output) if output else None, fmt=config.format,
    )
