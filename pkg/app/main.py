import click

from app import __version__
from app.api import eigenfunction, evaluate, partner, verify
from app.core.config import settings
from app.core.logging import configure_logging


@click.group(help=settings.app_name)
@click.version_option(__version__)
@click.option("--verbose", "-v", is_flag=True, help="Log at DEBUG to stderr")
def cli(verbose):
    configure_logging(verbose)


# Register commands
cli.add_command(evaluate.cmd_eval)
cli.add_command(partner.cmd_partner)
cli.add_command(eigenfunction.cmd_eigenfunction)
cli.add_command(verify.cmd_verify)


if __name__ == "__main__":
    cli()
