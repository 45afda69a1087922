import click

from app.api.deps import EXIT_OK, EXIT_VERIFY_FAILED, handle_errors
from app.schemas.config import VerifyConfig
from app.services.storage import storage_service
from app.services.verify import SUITES, VerificationService


@click.command("verify")
@click.option("--suite", type=click.Choice([*SUITES, "all"]), default="all", show_default=True)
@click.option("--tol", type=float, default=None, help="Replace every check tolerance")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None)
@click.option("--json", "json_report", type=click.Path(dir_okay=False), default=None,
              help="Also write the report to this file")
@handle_errors
def cmd_verify(suite, tol, seed, output, json_report):
    """Run verification suites and print a JSON DiagnosticReport; exit 1 on any failed check"""
    config = VerifyConfig(suite=suite, tol=tol, seed=seed, output=output, json_report=json_report)
    report = VerificationService(config.tol, config.seed).run(config.suite)
    storage_service.write_report(report, config.output)
    if config.json_report is not None:
        storage_service.write_report(report, config.json_report)
    for check in report.failures:
        click.echo(f"FAIL {check.name}: {check.max_residual:.3e} > {check.tol:.1e}", err=True)
    raise SystemExit(EXIT_OK if report.passed else EXIT_VERIFY_FAILED)
