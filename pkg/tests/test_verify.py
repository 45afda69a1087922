import pytest

from app.services.verify import SUITES, VerificationService, run_suite


@pytest.mark.slow
@pytest.mark.parametrize("suite", SUITES)
def test_suite_passes(suite, no_tol_override):
    report = run_suite(suite)
    assert report.suite == suite
    assert report.checks
    assert report.passed, [(c.name, c.max_residual, c.tol) for c in report.failures]


def test_tol_override_replaces_every_tolerance(no_tol_override):
    report = VerificationService(tol=1e-300).run("specfun")
    assert {c.tol for c in report.checks} == {1e-300}
    assert not report.passed
    assert report.failures


def test_unknown_suite(no_tol_override):
    with pytest.raises(ValueError, match="unknown suite"):
        VerificationService().run("nonsense")


def test_report_serializes_pass_flags(no_tol_override):
    report = VerificationService().run("specfun")
    dumped = report.model_dump(by_alias=True)
    assert dumped["pass"] is report.passed
    assert all("pass" in c for c in dumped["checks"])
