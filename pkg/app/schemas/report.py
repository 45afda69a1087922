from pydantic import BaseModel, ConfigDict, Field


class CheckResult(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    name: str
    max_residual: float
    tol: float
    passed: bool = Field(serialization_alias="pass")


class DiagnosticReport(BaseModel):
    """Machine-readable outcome of a verification suite"""
    model_config = ConfigDict(populate_by_name=True)

    suite: str
    checks: list[CheckResult] = []
    passed: bool = Field(default=True, serialization_alias="pass")

    def record(self, name: str, max_residual: float, tol: float) -> CheckResult:
        check = CheckResult(name=name, max_residual=max_residual, tol=tol, passed=bool(max_residual <= tol))
        self.checks.append(check)
        self.passed = self.passed and check.passed
        return check

    def merge(self, other: "DiagnosticReport") -> "DiagnosticReport":
        for check in other.checks:
            self.checks.append(check)
            self.passed = self.passed and check.passed
        return self

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]
