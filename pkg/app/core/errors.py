"""
Exception hierarchy shared by the numeric services and the CLI.

Every NumericalError carries the process exit code the CLI maps it to.
"""


class NumericalError(Exception):
    """Base class for failures of a numeric operation"""
    exit_code = 3


class PoleError(NumericalError):
    """Argument sits on a pole of the Gamma function"""


class ParameterPole(NumericalError):
    """b of 1F1 is a non-positive integer"""


class NoConvergence(NumericalError):
    """A series ran out of terms before reaching tolerance"""


class UnsupportedKind(NumericalError):
    """Operation not defined for this oscillator kind"""


class DomainError(NumericalError):
    """Coordinate outside the operation's domain"""


class RangeOverflow(NumericalError):
    """A result left the double-precision range"""


class QuadratureFailure(NumericalError):
    """Adaptive quadrature did not reach tolerance within its panel budget"""


class MissingDerivative(NumericalError):
    """A wave evaluator cannot supply the derivatives an operator needs"""


class SeedZero(NumericalError):
    """Transformation function vanishes at the evaluation point"""


class WronskianZero(NumericalError):
    """Wronskian of the seeds vanishes at the evaluation point"""


class WZero(NumericalError):
    """The w function of a second-order transformation vanishes"""


class ClassificationError(NumericalError):
    """Factorization energy lies on an excluded part of the complex plane"""


class ExcludedEpsilon(ClassificationError):
    exit_code = 5

    def __init__(self, energy):
        self.energy = energy
        super().__init__(
            f"factorization energy {energy.eps} is excluded ({energy.classification.value})"
        )


class SingularPotential(NumericalError):
    exit_code = 4

    def __init__(self, report):
        self.report = report
        locations = ", ".join(f"{z.location:.6g} ({z.kind.value})" for z in report.zeros)
        super().__init__(f"partner potential is singular at {locations}")


class DegenerateParameter(UserWarning):
    """A Gamma pole removes one term of the 1F1 asymptotic expansion"""
