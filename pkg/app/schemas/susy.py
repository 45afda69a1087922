import cmath
import math
from enum import Enum
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from app.schemas.oscillator import Combo, SolutionSpec

AXIS_TOL = 1e-9
LATTICE_TOL = 1e-9


class EpsilonClass(str, Enum):
    QUADRANT_I_II = "quadrant-I-II"
    QUADRANT_III_IV = "quadrant-III-IV"
    EXCLUDED_REAL_AXIS = "excluded-real-axis"
    EXCLUDED_LATTICE_POINT = "excluded-lattice-point"

    @property
    def usable(self) -> bool:
        return self in (EpsilonClass.QUADRANT_I_II, EpsilonClass.QUADRANT_III_IV)


def lattice_distance(eps: complex) -> float:
    """Distance from eps to the nearest point +-i(m + 1/2), m >= 0"""
    m = max(0, round(abs(eps.imag) - 0.5))
    target = math.copysign(m + 0.5, eps.imag) if eps.imag != 0 else 0.5
    return abs(eps - 1j * target)


def classify_epsilon(eps: complex) -> EpsilonClass:
    eps = complex(eps)
    if abs(eps.imag) < AXIS_TOL:
        return EpsilonClass.EXCLUDED_REAL_AXIS
    if lattice_distance(eps) < LATTICE_TOL:
        return EpsilonClass.EXCLUDED_LATTICE_POINT
    return EpsilonClass.QUADRANT_I_II if eps.imag > 0 else EpsilonClass.QUADRANT_III_IV


class FactorizationEnergy(BaseModel):
    """Complex factorization energy with its place in the complex plane"""
    model_config = ConfigDict(frozen=True)

    eps: complex
    classification: EpsilonClass
    lattice_distance: float

    @property
    def usable(self) -> bool:
        return self.classification.usable

    @property
    def seed_label(self) -> str:
        return "uP" if self.classification == EpsilonClass.QUADRANT_I_II else "uN"

    @model_validator(mode="after")
    def check_classification(self):
        if not cmath.isfinite(self.eps):
            raise ValueError("factorization energy must be finite")
        if classify_epsilon(self.eps) != self.classification:
            raise ValueError(f"classification {self.classification.value} does not match eps={self.eps}")
        return self


class SusyCase(str, Enum):
    FIRST = "first"
    REAL = "real"
    CONFLUENT = "confluent"
    COMPLEX = "complex"


class FirstOrderCase(BaseModel):
    model_config = ConfigDict(frozen=True)

    case: Literal[SusyCase.FIRST] = SusyCase.FIRST
    eps: float
    seed: SolutionSpec


class RealCase(BaseModel):
    model_config = ConfigDict(frozen=True)

    case: Literal[SusyCase.REAL] = SusyCase.REAL
    eps1: float
    eps2: float
    seed1: SolutionSpec
    seed2: SolutionSpec

    @model_validator(mode="after")
    def distinct(self):
        if self.eps1 == self.eps2:
            raise ValueError("real case needs eps1 != eps2; equal energies give a constant Wronskian")
        return self


class ConfluentCase(BaseModel):
    model_config = ConfigDict(frozen=True)

    case: Literal[SusyCase.CONFLUENT] = SusyCase.CONFLUENT
    eps: float
    w0: float = 0.0
    x0: float = 0.0
    seed: SolutionSpec


class ComplexCase(BaseModel):
    model_config = ConfigDict(frozen=True)

    case: Literal[SusyCase.COMPLEX] = SusyCase.COMPLEX
    energy: FactorizationEnergy


TransformCase = Annotated[
    Union[FirstOrderCase, RealCase, ConfluentCase, ComplexCase], Field(discriminator="case")
]


class SusyTransform(BaseModel):
    """
    A fully specified SUSY transformation of the inverted oscillator

    c and d fix the g master equation; eps = (d + xi)/2 with xi^2 = c.
    """
    model_config = ConfigDict(frozen=True)

    order: Literal[1, 2]
    case2: TransformCase
    c: float = 0.0
    d: float = 0.0

    @computed_field
    @property
    def xi(self) -> complex:
        if self.c >= 0:
            return complex(math.sqrt(self.c))
        return 1j * math.sqrt(-self.c) * (1 if self._eps().imag >= 0 else -1)

    def _eps(self) -> complex:
        case = self.case2
        if isinstance(case, ComplexCase):
            return case.energy.eps
        if isinstance(case, RealCase):
            return complex(case.eps1)
        return complex(case.eps)

    @model_validator(mode="after")
    def check_case(self):
        case = self.case2
        if (self.order == 1) != isinstance(case, FirstOrderCase):
            raise ValueError("order 1 goes with a first-order case and order 2 with the others")
        if isinstance(case, RealCase) and not self.c > 0:
            raise ValueError("real case needs c > 0")
        if isinstance(case, ConfluentCase) and self.c != 0:
            raise ValueError("confluent case needs c = 0")
        if isinstance(case, ComplexCase):
            if not self.c < 0:
                raise ValueError("complex case needs c < 0")
            if not case.energy.usable:
                raise ValueError(f"eps={case.energy.eps} is {case.energy.classification.value}")
        return self


class ZeroKind(str, Enum):
    SEED_ZERO = "seed-zero"
    WRONSKIAN_ZERO = "wronskian-zero"
    W_ZERO = "w-zero"


class SingularityZero(BaseModel):
    model_config = ConfigDict(frozen=True)

    location: float
    kind: ZeroKind
    near_zero: bool = False
    # located from the asymptotic growth of w beyond the bisection reach
    extrapolated: bool = False


class SingularityReport(BaseModel):
    zeros: list[SingularityZero] = []
    interval: tuple[float, float]

    @computed_field
    @property
    def is_singular(self) -> bool:
        return bool(self.zeros)


PARTNER_COMBOS = (Combo.PLUS, Combo.MINUS, Combo.LEFT, Combo.RIGHT)
