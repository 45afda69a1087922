import cmath
from enum import Enum

from pydantic import BaseModel, ConfigDict, field_validator, model_validator


class OscillatorKind(str, Enum):
    HARMONIC = "harmonic"
    FREE = "free"
    INVERTED = "inverted"

    @property
    def omega(self) -> complex:
        return {"harmonic": 1.0 + 0j, "free": 0j, "inverted": 1j}[self.value]

    def potential(self, x: float) -> float:
        """V(x) = omega^2 x^2 / 2, always real for the three kinds"""
        return (self.omega * self.omega).real * x * x / 2


class Combo(str, Enum):
    EVEN = "even"
    ODD = "odd"
    GENERAL = "general"
    PLUS = "plus"
    MINUS = "minus"
    LEFT = "left"
    RIGHT = "right"


SCATTERING_COMBOS = {Combo.PLUS, Combo.MINUS, Combo.LEFT, Combo.RIGHT}


class SolutionSpec(BaseModel):
    """Recipe for one wavefunction: which oscillator, which combination, which energy"""
    model_config = ConfigDict(frozen=True)

    kind: OscillatorKind
    energy: float
    combo: Combo = Combo.GENERAL
    C: float = 1.0
    D: float = 0.0

    @model_validator(mode="after")
    def check_combo(self):
        if self.combo in SCATTERING_COMBOS and self.kind != OscillatorKind.INVERTED:
            raise ValueError(f"combo {self.combo.value} is only defined for the inverted oscillator")
        if not (cmath.isfinite(self.C) and cmath.isfinite(self.D)):
            raise ValueError("C and D must be finite")
        return self


class WaveEval(BaseModel):
    """Value and first x-derivative of a wavefunction at one point"""
    model_config = ConfigDict(frozen=True)

    value: complex
    deriv: complex

    @field_validator("value", "deriv")
    @classmethod
    def finite(cls, v: complex) -> complex:
        if not cmath.isfinite(v):
            raise ValueError("wave evaluation produced a non-finite number")
        return v

    def conjugate(self) -> "WaveEval":
        return WaveEval(value=self.value.conjugate(), deriv=self.deriv.conjugate())


class NormalizationNE(BaseModel):
    model_config = ConfigDict(frozen=True)

    E: float
    value: complex

    @field_validator("value")
    @classmethod
    def nonzero(cls, v: complex) -> complex:
        if v == 0 or not cmath.isfinite(v):
            raise ValueError("N_E must be finite and nonzero")
        return v
