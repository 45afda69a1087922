from enum import Enum
from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field, computed_field

from app.schemas.oscillator import OscillatorKind


class LadderFamily(str, Enum):
    BOUND_HARMONIC = "bound-harmonic"
    NONPHYS_HARMONIC = "nonphys-harmonic"
    INVERTED_MINUS = "inverted-minus"
    INVERTED_PLUS = "inverted-plus"

    @property
    def kind(self) -> OscillatorKind:
        if self in (LadderFamily.BOUND_HARMONIC, LadderFamily.NONPHYS_HARMONIC):
            return OscillatorKind.HARMONIC
        return OscillatorKind.INVERTED

    def exact_eigenvalue(self, n: int) -> tuple[Fraction, Fraction]:
        """(Re, Im) of the n-th eigenvalue as exact fractions"""
        half = Fraction(2 * n + 1, 2)
        return {
            LadderFamily.BOUND_HARMONIC: (half, Fraction(0)),
            LadderFamily.NONPHYS_HARMONIC: (-half, Fraction(0)),
            LadderFamily.INVERTED_MINUS: (Fraction(0), half),
            LadderFamily.INVERTED_PLUS: (Fraction(0), -half),
        }[self]


class LadderState(BaseModel):
    """One rung of a Hermite ladder: psi_n, phi_n, phi_n^- or phi_n^+"""
    model_config = ConfigDict(frozen=True)

    family: LadderFamily
    n: int = Field(ge=0)

    @computed_field
    @property
    def eigenvalue(self) -> complex:
        re, im = self.family.exact_eigenvalue(self.n)
        return complex(float(re), float(im))
