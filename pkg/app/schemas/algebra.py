from enum import Enum

from pydantic import BaseModel, ConfigDict, field_validator

from app.schemas.oscillator import Combo
from app.schemas.susy import PARTNER_COMBOS, classify_epsilon


class EigenNormalization(str, Enum):
    RAW = "raw"  # g(-psi' + (u'/u) psi) + 2(eps - E) psi, as written
    BFACTOR = "bfactor"  # B^+ psi / |E - eps|


class PartnerEigenfunction(BaseModel):
    """psi_E^(2): image under B^+ of a scattering state of the inverted oscillator"""
    model_config = ConfigDict(frozen=True)

    eps: complex
    E: float
    base_combo: Combo = Combo.LEFT
    normalization: EigenNormalization = EigenNormalization.BFACTOR

    @field_validator("eps")
    @classmethod
    def usable_eps(cls, v: complex) -> complex:
        klass = classify_epsilon(v)
        if not klass.usable:
            raise ValueError(f"eps={v} is {klass.value}")
        return v

    @field_validator("base_combo")
    @classmethod
    def scattering_combo(cls, v: Combo) -> Combo:
        if v not in PARTNER_COMBOS:
            raise ValueError(f"base combo must be one of plus, minus, left, right; got {v.value}")
        return v


class ShootingResult(BaseModel):
    """
    Tail Gram-matrix conditioning of the two fundamental solutions of H_2 at E

    A ratio near zero on both sides would mean one combination decays faster
    than the rest, the signature of a normalizable state.
    """
    model_config = ConfigDict(frozen=True)

    E: float
    left_ratio: float
    right_ratio: float

    @property
    def normalizable_candidate(self) -> bool:
        return min(self.left_ratio, self.right_ratio) < 1e-6
