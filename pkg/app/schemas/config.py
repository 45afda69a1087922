from enum import Enum
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.schemas.algebra import EigenNormalization
from app.schemas.ladder import LadderFamily
from app.schemas.oscillator import Combo, OscillatorKind


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class GridConfig(BaseModel):
    """Sampling grid and output target shared by the curve-emitting commands"""
    model_config = ConfigDict(frozen=True)

    xmin: float = -10.0
    xmax: float = 10.0
    samples: int = Field(default=401, ge=1)
    output: Path | None = None
    format: OutputFormat = OutputFormat.CSV

    @model_validator(mode="after")
    def check_grid(self):
        if self.samples == 1 and self.xmin == self.xmax:
            return self
        if self.samples < 2:
            raise ValueError("samples must be >= 2 (or 1 with xmin == xmax)")
        if not self.xmin < self.xmax:
            raise ValueError(f"xmin={self.xmin} must be below xmax={self.xmax}")
        return self

    def grid(self) -> np.ndarray:
        return np.linspace(self.xmin, self.xmax, self.samples)


class EvalConfig(GridConfig):
    kind: OscillatorKind = OscillatorKind.INVERTED
    combo: Combo = Combo.LEFT
    energy: float = 0.0
    C: float = 1.0
    D: float = 0.0
    family: LadderFamily | None = None
    n: int | None = Field(default=None, ge=0)

    @model_validator(mode="after")
    def check_ladder(self):
        if (self.family is None) != (self.n is None):
            raise ValueError("--family and --n go together")
        return self

    @property
    def real_valued(self) -> bool:
        """Even, Odd and General combinations at real E and C, D, and the harmonic ladders"""
        if self.family is not None:
            return self.family in (LadderFamily.BOUND_HARMONIC, LadderFamily.NONPHYS_HARMONIC)
        return self.combo in (Combo.EVEN, Combo.ODD, Combo.GENERAL)


class PartnerConfig(GridConfig):
    eps_re: float
    eps_im: float
    scan_samples: int = Field(default=4000, ge=2)
    emit_w: bool = False

    @property
    def eps(self) -> complex:
        return complex(self.eps_re, self.eps_im)


class EigenConfig(PartnerConfig):
    energy: float
    combo: Combo = Combo.LEFT
    normalization: EigenNormalization = EigenNormalization.BFACTOR
    with_psi0: bool = False

    @property
    def real_valued(self) -> bool:
        """Left and Right movers are real, and B^+ keeps them real"""
        return self.combo in (Combo.LEFT, Combo.RIGHT)


class VerifyConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    suite: str = "all"
    tol: float | None = Field(default=None, gt=0)
    seed: int = 0
    output: Path | None = None
    json_report: Path | None = None
