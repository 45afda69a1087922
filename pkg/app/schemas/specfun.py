from pydantic import BaseModel, ConfigDict, Field

from app.core.config import settings


class SeriesControl(BaseModel):
    """Numerical policy for the Kummer series and its asymptotic expansion"""
    model_config = ConfigDict(frozen=True)

    max_terms: int = Field(default=settings.series_max_terms, ge=1)
    rel_tol: float = Field(default=settings.series_rel_tol, gt=0)
    switch_radius: float = Field(default=settings.switch_radius, gt=0)
    asymp_terms: int = Field(default=settings.asymp_terms, ge=1)
    dd_radius: float = Field(default=settings.dd_radius, ge=0)


DEFAULT_CONTROL = SeriesControl()
