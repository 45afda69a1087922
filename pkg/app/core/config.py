import math

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings loaded in from env vars (prefix IOSUSY_) or a .env file"""
    model_config = SettingsConfigDict(
        case_sensitive=False, env_file=".env", env_prefix="IOSUSY_", extra="ignore"
    )

    app_name: str = "Inverted Oscillator SUSY Toolkit"
    debug: bool = False
    log_level: str = "WARNING"

    # Kummer series / asymptotic policy
    switch_radius: float = 30.0
    series_max_terms: int = 400
    series_rel_tol: float = 1e-17
    dd_radius: float = 8.0  # |z| above which the series runs in double-double
    asymp_terms: int = 30

    # oscillator
    x_min_asymp: float = 6.0

    # quadrature
    quad_rel_tol: float = 1e-9
    quad_abs_tol: float = 1e-12
    quad_panel_phase: float = math.pi / 2
    quad_limit: int = 200000

    # derivative checks
    fd_step: float = 5e-3

    # overrides every verification tolerance when set
    default_tol: float | None = None

    workers: int = 1


settings = Settings()
