"""Configuration management using Pydantic settings."""
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Numerical tolerances and run defaults loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="DUOPOLY_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging
    log_level: str = "INFO"

    # First-orthant predicates accept roundoff down to -orthant_tol;
    # the integrator aborts below -orthant_abort
    orthant_tol: float = 1e-14
    orthant_abort: float = 1e-10

    # Hyperbolicity band on |I0|, |A0|, |disc|
    degeneracy_tol: float = 1e-12

    # Integration
    dt: float = 1e-3
    method: str = "rk4"  # "rk4" or "rk45"
    rk45_rtol: float = 1e-9
    rk45_atol: float = 1e-9

    # Absorbing set checks
    entry_eps: float = 1e-6
    invariance_tol: float = 1e-8
    envelope_slack: float = 1e-7

    # Liapunov decay checks
    decay_slack: float = 1e-6
    transient_fraction: float = 0.05

    # Gronwall bound is only checked on this fraction of its blow-up horizon
    horizon_fraction: float = 0.9

    # Sweeps
    sweep_cap: int = 1_000_000
    workers: int = 1

    # Default RNG seed
    seed: int = 0


settings = Settings()
