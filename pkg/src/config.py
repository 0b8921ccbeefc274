"""Configuration management for the operator moment toolkit."""

from typing import Literal

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables (prefix OPMOMENT_)."""
    
    model_config = SettingsConfigDict(
        env_prefix="OPMOMENT_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )
    
    # Randomness
    seed: int = 0
    
    # Arithmetic
    backend: Literal["exact", "approx"] = "exact"
    psd_tol: float = 1e-9
    
    # Sampling
    grid_points: int = 17
    y_grid_points: int = 5
    trials: int = 25
    
    # Bisgaard sequence guard (a_8 = 2^(10!) is the largest allowed gap value)
    bisgaard_max_k: int = 8
    
    # Output
    log_level: str = "WARNING"
    report_digits: int = 10


settings = Settings()
