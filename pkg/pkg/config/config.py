from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Application Settings
    app_name: str = "Restricted Configuration Engine"
    log_level: str = Field("INFO", description="Minimum loguru level for the CLI and server sinks")

    # Numeric Configuration
    precision_bits: int = Field(53, ge=53, description="Binary precision of the floating layer (53 = double)")
    retry_separation: float = Field(1e-5, description="Retry a trace at doubled precision when strands come closer than this")
    root_max_iterations: int = Field(200, description="Iteration cap for the simultaneous root finder")

    # Loop Validation
    sample_count: int = Field(512, description="Chebyshev-spaced samples used by loop validation")
    continuity_tolerance: float = Field(1e-12, description="Allowed jump between adjacent segments for non-exact boundary values")
    membership_margin: float = Field(1e-6, description="Minimum |disc| and |S_ij| along a loop for it to count as in-space")

    # Tracer Configuration
    trace_max_step: float = Field(1 / 64, description="Largest parameter step attempted by the tracer")
    trace_min_step: float = Field(1e-13, description="Step floor; below it the trace aborts")
    crossing_tolerance: float = Field(1e-12, description="Width at which a crossing bisection stops")
    separation_floor: float = Field(1e-9, description="Strands closer than this are reported as colliding")
    im_gap_floor: float = Field(1e-9, description="Minimum imaginary gap at a crossing")

    # Reproduction Harness
    seed: int = Field(20240607, description="Seed for randomized property checks")
    reproduce_concurrency: int = Field(4, description="Checks run at once by the reproduce harness")

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="RCONF_",
        case_sensitive=False,
        extra="ignore",
    )
