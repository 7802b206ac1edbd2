from pydantic_settings import BaseSettings, SettingsConfigDict # Pydantic v2 uses pydantic-settings

class SolverSettings(BaseSettings):
    # Single tolerance knob for feasibility, optimality and verdict margins
    DEFAULT_TOLERANCE: float = 1e-9

    # Zero test used by the pivot rules in float mode only (rational mode pivots exactly)
    PIVOT_TOLERANCE: float = 1e-12

    # Float-mode iteration cap; Bland's rule terminates on its own with exact arithmetic
    MAX_ITERATIONS: int = 10000

    # Thread pool width for the truncation study
    STUDY_MAX_WORKERS: int = 4

    LOG_LEVEL: str = "WARNING"

    model_config = SettingsConfigDict(env_prefix='INFSUP_')

solver_settings = SolverSettings()
