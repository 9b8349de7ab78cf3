"""
Typed configuration objects.
"""

from src.config.config_container import (
    SOLVER_CMD_ENV,
    AnalysisConfig,
    ConfigContainer,
    LimitsConfig,
    NumericsConfig,
    SolverConfig,
)

__all__ = [
    'SOLVER_CMD_ENV',
    'AnalysisConfig',
    'ConfigContainer',
    'LimitsConfig',
    'NumericsConfig',
    'SolverConfig',
]
