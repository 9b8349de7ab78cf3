#!/usr/bin/env python3
"""
Configuration Container

Typed configuration for searches, the external solver and numeric output.
Loaded from a JSON file; unknown keys are ignored and missing sections keep
their defaults.
"""

import json
import os
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Any, Dict, Optional


SOLVER_CMD_ENV = "SSMG_SOLVER_CMD"


@dataclass
class LimitsConfig:
    """Caps that turn runaway searches into explicit verdicts."""
    posne_cap: int = 2 ** 22
    statne_cap: int = 2 ** 16
    memory_cap: int = 200_000
    desugar_max_branches: int = 10 ** 6
    counter_cap: int = 10 ** 6


@dataclass
class SolverConfig:
    """External real-arithmetic solver bridge."""
    command: str = ""
    timeout_seconds: int = 60
    jobs: int = 1
    emit_dir: Optional[str] = None
    keep_files: bool = False

    def resolved_command(self) -> str:
        """The SSMG_SOLVER_CMD environment variable if set, else the configured command."""
        return os.environ.get(SOLVER_CMD_ENV) or self.command


@dataclass
class NumericsConfig:
    precision: int = 50
    horizon: int = 200
    profile_horizon: int = 40


@dataclass
class AnalysisConfig:
    """Main configuration."""
    limits: LimitsConfig = field(default_factory=LimitsConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    numerics: NumericsConfig = field(default_factory=NumericsConfig)
    log_file: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for serialization."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'AnalysisConfig':
        """
        Create config from dictionary.

        Args:
            data: Configuration dictionary

        Returns:
            AnalysisConfig instance
        """
        data = dict(data)
        sections = {'limits': LimitsConfig, 'solver': SolverConfig, 'numerics': NumericsConfig}
        for key, section in sections.items():
            if isinstance(data.get(key), dict):
                valid = {f.name for f in section.__dataclass_fields__.values()}
                data[key] = section(**{k: v for k, v in data[key].items() if k in valid})
            else:
                data.pop(key, None)

        # Create config, filtering out unknown keys
        valid_keys = {f.name for f in cls.__dataclass_fields__.values()}
        filtered_data = {k: v for k, v in data.items() if k in valid_keys}

        return cls(**filtered_data)

    @property
    def log_path(self) -> Optional[Path]:
        return Path(self.log_file) if self.log_file else None


@dataclass
class ConfigContainer:
    """
    Container for all configuration.

    Provides typed access to configuration with validation.
    """
    analysis: AnalysisConfig

    @classmethod
    def load(cls, config_file: Optional[Path]) -> 'ConfigContainer':
        """
        Load configuration from file.

        Args:
            config_file: Path to config JSON (None for defaults)

        Returns:
            ConfigContainer with loaded config
        """
        if config_file is not None and Path(config_file).exists():
            try:
                with open(config_file, 'r', encoding='utf-8') as f:
                    return cls(analysis=AnalysisConfig.from_dict(json.load(f)))
            except (OSError, ValueError, TypeError):
                # Return defaults on error
                pass

        return cls(analysis=AnalysisConfig())

    def save(self, config_file: Path) -> None:
        """
        Save configuration to file.

        Args:
            config_file: Path to config JSON
        """
        config_file = Path(config_file)
        config_file.parent.mkdir(parents=True, exist_ok=True)

        with open(config_file, 'w', encoding='utf-8') as f:
            json.dump(self.analysis.to_dict(), f, indent=2)
