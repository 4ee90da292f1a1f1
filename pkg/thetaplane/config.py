# Copyright (c) 2026 Alessandro Orrù
# Licensed under MIT

from dataclasses import dataclass, field
from pathlib import Path
from typing import Self
import yaml


@dataclass(frozen=True)
class CliConfig:
    theta_path: str | None = None
    mode: str = "exact"
    degree: int = 4
    tol: float = 1e-9
    seed: int = 0

    def __post_init__(self) -> None:
        if self.mode not in ("exact", "numeric"):
            raise ValueError(f"mode must be 'exact' or 'numeric', got '{self.mode}'")
        if self.degree < 0:
            raise ValueError(f"degree must be >= 0, got {self.degree}")
        if self.tol < 0:
            raise ValueError(f"tol must be >= 0, got {self.tol}")
        if self.seed < 0:
            raise ValueError(f"seed must be >= 0, got {self.seed}")
        if self.mode == "numeric" and not self.theta_path:
            raise ValueError("numeric mode requires theta_path")


@dataclass(frozen=True)
class LoggingConfig:
    level: str = "WARNING"

    def __post_init__(self) -> None:
        valid = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
        if self.level.upper() not in valid:
            raise ValueError(f"level must be one of {valid}, got '{self.level}'")


@dataclass(frozen=True)
class AppConfig:
    cli: CliConfig = field(default_factory=CliConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)


    # Load configuration from YAML file, merging with defaults
    @classmethod
    def from_yaml(cls, path: str | Path) -> Self:
        config_path = Path(path)
        if not config_path.exists():
            return cls()

        with config_path.open() as f:
            raw = yaml.safe_load(f) or {}

        return cls(
            cli=CliConfig(**(raw.get("cli") or {})),
            logging=LoggingConfig(**(raw.get("logging") or {})),
        )
