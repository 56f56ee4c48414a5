#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Engine configuration: search budgets, cohomology limits, logging and output."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional

BUDGET_ENV = "RBCOALG_BUDGET"
CONFIG_FILE = Path("rbcoalg_config.json")


@dataclass
class SearchConfig:
    """Upper bound on candidates visited by any exhaustive search."""

    budget: int = 200_000


@dataclass
class CohomologyConfig:
    """Largest cochain degree the cohomology commands accept."""

    n_max: int = 4


@dataclass
class LoggingConfig:
    level: str = "INFO"
    log_path: Optional[str] = "logs/app.log"


@dataclass
class EngineConfig:
    """Aggregate of all configuration sections."""

    search: SearchConfig = field(default_factory=SearchConfig)
    cohomology: CohomologyConfig = field(default_factory=CohomologyConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)
    output_indent: int = 2


DEFAULT_CONFIG = EngineConfig()

_SECTIONS = (SearchConfig, CohomologyConfig, LoggingConfig, EngineConfig)


def _deep_update_dataclass(instance, data: dict) -> None:
    """Recursively overwrite dataclass fields with the values in ``data``."""

    for key, value in data.items():
        if hasattr(instance, key):
            attr = getattr(instance, key)
            if isinstance(attr, _SECTIONS) and isinstance(value, dict):
                _deep_update_dataclass(attr, value)
            else:
                setattr(instance, key, value)


def _budget_from_env(config: EngineConfig) -> None:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None or not raw.strip():
        return
    try:
        budget = int(raw)
    except ValueError as exc:
        raise RuntimeError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from exc
    if budget <= 0:
        raise RuntimeError(f"{BUDGET_ENV} must be positive, got {budget}")
    config.search.budget = budget


def load_config(path: Optional[Path] = None) -> EngineConfig:
    """Defaults, then the JSON file if it exists, then the environment."""

    config = EngineConfig(
        search=replace(DEFAULT_CONFIG.search),
        cohomology=replace(DEFAULT_CONFIG.cohomology),
        logging=replace(DEFAULT_CONFIG.logging),
        output_indent=DEFAULT_CONFIG.output_indent,
    )

    if path is None:
        path = CONFIG_FILE

    if path.exists():
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
            if isinstance(data, dict):
                _deep_update_dataclass(config, data)
        except Exception as exc:
            raise RuntimeError(f"cannot parse configuration file {path}: {exc}") from exc
    _budget_from_env(config)
    return config


def write_example_config(path: Path = Path("rbcoalg_config_example.json")) -> None:
    """Write the defaults to a file for hand editing."""

    data = asdict(DEFAULT_CONFIG)
    path.write_text(json.dumps(data, indent=4, ensure_ascii=False), encoding="utf-8")


def main() -> None:
    """Print the effective configuration and write an example file."""

    print("effective configuration:")
    print(json.dumps(asdict(load_config()), indent=2, ensure_ascii=False))
    example_path = Path("rbcoalg_config_example.json")
    write_example_config(example_path)
    print(f"\nexample configuration written to {example_path}")


if __name__ == "__main__":
    main()
