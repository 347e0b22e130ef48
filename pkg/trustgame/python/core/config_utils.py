from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from .logger import logger
from .validators import TrustGameError

PACKAGE_ROOT = Path(__file__).resolve().parent.parent.parent
REPO_ROOT = PACKAGE_ROOT.parent
DEFAULT_CONFIG_PATH = PACKAGE_ROOT / "config" / "trustgame_config.json"


class ConfigError(TrustGameError, ValueError):
    pass


# ============================================================================
# Typed configuration
# ============================================================================

@dataclass(frozen=True)
class GuardConfig:
    check_superadditive: int = 12
    check_monotone: int = 12
    mobius_oracle: int = 16
    shapley_bruteforce: int = 12
    banzhaf_bruteforce: int = 12
    is_in_core: int = 16
    verify_total_balancedness: int = 10

    @classmethod
    def from_dict(cls, data: Optional[Mapping[str, Any]]) -> "GuardConfig":
        cfg = dict(data or {})
        inst = cls()
        values = {}
        for name in inst.__dataclass_fields__:
            raw = cfg.get(name, getattr(inst, name))
            try:
                values[name] = int(raw)
            except (TypeError, ValueError):
                raise ConfigError(f"Guard '{name}' must be an integer, got {raw!r}")
        return cls(**values)

    def overridden(self, max_n: int) -> "GuardConfig":
        return replace(self, **{name: int(max_n) for name in self.__dataclass_fields__})


@dataclass(frozen=True)
class OutputConfig:
    significant_digits: int = 12

    @classmethod
    def from_dict(cls, data: Optional[Mapping[str, Any]]) -> "OutputConfig":
        cfg = dict(data or {})
        digits = int(cfg.get("significant_digits", cls.significant_digits))
        if digits < 1 or digits > 17:
            raise ConfigError(f"significant_digits must be in 1..17, got {digits}")
        return cls(significant_digits=digits)


@dataclass(frozen=True)
class SamplingConfig:
    seed: int = 20240611
    samples: int = 0

    @classmethod
    def from_dict(cls, data: Optional[Mapping[str, Any]]) -> "SamplingConfig":
        cfg = dict(data or {})
        return cls(seed=int(cfg.get("seed", cls.seed)), samples=max(0, int(cfg.get("samples", cls.samples))))


@dataclass(frozen=True)
class TrustGameConfig:
    guards: GuardConfig = field(default_factory=GuardConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    tolerance: float = 1e-9
    sweep_steps: int = 101
    max_threads: int = 8
    log_level: str = "warning"

    @classmethod
    def from_dict(cls, data: Optional[Mapping[str, Any]]) -> "TrustGameConfig":
        cfg = dict(data or {})
        inst = cls()

        tolerance = float(cfg.get("tolerance", inst.tolerance))
        if tolerance < 0:
            raise ConfigError(f"tolerance must be nonnegative, got {tolerance}")

        steps = int((cfg.get("sweep") or {}).get("steps", inst.sweep_steps))
        if steps < 2:
            raise ConfigError(f"sweep.steps must be at least 2, got {steps}")

        max_threads = (cfg.get("threads") or {}).get("max", inst.max_threads)
        max_threads = max(1, int(max_threads)) if max_threads is not None else inst.max_threads

        return cls(
            guards=GuardConfig.from_dict(cfg.get("guards")),
            output=OutputConfig.from_dict(cfg.get("output")),
            sampling=SamplingConfig.from_dict(cfg.get("sampling")),
            tolerance=tolerance,
            sweep_steps=steps,
            max_threads=max_threads,
            log_level=str(cfg.get("log_level", inst.log_level) or inst.log_level).lower(),
        )


# ============================================================================
# Loading and merging
# ============================================================================

def deep_merge(base: dict, override: dict) -> dict:
    """Merge two dictionaries; values in ``override`` win, nested dicts merge recursively."""
    result = base.copy()
    for key, value in override.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = deep_merge(result[key], value)
        else:
            result[key] = value
    return result


def _read_json(path: Path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Cannot parse {path}: {e}")
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must contain a JSON object")
    return data


def load_default_config() -> dict:
    env_config_path = os.environ.get("TRUSTGAME_CONFIG_PATH")
    config_path = Path(env_config_path) if env_config_path else DEFAULT_CONFIG_PATH

    if not config_path.exists():
        logger.warning(f"Config file not found: {config_path}, using built-in defaults")
        return {}
    return _read_json(config_path)


def env_max_n() -> Optional[int]:
    raw = os.environ.get("TRUSTGAME_MAX_N")
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"TRUSTGAME_MAX_N must be an integer, got {raw!r}")


def resolve_config(overrides: Optional[dict] = None, *, max_n: Optional[int] = None) -> TrustGameConfig:
    """Defaults file, then ``overrides``, then TRUSTGAME_MAX_N, then an explicit ``max_n``."""
    merged = deep_merge(load_default_config(), overrides or {})
    config = TrustGameConfig.from_dict(merged)

    guard_override = max_n if max_n is not None else env_max_n()
    if guard_override is not None:
        logger.debug(f"Exhaustive guards overridden to max_n={guard_override}")
        config = replace(config, guards=config.guards.overridden(guard_override))
    return config


def resolve_repo_path(path: str) -> Path:
    candidate = Path(path)
    if candidate.is_absolute() or candidate.exists():
        return candidate
    return REPO_ROOT / candidate


# ============================================================================
# Job manifests
# ============================================================================

def load_manifest(manifest_path: str) -> dict:
    path = resolve_repo_path(manifest_path)
    if not path.exists():
        raise ConfigError(f"Manifest file not found: {manifest_path}")
    return _read_json(path)


def validate_manifest_type(manifest: dict, expected_type: str) -> str:
    job_id = manifest.get("job_id", "unknown")
    job_type = manifest.get("job_type", "unknown")
    if job_type != expected_type:
        raise ConfigError(f"Invalid job type '{job_type}', expected '{expected_type}'")
    return job_id


def merge_configs(manifest: dict) -> dict:
    """Resolve a manifest's ``template`` (lowest priority) under the manifest itself.

    The manifest's ``config`` block is later merged over the defaults file by
    :func:`resolve_config`.
    """
    template_path = manifest.get("template", "")
    if template_path:
        path = resolve_repo_path(template_path)
        if path.exists():
            manifest = deep_merge(_read_json(path), manifest)
            logger.info(f"Applied template configuration from: {template_path}")
        else:
            logger.warning(f"Template file not found: {template_path}")
        manifest.pop("template", None)
    return manifest
