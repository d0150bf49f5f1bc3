"""Configuration management for rootlab runs."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from dotenv import dotenv_values, load_dotenv

from rootlab.errors import ConfigError

DEFAULT_BITS = 4096
DEFAULT_TNFE = 12
DEFAULT_KAPPA = Fraction(1, 100)
OUTPUT_FORMATS = ("text", "csv", "records")


def find_dotenv() -> Path | None:
    """Find .env file by walking up from current directory."""
    current = Path.cwd()
    while current != current.parent:
        env_file = current / ".env"
        if env_file.exists():
            return env_file
        current = current.parent
    return None


env_path = find_dotenv()
if env_path:
    load_dotenv(env_path)


def _positive_int(minimum: int) -> Callable[[str], int]:
    def convert(text: str) -> int:
        value = int(text)
        if value < minimum:
            raise ValueError(f"must be >= {minimum}")
        return value

    return convert


def _fraction(text: str) -> Fraction:
    value = Fraction(text.strip())
    if value == 0:
        raise ValueError("must be nonzero")
    return value


def _output_format(text: str) -> str:
    value = text.strip().lower()
    if value not in OUTPUT_FORMATS:
        raise ValueError(f"must be one of {', '.join(OUTPUT_FORMATS)}")
    return value


# Config-file keys mirror the command-line flags.
_CONVERTERS: dict[str, tuple[str, Callable[[str], Any]]] = {
    "bits": ("bits", _positive_int(64)),
    "tnfe": ("tnfe", _positive_int(1)),
    "kappa": ("kappa", _fraction),
    "format": ("output_format", _output_format),
    "workers": ("workers", _positive_int(1)),
    "exponent_slack": ("exponent_slack", float),
    "coc_slack": ("coc_slack", float),
    "truncation": ("truncation", _positive_int(2)),
}


@dataclass(frozen=True)
class Settings:
    """Run settings: built-in defaults, overridden by env, config file and flags."""

    bits: int = DEFAULT_BITS
    tnfe: int = DEFAULT_TNFE
    kappa: Fraction = DEFAULT_KAPPA
    output_format: str = "text"
    workers: int = 1

    # Acceptance tolerances for bench comparisons against printed tables
    exponent_slack: float = 0.10  # relative slack on error exponents
    coc_slack: float = 0.05  # absolute slack on COC values

    truncation: int | None = None  # symbolic truncation order; None = per family

    @classmethod
    def from_env(cls) -> "Settings":
        """Create settings from environment variables."""
        settings = cls()
        bits = os.getenv("ROOTLAB_BITS")
        if bits:
            settings = settings.merged({"bits": bits}, source="ROOTLAB_BITS")
        workers = os.getenv("ROOTLAB_WORKERS")
        if workers:
            settings = settings.merged({"workers": workers}, source="ROOTLAB_WORKERS")
        return settings

    def merged(self, values: dict[str, Any], source: str = "config") -> "Settings":
        """Return a copy with ``values`` (flag-style keys, text or typed) applied.

        Raises:
            ConfigError: On unknown keys or values that fail validation.
        """
        updates: dict[str, Any] = {}
        for key, raw in values.items():
            if raw is None:
                continue
            normalized = key.strip().lower().replace("-", "_")
            if normalized not in _CONVERTERS:
                raise ConfigError(key=key, message=f"unknown key (from {source})")
            attribute, convert = _CONVERTERS[normalized]
            try:
                updates[attribute] = convert(str(raw))
            except (ValueError, ZeroDivisionError) as exc:
                raise ConfigError(key=key, message=f"invalid value {raw!r}: {exc}") from exc
        return replace(self, **updates)


def load_config_file(path: str | Path) -> dict[str, str]:
    """Parse a flat key=value config file.

    Returns:
        The raw key/value pairs; empty values are dropped.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(key=str(path), message="config file not found")
    return {key: value for key, value in dotenv_values(path).items() if value}


def get_settings(
    config_file: str | Path | None = None,
    overrides: dict[str, Any] | None = None,
) -> Settings:
    """Resolve settings with precedence flags > config file > env > defaults."""
    settings = Settings.from_env()
    if config_file is not None:
        settings = settings.merged(load_config_file(config_file), source=str(config_file))
    if overrides:
        settings = settings.merged(overrides, source="command line")
    return settings


def get_config() -> dict[str, str | None]:
    """Get the raw environment knobs as a dict (for diagnostics output)."""
    return {
        "ROOTLAB_BITS": os.getenv("ROOTLAB_BITS"),
        "ROOTLAB_WORKERS": os.getenv("ROOTLAB_WORKERS"),
    }


def settings_as_dict(settings: Settings) -> dict[str, Any]:
    return {field.name: getattr(settings, field.name) for field in fields(settings)}
