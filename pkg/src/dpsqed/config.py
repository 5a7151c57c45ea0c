"""Run configuration and its flat ``key = value`` file format."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import ValidationError
from .quadrature import QuadConfig


class ConfigError(ValidationError):
    """Malformed configuration file."""


@dataclass(frozen=True)
class RunConfig:
    quad_tolerance: float = 1e-10
    max_nodes: int = 4096
    nmax: int = 256
    output_format: str = "csv"
    seed: int = 12345

    def __post_init__(self):
        if not self.quad_tolerance > 0:
            raise ValidationError("quad_tolerance must be positive")
        if self.max_nodes < 16:
            raise ValidationError("max_nodes must be at least 16")
        if self.nmax < 2:
            raise ValidationError("nmax must be at least 2")
        if self.output_format not in ("csv", "json"):
            raise ValidationError("output_format must be csv or json")

    def quad(self) -> QuadConfig:
        return QuadConfig(tolerance=self.quad_tolerance, max_nodes=self.max_nodes)

    def merged(self, **overrides) -> "RunConfig":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


_TYPES = {f.name: f.type for f in fields(RunConfig)}
_PARSERS = {"float": float, "int": int, "str": str}


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _TYPES:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = _PARSERS[_TYPES[key]](value)
        except ValueError:
            raise ConfigError(f"{source}:{lineno}: bad value {value!r} for {key}") from None
        try:
            RunConfig(**values)
        except ValidationError as exc:
            raise ConfigError(f"{source}:{lineno}: {exc}") from None
    return RunConfig(**values)


def load_config(path: str | Path | None) -> RunConfig:
    """Defaults when ``path`` is None or missing; otherwise the parsed file."""
    if path is None:
        return RunConfig()
    p = Path(path)
    if not p.exists():
        return RunConfig()
    return parse_config(p.read_text(), str(p))
