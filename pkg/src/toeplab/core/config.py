"""Grid and tolerance configuration shared by every numerical module."""

from __future__ import annotations

import math
import os
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Mapping

from toeplab.core.errors import ConfigInvalid

ENV_PREFIX = "TOEPLAB_"

_INT_FIELDS = ("grid_size", "truncation")
_TOLERANCE_FIELDS = (
    "tol_coeff",
    "tol_residual",
    "tol_outer",
    "tol_branch",
    "tol_section",
    "tol_singular",
)


@dataclass(frozen=True)
class GridConfig:
    """Sampling grid, coefficient band and tolerance tiers.

    ``grid_size`` samples sit at the half-offset nodes exp(2πi(k+½)/grid_size);
    the trusted coefficient band is −truncation..truncation.
    """

    grid_size: int = 4096
    truncation: int = 256
    tol_coeff: float = 1e-10
    tol_residual: float = 1e-7
    tol_outer: float = 1e-3
    tol_branch: float = 1e-4
    tol_section: float = 1e-2
    tol_singular: float = 5e-2

    def __post_init__(self) -> None:
        for name in _INT_FIELDS:
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value <= 0:
                raise ConfigInvalid(f"{name} must be a positive integer", details={"field": name})
        if self.grid_size & (self.grid_size - 1):
            raise ConfigInvalid("grid_size must be a power of two", details={"field": "grid_size"})
        if self.grid_size < 4 * self.truncation + 4:
            raise ConfigInvalid(
                f"grid_size must be >= 4*truncation+4 (got {self.grid_size} for N={self.truncation})",
                details={"field": "grid_size"},
            )
        for name in _TOLERANCE_FIELDS:
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0:
                raise ConfigInvalid(f"{name} must be a finite number > 0", details={"field": name})

    def with_overrides(self, overrides: Mapping[str, Any] | None) -> "GridConfig":
        """Return a validated copy with the given fields replaced."""

        if not overrides:
            return self
        known = {item.name for item in fields(self)}
        updates: dict[str, Any] = {}
        for key, value in overrides.items():
            if value is None:
                continue
            if key not in known:
                raise ConfigInvalid(f"Unknown config field: {key}", details={"field": key})
            updates[key] = _coerce_field(key, value)
        return replace(self, **updates)

    def to_mapping(self) -> dict[str, Any]:
        return asdict(self)

    @property
    def nyquist(self) -> int:
        return self.grid_size // 2


def load_grid_config(
    overrides: Mapping[str, Any] | None = None,
    *,
    environ: Mapping[str, str] | None = None,
) -> GridConfig:
    """Build the effective config: defaults, then TOEPLAB_* variables, then overrides."""

    env = os.environ if environ is None else environ
    from_env: dict[str, Any] = {}
    for item in fields(GridConfig):
        raw = env.get(f"{ENV_PREFIX}{item.name.upper()}")
        if raw is not None and raw.strip():
            from_env[item.name] = raw.strip()
    return GridConfig().with_overrides(from_env).with_overrides(overrides)


def _coerce_field(name: str, value: Any) -> int | float:
    try:
        if name in _INT_FIELDS:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(value)
            return int(value)
        return float(value)
    except (TypeError, ValueError) as exc:
        raise ConfigInvalid(f"{name} must be numeric, got {value!r}", details={"field": name}) from exc
