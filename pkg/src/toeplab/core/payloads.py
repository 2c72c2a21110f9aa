"""Shared payload mapping and validation for adapter-facing contracts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

from toeplab.core.errors import ValidationError
from toeplab.core.validators import coerce_complex

COMPUTE_VERBS = (
    "kernel",
    "inner-outer",
    "outer-test",
    "crofoot",
    "conjugate",
    "eigen",
    "maximal-test",
    "factor",
    "rigidity",
    "jumps",
    "hayashi",
)

# verb -> descriptors it needs
VERB_INPUTS: dict[str, tuple[str, ...]] = {
    "kernel": ("symbol",),
    "inner-outer": ("function",),
    "outer-test": ("function",),
    "crofoot": ("symbol", "lambda"),
    "conjugate": ("symbol", "function"),
    "eigen": ("symbol", "function"),
    "maximal-test": ("symbol", "function"),
    "factor": ("symbol", "function"),
    "rigidity": ("function",),
    "jumps": ("symbol",),
    "hayashi": (),
}

Descriptor = Mapping[str, Any] | str


@dataclass(frozen=True)
class RunExperimentRequestPayload:
    """Canonical request payload for running one registered experiment."""

    experiment_id: str
    overrides: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None
    params: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_mapping(cls, raw: Mapping[str, Any]) -> "RunExperimentRequestPayload":
        _require_object(raw, "request")
        experiment_id = str(raw.get("experiment_id") or raw.get("id") or "").strip()
        if not experiment_id:
            raise ValidationError("experiment_id must be a non-empty string")
        return cls(
            experiment_id=experiment_id,
            overrides=_coerce_mapping(raw.get("overrides"), "overrides"),
            seed=_coerce_optional_seed(raw.get("seed")),
            params=_coerce_mapping(raw.get("params"), "params"),
        )


@dataclass(frozen=True)
class ComputeRequestPayload:
    """Canonical request payload for a single-object computation."""

    verb: str
    symbol: Descriptor | None = None
    function: Descriptor | None = None
    lam: complex | None = None
    size: int | None = None
    overrides: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None
    params: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_mapping(cls, raw: Mapping[str, Any]) -> "ComputeRequestPayload":
        _require_object(raw, "request")
        verb = str(raw.get("verb") or "").strip().lower()
        if verb not in COMPUTE_VERBS:
            raise ValidationError(
                f"verb must be one of: {', '.join(COMPUTE_VERBS)}",
                details={"field": "verb", "value": verb},
            )

        symbol = _coerce_descriptor(raw.get("symbol"), "symbol")
        function = _coerce_descriptor(raw.get("function"), "function")
        lam_raw = raw.get("lambda", raw.get("lam"))
        lam = None if lam_raw is None else coerce_complex(lam_raw, field_name="lambda")

        provided = {"symbol": symbol is not None, "function": function is not None, "lambda": lam is not None}
        missing = [name for name in VERB_INPUTS[verb] if not provided[name]]
        if missing:
            raise ValidationError(
                f"verb {verb!r} requires: {', '.join(missing)}",
                details={"field": missing[0], "verb": verb},
            )

        size_raw = raw.get("size")
        return cls(
            verb=verb,
            symbol=symbol,
            function=function,
            lam=lam,
            size=None if size_raw is None else _coerce_positive_int(size_raw, "size"),
            overrides=_coerce_mapping(raw.get("overrides"), "overrides"),
            seed=_coerce_optional_seed(raw.get("seed")),
            params=_coerce_mapping(raw.get("params"), "params"),
        )


def validate_run_experiment_request(raw: Mapping[str, Any]) -> RunExperimentRequestPayload:
    """Map arbitrary adapter payload into canonical run-experiment request object."""

    try:
        return RunExperimentRequestPayload.from_mapping(raw)
    except ValidationError:
        raise
    except Exception as exc:  # pragma: no cover
        raise ValidationError(str(exc)) from exc


def validate_compute_request(raw: Mapping[str, Any]) -> ComputeRequestPayload:
    """Map arbitrary adapter payload into canonical compute request object."""

    try:
        return ComputeRequestPayload.from_mapping(raw)
    except ValidationError:
        raise
    except Exception as exc:  # pragma: no cover
        raise ValidationError(str(exc)) from exc


def _require_object(raw: Any, field_name: str) -> None:
    if not isinstance(raw, Mapping):
        raise ValidationError(f"{field_name} must be a JSON object")


def _coerce_mapping(value: Any, field_name: str) -> dict[str, Any]:
    if value is None:
        return {}
    if not isinstance(value, Mapping):
        raise ValidationError(f"{field_name} must be an object", details={"field": field_name})
    return {str(key): item for key, item in value.items()}


def _coerce_descriptor(value: Any, field_name: str) -> Descriptor | None:
    if value is None:
        return None
    if isinstance(value, str):
        if not value.strip():
            raise ValidationError(f"{field_name} must not be empty", details={"field": field_name})
        return value
    if isinstance(value, Mapping):
        return dict(value)
    raise ValidationError(f"{field_name} must be a descriptor object or JSON text", details={"field": field_name})


def _coerce_optional_seed(value: Any) -> int | None:
    if value is None:
        return None
    if isinstance(value, bool):
        raise ValidationError("seed must be an integer", details={"field": "seed"})
    if isinstance(value, float) and not (math.isfinite(value) and value.is_integer()):
        raise ValidationError("seed must be an integer", details={"field": "seed"})
    try:
        seed = int(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError("seed must be an integer", details={"field": "seed"}) from exc
    if seed < 0:
        raise ValidationError("seed must be >= 0", details={"field": "seed"})
    return seed


def _coerce_positive_int(value: Any, field_name: str) -> int:
    if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
        raise ValidationError(f"{field_name} must be an integer > 0", details={"field": field_name})
    try:
        number = int(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{field_name} must be an integer > 0", details={"field": field_name}) from exc

    if number <= 0:
        raise ValidationError(f"{field_name} must be > 0", details={"field": field_name})
    return number
