"""Core report models shared by the experiment registry and every adapter."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Mapping

import numpy as np

from toeplab.core.errors import ValidationError

SCHEMA_VERSION = "1"
ARTIFACT_CAP = 1024


class ReportStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    UNCERTAIN = "uncertain"


class Comparison(str, Enum):
    """How a check compares its measured value against the tolerance."""

    AT_MOST = "<="
    AT_LEAST = ">="
    EQUAL = "=="


@dataclass(frozen=True)
class Check:
    """One tolerance-checked measurement of an experiment."""

    name: str
    value: float
    tolerance: float
    comparison: Comparison = Comparison.AT_MOST
    passed: bool = False

    @classmethod
    def at_most(cls, name: str, value: float, tolerance: float) -> "Check":
        return cls(name, float(value), float(tolerance), Comparison.AT_MOST, bool(value <= tolerance))

    @classmethod
    def at_least(cls, name: str, value: float, tolerance: float) -> "Check":
        return cls(name, float(value), float(tolerance), Comparison.AT_LEAST, bool(value >= tolerance))

    @classmethod
    def equal(cls, name: str, value: float, expected: float) -> "Check":
        return cls(name, float(value), float(expected), Comparison.EQUAL, bool(value == expected))

    @classmethod
    def holds(cls, name: str, condition: bool) -> "Check":
        """Boolean check recorded as 1.0 == 1.0."""

        return cls.equal(name, 1.0 if condition else 0.0, 1.0)

    def to_mapping(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "value": _json_float(self.value),
            "tolerance": _json_float(self.tolerance),
            "comparison": self.comparison.value,
            "passed": self.passed,
        }

    @classmethod
    def from_mapping(cls, raw: Mapping[str, Any]) -> "Check":
        try:
            return cls(
                name=str(raw["name"]),
                value=_float_from_json(raw["value"]),
                tolerance=_float_from_json(raw["tolerance"]),
                comparison=Comparison(raw.get("comparison", Comparison.AT_MOST.value)),
                passed=bool(raw["passed"]),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise ValidationError(f"malformed check entry: {exc}") from exc


@dataclass(frozen=True)
class ExperimentInfo:
    """Listing entry: id, one-line description and the topic it reproduces."""

    experiment_id: str
    description: str
    anchor: str

    def to_mapping(self) -> dict[str, str]:
        return {"id": self.experiment_id, "description": self.description, "anchor": self.anchor}


@dataclass(frozen=True)
class ExperimentOutcome:
    """What an experiment body returns; the runner turns it into a report."""

    checks: tuple[Check, ...] = field(default_factory=tuple)
    metrics: dict[str, float] = field(default_factory=dict)
    artifacts: dict[str, Any] = field(default_factory=dict)
    uncertain: bool = False
    notes: tuple[str, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class ExperimentReport:
    """Machine-readable record of one experiment or compute run."""

    experiment_id: str
    status: ReportStatus
    metrics: dict[str, float]
    checks: tuple[Check, ...]
    artifacts: dict[str, list[list[float]]]
    config: dict[str, Any]
    seed: int
    params: dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0
    notes: tuple[str, ...] = field(default_factory=tuple)
    schema_version: str = SCHEMA_VERSION

    @classmethod
    def from_outcome(
        cls,
        experiment_id: str,
        outcome: ExperimentOutcome,
        *,
        config: Mapping[str, Any],
        seed: int,
        params: Mapping[str, Any] | None = None,
        wall_time: float = 0.0,
    ) -> "ExperimentReport":
        return cls(
            experiment_id=experiment_id,
            status=resolve_status(outcome.checks, uncertain=outcome.uncertain),
            metrics={name: float(value) for name, value in outcome.metrics.items()},
            checks=tuple(outcome.checks),
            artifacts={name: encode_artifact(values) for name, values in outcome.artifacts.items()},
            config=dict(config),
            seed=int(seed),
            params=dict(params or {}),
            wall_time=float(wall_time),
            notes=tuple(outcome.notes),
        )

    @property
    def passed(self) -> bool:
        return self.status is ReportStatus.PASS

    def to_mapping(self) -> dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "experiment_id": self.experiment_id,
            "status": self.status.value,
            "metrics": {name: _json_float(value) for name, value in self.metrics.items()},
            "checks": [check.to_mapping() for check in self.checks],
            "artifacts": {name: [list(pair) for pair in values] for name, values in self.artifacts.items()},
            "config": dict(self.config),
            "seed": self.seed,
            "params": dict(self.params),
            "wall_time": self.wall_time,
            "notes": list(self.notes),
        }

    @classmethod
    def from_mapping(cls, raw: Mapping[str, Any]) -> "ExperimentReport":
        if not isinstance(raw, Mapping):
            raise ValidationError("report must be an object")
        version = str(raw.get("schema_version", ""))
        if version != SCHEMA_VERSION:
            raise ValidationError(f"unsupported report schema_version {version!r}", details={"expected": SCHEMA_VERSION})
        try:
            return cls(
                experiment_id=str(raw["experiment_id"]),
                status=ReportStatus(raw["status"]),
                metrics={str(k): _float_from_json(v) for k, v in dict(raw.get("metrics", {})).items()},
                checks=tuple(Check.from_mapping(item) for item in raw.get("checks", [])),
                artifacts={str(k): [[float(re), float(im)] for re, im in v] for k, v in dict(raw.get("artifacts", {})).items()},
                config=dict(raw.get("config", {})),
                seed=int(raw["seed"]),
                params=dict(raw.get("params", {})),
                wall_time=float(raw.get("wall_time", 0.0)),
                notes=tuple(str(note) for note in raw.get("notes", [])),
                schema_version=version,
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise ValidationError(f"malformed report: {exc}") from exc

    def to_json(self, *, indent: int | None = 2) -> str:
        return json.dumps(self.to_mapping(), sort_keys=True, indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentReport":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"report is not valid JSON: {exc.msg}", details={"position": exc.pos}) from exc
        return cls.from_mapping(raw)


def resolve_status(checks: Iterable[Check], *, uncertain: bool = False) -> ReportStatus:
    checks = tuple(checks)
    if uncertain:
        return ReportStatus.UNCERTAIN
    return ReportStatus.PASS if all(check.passed for check in checks) else ReportStatus.FAIL


def encode_artifact(values: Any) -> list[list[float]]:
    """Flatten complex data into at most ``ARTIFACT_CAP`` [re, im] pairs."""

    array = np.ravel(np.asarray(values, dtype=np.complex128))[:ARTIFACT_CAP]
    return [[float(v.real), float(v.imag)] for v in array]


def _json_float(value: float) -> float | str:
    if math.isfinite(value):
        return float(value)
    return "inf" if value > 0 else ("-inf" if value < 0 else "nan")


def _float_from_json(value: Any) -> float:
    return float(value)
