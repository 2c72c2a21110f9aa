"""Experiment registry: named, seeded, tolerance-checked runs that produce reports."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Any, Callable, Iterator, Mapping

import numpy as np

from toeplab.core.config import GridConfig
from toeplab.core.errors import UnknownExperiment, ValidationError
from toeplab.core.models import ExperimentInfo, ExperimentOutcome, ExperimentReport

logger = logging.getLogger(__name__)

DEFAULT_SEED = 20240611

ExperimentBody = Callable[[GridConfig, np.random.Generator, Mapping[str, Any]], ExperimentOutcome]


@dataclass(frozen=True)
class Experiment:
    experiment_id: str
    description: str
    anchor: str
    body: ExperimentBody
    defaults: Mapping[str, Any]

    def info(self) -> ExperimentInfo:
        return ExperimentInfo(experiment_id=self.experiment_id, description=self.description, anchor=self.anchor)


class ExperimentRegistry:
    """Id -> experiment map; ``register`` is used as a decorator by the catalog."""

    def __init__(self) -> None:
        self._experiments: dict[str, Experiment] = {}

    def register(
        self,
        experiment_id: str,
        *,
        description: str,
        anchor: str,
        defaults: Mapping[str, Any] | None = None,
    ) -> Callable[[ExperimentBody], ExperimentBody]:
        def decorator(body: ExperimentBody) -> ExperimentBody:
            if experiment_id in self._experiments:
                raise ValueError(f"experiment {experiment_id!r} is already registered")
            self._experiments[experiment_id] = Experiment(
                experiment_id=experiment_id,
                description=description,
                anchor=anchor,
                body=body,
                defaults=dict(defaults or {}),
            )
            return body

        return decorator

    def __contains__(self, experiment_id: object) -> bool:
        return experiment_id in self._experiments

    def __iter__(self) -> Iterator[Experiment]:
        return iter(self._experiments[key] for key in sorted(self._experiments))

    def __len__(self) -> int:
        return len(self._experiments)

    def list(self) -> list[ExperimentInfo]:
        return [experiment.info() for experiment in self]

    def get(self, experiment_id: str) -> Experiment:
        try:
            return self._experiments[experiment_id]
        except KeyError:
            raise UnknownExperiment(
                f"unknown experiment {experiment_id!r}",
                details={"experiment_id": experiment_id, "known": sorted(self._experiments)},
            ) from None

    def run(
        self,
        experiment_id: str,
        cfg: GridConfig,
        *,
        seed: int | None = None,
        params: Mapping[str, Any] | None = None,
    ) -> ExperimentReport:
        """Run one experiment with a fresh generator; the report echoes config, seed and params."""

        experiment = self.get(experiment_id)
        resolved = _merge_params(experiment, params)
        seed = DEFAULT_SEED if seed is None else int(seed)
        rng = np.random.default_rng(seed)

        logger.info("running experiment %s (seed=%d, params=%s)", experiment_id, seed, resolved)
        started = time.perf_counter()
        outcome = experiment.body(cfg, rng, resolved)
        elapsed = time.perf_counter() - started

        report = ExperimentReport.from_outcome(
            experiment_id,
            outcome,
            config=cfg.to_mapping(),
            seed=seed,
            params=resolved,
            wall_time=elapsed,
        )
        logger.info("experiment %s finished: %s in %.2fs", experiment_id, report.status.value, elapsed)
        logger.debug("experiment %s metrics: %s", experiment_id, report.metrics)
        for check in report.checks:
            if not check.passed:
                logger.warning("experiment %s: check %s failed (%g %s %g)", experiment_id, check.name, check.value, check.comparison.value, check.tolerance)
        return report


def _merge_params(experiment: Experiment, params: Mapping[str, Any] | None) -> dict[str, Any]:
    merged = dict(experiment.defaults)
    for key, value in (params or {}).items():
        if key not in experiment.defaults:
            raise ValidationError(
                f"experiment {experiment.experiment_id!r} has no parameter {key!r}",
                details={"field": key, "known": sorted(experiment.defaults)},
            )
        merged[key] = value
    return merged


REGISTRY = ExperimentRegistry()
