"""Transport-agnostic application services for toeplab workflows."""

from __future__ import annotations

import logging
from typing import Any, Mapping

from toeplab.application.ports import DescriptorCompute, ExperimentCatalog
from toeplab.core.config import GridConfig, load_grid_config
from toeplab.core.errors import ToepLabError
from toeplab.core.models import ExperimentInfo, ExperimentReport
from toeplab.core.payloads import ComputeRequestPayload, RunExperimentRequestPayload
from toeplab.core.result import AppResult

logger = logging.getLogger(__name__)


def resolve_config(overrides: Mapping[str, Any] | None, base: GridConfig | None = None) -> GridConfig:
    """Effective config: ``base`` (or environment defaults) with request overrides."""

    if base is None:
        return load_grid_config(overrides)
    return base.with_overrides(overrides)


class ListExperimentsUseCase:
    """List registered experiments with their descriptions and topics."""

    def __init__(self, catalog: ExperimentCatalog) -> None:
        self._catalog = catalog

    def execute(self) -> AppResult[list[ExperimentInfo]]:
        return AppResult.success(self._catalog.list())


class RunExperimentUseCase:
    """Resolve the config for a run request and execute the experiment."""

    def __init__(self, catalog: ExperimentCatalog, *, base_config: GridConfig | None = None) -> None:
        self._catalog = catalog
        self._base_config = base_config

    def execute(self, request: RunExperimentRequestPayload) -> AppResult[ExperimentReport]:
        try:
            cfg = resolve_config(request.overrides, self._base_config)
            report = self._catalog.run(request.experiment_id, cfg, seed=request.seed, params=request.params)
            return AppResult.success(report)
        except ToepLabError as exc:
            logger.info("experiment %s failed: %s", request.experiment_id, exc)
            return AppResult.failure(exc)


class ComputeUseCase:
    """Run a single compute verb on user descriptors."""

    def __init__(self, computer: DescriptorCompute, *, base_config: GridConfig | None = None) -> None:
        self._computer = computer
        self._base_config = base_config

    def execute(self, request: ComputeRequestPayload) -> AppResult[ExperimentReport]:
        try:
            cfg = resolve_config(request.overrides, self._base_config)
            return AppResult.success(self._computer.compute(request, cfg))
        except ToepLabError as exc:
            logger.info("compute %s failed: %s", request.verb, exc)
            return AppResult.failure(exc)
