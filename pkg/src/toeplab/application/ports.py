"""Application-layer ports (interfaces) for method modules."""

from __future__ import annotations

from typing import Any, Mapping, Protocol

from toeplab.core.config import GridConfig
from toeplab.core.models import ExperimentInfo, ExperimentReport
from toeplab.core.payloads import ComputeRequestPayload


class ExperimentCatalog(Protocol):
    """Port for registries that list and run named experiments."""

    def list(self) -> list[ExperimentInfo]:
        """Return listing entries sorted by id."""

    def run(
        self,
        experiment_id: str,
        cfg: GridConfig,
        *,
        seed: int | None = None,
        params: Mapping[str, Any] | None = None,
    ) -> ExperimentReport:
        """Run one experiment and produce its report."""


class DescriptorCompute(Protocol):
    """Port for method modules that evaluate a compute verb on descriptors."""

    def compute(self, request: ComputeRequestPayload, cfg: GridConfig) -> ExperimentReport:
        """Evaluate ``request.verb`` and produce a report."""
