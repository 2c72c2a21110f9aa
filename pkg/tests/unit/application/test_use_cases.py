from __future__ import annotations

from typing import Any, Mapping

from toeplab.application.use_cases import (
    ComputeUseCase,
    ListExperimentsUseCase,
    RunExperimentUseCase,
    resolve_config,
)
from toeplab.core.config import GridConfig
from toeplab.core.errors import ErrorCode, UnknownExperiment, ZeroFunction
from toeplab.core.models import ExperimentInfo, ExperimentOutcome, ExperimentReport
from toeplab.core.payloads import ComputeRequestPayload, RunExperimentRequestPayload


class RecordingCatalog:
    def __init__(self) -> None:
        self.calls: list[tuple[str, GridConfig, int | None, Mapping[str, Any] | None]] = []

    def list(self) -> list[ExperimentInfo]:
        return [ExperimentInfo(experiment_id="stub", description="stub experiment", anchor="stubs")]

    def run(self, experiment_id: str, cfg: GridConfig, *, seed: int | None = None, params=None) -> ExperimentReport:
        if experiment_id != "stub":
            raise UnknownExperiment(f"unknown experiment {experiment_id!r}")
        self.calls.append((experiment_id, cfg, seed, params))
        return ExperimentReport.from_outcome(experiment_id, ExperimentOutcome(), config=cfg.to_mapping(), seed=seed or 0)


class BrokenComputer:
    def compute(self, request: ComputeRequestPayload, cfg: GridConfig) -> ExperimentReport:
        raise ZeroFunction("nothing to factor")


def test_list_experiments_wraps_catalog() -> None:
    result = ListExperimentsUseCase(RecordingCatalog()).execute()

    assert result.ok
    assert [info.experiment_id for info in result.value] == ["stub"]


def test_run_experiment_applies_overrides_on_base_config() -> None:
    catalog = RecordingCatalog()
    use_case = RunExperimentUseCase(catalog, base_config=GridConfig(grid_size=2048, truncation=128))

    result = use_case.execute(RunExperimentRequestPayload(experiment_id="stub", overrides={"tol_residual": 1e-8}, seed=3))

    assert result.ok
    _, cfg, seed, _ = catalog.calls[0]
    assert cfg.grid_size == 2048
    assert cfg.tol_residual == 1e-8
    assert seed == 3


def test_run_experiment_reports_unknown_id() -> None:
    result = RunExperimentUseCase(RecordingCatalog()).execute(RunExperimentRequestPayload(experiment_id="missing"))

    assert not result.ok
    assert result.error.code == ErrorCode.UNKNOWN_EXPERIMENT


def test_invalid_overrides_become_config_errors() -> None:
    result = RunExperimentUseCase(RecordingCatalog()).execute(
        RunExperimentRequestPayload(experiment_id="stub", overrides={"grid_size": 1000})
    )

    assert not result.ok
    assert result.error.code == ErrorCode.CONFIG_INVALID


def test_compute_failures_are_normalized() -> None:
    result = ComputeUseCase(BrokenComputer()).execute(ComputeRequestPayload(verb="inner-outer", function={"constant": 0.0}))

    assert not result.ok
    assert result.error.code == ErrorCode.PRECONDITION_FAILED
    assert result.error.message == "nothing to factor"


def test_resolve_config_reads_environment_without_base(monkeypatch) -> None:
    monkeypatch.setenv("TOEPLAB_TRUNCATION", "128")

    assert resolve_config(None).truncation == 128
    assert resolve_config({"truncation": 64}, GridConfig()).truncation == 64
