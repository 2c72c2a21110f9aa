"""HTTP-facing request/response schemas for the toeplab API."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field

JsonFloat = float | str


class RunExperimentRequestSchema(BaseModel):
    """Request payload for the run-experiment endpoint."""

    experiment_id: str = Field(..., description="Registered experiment id, see GET /v1/experiments")
    overrides: dict[str, Any] = Field(default_factory=dict, description="GridConfig fields to override")
    seed: int | None = Field(default=None, description="Generator seed; the registry default when omitted")
    params: dict[str, Any] = Field(default_factory=dict, description="Experiment parameters")


class ComputeRequestSchema(BaseModel):
    """Request payload for the single-verb compute endpoint."""

    verb: str = Field(..., description="One of kernel, inner-outer, outer-test, crofoot, conjugate, eigen, ...")
    symbol: dict[str, Any] | str | None = Field(default=None, description="Symbol descriptor")
    function: dict[str, Any] | str | None = Field(default=None, description="Hardy function descriptor")
    lam: list[float] | float | str | None = Field(default=None, alias="lambda", description="Point in the disk")
    size: int | None = Field(default=None, description="Finite-section size")
    overrides: dict[str, Any] = Field(default_factory=dict, description="GridConfig fields to override")
    seed: int | None = Field(default=None, description="Generator seed")
    params: dict[str, Any] = Field(default_factory=dict, description="Verb parameters")

    model_config = {"populate_by_name": True}


class ExperimentInfoSchema(BaseModel):
    id: str
    description: str
    anchor: str


class ExperimentListSchema(BaseModel):
    """Response schema for the experiment listing."""

    experiments: list[ExperimentInfoSchema]


class CheckSchema(BaseModel):
    name: str
    value: JsonFloat
    tolerance: JsonFloat
    comparison: str
    passed: bool


class ReportSchema(BaseModel):
    """Experiment or compute report (schema_version 1)."""

    schema_version: str
    experiment_id: str
    status: str
    metrics: dict[str, JsonFloat]
    checks: list[CheckSchema]
    artifacts: dict[str, list[list[float]]]
    config: dict[str, Any]
    seed: int
    params: dict[str, Any]
    wall_time: float
    notes: list[str]


class ErrorSchema(BaseModel):
    """Error response model."""

    detail: dict[str, Any]
