"""HTTP route definitions for the toeplab API."""

from __future__ import annotations

from typing import Any

from fastapi import APIRouter, HTTPException, status

from toeplab.api.schemas import (
    ComputeRequestSchema,
    ErrorSchema,
    ExperimentInfoSchema,
    ExperimentListSchema,
    ReportSchema,
    RunExperimentRequestSchema,
)
from toeplab.application.use_cases import ComputeUseCase, ListExperimentsUseCase, RunExperimentUseCase
from toeplab.core.errors import AppError, ErrorCode, normalize_error
from toeplab.core.payloads import validate_compute_request, validate_run_experiment_request


def create_router(
    list_use_case: ListExperimentsUseCase,
    run_use_case: RunExperimentUseCase,
    compute_use_case: ComputeUseCase,
) -> APIRouter:
    """Build an APIRouter bound to application use-cases."""

    router = APIRouter()

    error_responses = {
        status.HTTP_400_BAD_REQUEST: {"model": ErrorSchema},
        status.HTTP_404_NOT_FOUND: {"model": ErrorSchema},
        status.HTTP_422_UNPROCESSABLE_CONTENT: {"model": ErrorSchema},
        status.HTTP_500_INTERNAL_SERVER_ERROR: {"model": ErrorSchema},
    }

    @router.get("/v1/experiments", response_model=ExperimentListSchema)
    def list_experiments() -> ExperimentListSchema:
        result = list_use_case.execute()
        if not result.ok or result.value is None:
            _raise_http_from_error(result.error or AppError(ErrorCode.INTERNAL_ERROR, "Unknown application error"))
        return ExperimentListSchema(experiments=[ExperimentInfoSchema(**info.to_mapping()) for info in result.value])

    @router.post("/v1/experiments/run", response_model=ReportSchema, responses=error_responses)
    def run_experiment(request: RunExperimentRequestSchema) -> ReportSchema:
        try:
            payload = validate_run_experiment_request(request.model_dump())
        except Exception as exc:
            _raise_http_from_error(normalize_error(exc))

        result = run_use_case.execute(payload)
        if not result.ok or result.value is None:
            _raise_http_from_error(result.error or AppError(ErrorCode.INTERNAL_ERROR, "Unknown application error"))
        return ReportSchema(**result.value.to_mapping())

    @router.post("/v1/compute", response_model=ReportSchema, responses=error_responses)
    def compute(request: ComputeRequestSchema) -> ReportSchema:
        try:
            payload = validate_compute_request(request.model_dump(by_alias=True))
        except Exception as exc:
            _raise_http_from_error(normalize_error(exc))

        result = compute_use_case.execute(payload)
        if not result.ok or result.value is None:
            _raise_http_from_error(result.error or AppError(ErrorCode.INTERNAL_ERROR, "Unknown application error"))
        return ReportSchema(**result.value.to_mapping())

    return router


def _raise_http_from_error(error: AppError) -> None:
    raise HTTPException(status_code=status_for_error(error), detail=_error_detail(error))


def status_for_error(error: AppError) -> int:
    if error.code in {
        ErrorCode.VALIDATION_ERROR,
        ErrorCode.CONFIG_INVALID,
        ErrorCode.PARSE_ERROR,
    }:
        return status.HTTP_400_BAD_REQUEST

    if error.code is ErrorCode.UNKNOWN_EXPERIMENT:
        return status.HTTP_404_NOT_FOUND

    if error.code in {
        ErrorCode.PRECONDITION_FAILED,
        ErrorCode.NUMERICAL_ERROR,
        ErrorCode.UNCERTAIN_RESULT,
    }:
        return status.HTTP_422_UNPROCESSABLE_CONTENT

    return status.HTTP_500_INTERNAL_SERVER_ERROR


def _error_detail(error: AppError) -> dict[str, Any]:
    return error.to_mapping()
