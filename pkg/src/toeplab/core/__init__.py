"""Core domain layer for toeplab: config, errors, reports and payloads."""

from toeplab.core.config import GridConfig, load_grid_config
from toeplab.core.errors import AppError, ErrorCode, ToepLabError, ValidationError
from toeplab.core.models import Check, ExperimentInfo, ExperimentOutcome, ExperimentReport, ReportStatus
from toeplab.core.result import AppResult

__all__ = [
    "AppError",
    "AppResult",
    "Check",
    "ErrorCode",
    "ExperimentInfo",
    "ExperimentOutcome",
    "ExperimentReport",
    "GridConfig",
    "ReportStatus",
    "ToepLabError",
    "ValidationError",
    "load_grid_config",
]
