"""Domain-level error taxonomy and normalization utilities."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any


class ErrorCode(str, Enum):
    """Stable machine-readable error codes across adapters."""

    VALIDATION_ERROR = "VALIDATION_ERROR"
    CONFIG_INVALID = "CONFIG_INVALID"
    PARSE_ERROR = "PARSE_ERROR"
    UNKNOWN_EXPERIMENT = "UNKNOWN_EXPERIMENT"
    PRECONDITION_FAILED = "PRECONDITION_FAILED"
    NUMERICAL_ERROR = "NUMERICAL_ERROR"
    UNCERTAIN_RESULT = "UNCERTAIN_RESULT"
    INTERNAL_ERROR = "INTERNAL_ERROR"


USAGE_ERROR_CODES = frozenset(
    {
        ErrorCode.VALIDATION_ERROR,
        ErrorCode.CONFIG_INVALID,
        ErrorCode.PARSE_ERROR,
        ErrorCode.UNKNOWN_EXPERIMENT,
    }
)


@dataclass(frozen=True)
class AppError:
    """Transport-neutral structured error payload."""

    code: ErrorCode
    message: str
    details: dict[str, Any] | None = None

    def to_mapping(self) -> dict[str, Any]:
        mapped: dict[str, Any] = {
            "code": self.code.value,
            "message": self.message,
        }
        if self.details:
            mapped["details"] = self.details
        return mapped


class ToepLabError(Exception):
    """Base exception for toeplab with structured error metadata."""

    default_code = ErrorCode.INTERNAL_ERROR

    def __init__(
        self,
        message: str,
        *,
        code: ErrorCode | None = None,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message)
        self.code = code or self.default_code
        self.details = details

    def to_app_error(self) -> AppError:
        return AppError(code=self.code, message=str(self), details=self.details)


class ValidationError(ToepLabError):
    """Raised when incoming payload data is invalid."""

    default_code = ErrorCode.VALIDATION_ERROR


class ConfigInvalid(ToepLabError):
    """Raised when a grid configuration violates its invariants."""

    default_code = ErrorCode.CONFIG_INVALID


class ParseError(ToepLabError):
    """Raised when a symbol or function descriptor cannot be parsed.

    ``details["position"]`` holds a character offset for malformed JSON or a
    ``$.path`` for grammar violations.
    """

    default_code = ErrorCode.PARSE_ERROR

    def __init__(self, message: str, *, position: int | str | None = None) -> None:
        details = {"position": position} if position is not None else None
        super().__init__(message, details=details)
        self.position = position


class UnknownExperiment(ToepLabError):
    """Raised when an experiment id is not registered."""

    default_code = ErrorCode.UNKNOWN_EXPERIMENT


class PreconditionFailed(ToepLabError):
    """Base for operations called outside their domain."""

    default_code = ErrorCode.PRECONDITION_FAILED


class NumericalFailure(ToepLabError):
    """Base for computations that ran but could not meet their tolerances."""

    default_code = ErrorCode.NUMERICAL_ERROR


class ZeroFunction(PreconditionFailed):
    """The input function vanishes identically (up to tolerance)."""


class EvaluationTooCloseToBoundary(PreconditionFailed):
    """Power-series evaluation requested too close to the unit circle."""


class ZeroOnOrOutsideDisk(PreconditionFailed):
    """A Blaschke zero does not lie in the open unit disk."""


class NonpositiveMass(PreconditionFailed):
    """A singular atom carries a mass that is not strictly positive."""


class LambdaOutsideDisk(PreconditionFailed):
    """A point parameter is not in the open unit disk."""


class ThetaUnimodularAtLambda(PreconditionFailed):
    """|θ(λ)| is too close to 1 for the Crofoot transform."""


class NotFiniteBlaschke(PreconditionFailed):
    """The inner function carries singular atoms."""


class SizeExceedsTruncation(PreconditionFailed):
    """A finite-section size is larger than the truncation N."""


class NotInKernel(PreconditionFailed):
    """The function is not in the Toeplitz kernel at the required tolerance."""


class NotMaximal(PreconditionFailed):
    """The function is not a maximal function of the kernel."""


class AlphaDoesNotDivideInner(PreconditionFailed):
    """The requested inner factor does not divide the inner part of f."""


class NotOuter(PreconditionFailed):
    """The function failed the outerness test."""


class NonpositiveAtZero(PreconditionFailed):
    """The function value at the origin is not real and positive."""


class EvenN(PreconditionFailed):
    """The half-integer family needs an odd exponent."""


class AliasingOverflow(NumericalFailure):
    """Product energy above the truncation band exceeds the guard."""


class FactorisationFailed(NumericalFailure):
    """Inner-outer factorisation could not be completed."""


class TooManyBoundaryZeros(NumericalFailure):
    """The log-modulus clamp touched too many samples."""


class IllConditionedGram(NumericalFailure):
    """A Gram system is too ill-conditioned to solve."""


class LimitEstimationFailed(NumericalFailure):
    """One-sided limits at a jump did not converge."""


class UncertainDimension(ToepLabError):
    """The singular-value gap does not certify the kernel dimension.

    The candidate basis is attached as ``candidate`` so callers can still
    inspect it.
    """

    default_code = ErrorCode.UNCERTAIN_RESULT

    def __init__(self, message: str, *, candidate: Any = None, details: dict[str, Any] | None = None) -> None:
        super().__init__(message, details=details)
        self.candidate = candidate


def normalize_error(error: AppError | Exception | str) -> AppError:
    """Normalize arbitrary failures into a stable structured AppError."""

    if isinstance(error, AppError):
        return error

    if isinstance(error, ToepLabError):
        return error.to_app_error()

    if isinstance(error, Exception):
        message = str(error) or error.__class__.__name__
        return AppError(code=ErrorCode.INTERNAL_ERROR, message=message)

    return AppError(code=ErrorCode.INTERNAL_ERROR, message=str(error))
