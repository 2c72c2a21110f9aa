"""Typed result wrapper returned by every application use case."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Generic, TypeVar

from toeplab.core.errors import AppError, ErrorCode, ToepLabError, normalize_error

T = TypeVar("T")


@dataclass(frozen=True)
class AppResult(Generic[T]):
    """Either a value or a normalized AppError, never both."""

    ok: bool
    value: T | None = None
    error: AppError | None = None

    @classmethod
    def success(cls, value: T) -> "AppResult[T]":
        return cls(ok=True, value=value)

    @classmethod
    def failure(cls, error: AppError | Exception | str) -> "AppResult[T]":
        return cls(ok=False, error=normalize_error(error))

    @classmethod
    def capture(cls, call: Callable[[], T]) -> "AppResult[T]":
        """Run ``call`` and fold any toeplab error into a failure result."""

        try:
            return cls.success(call())
        except ToepLabError as exc:
            return cls.failure(exc)

    def unwrap(self) -> T:
        """Return the value or re-raise the stored error as ToepLabError."""

        if self.ok and self.value is not None:
            return self.value
        error = self.error or AppError(ErrorCode.INTERNAL_ERROR, "Unknown application error")
        raise ToepLabError(error.message, code=error.code, details=error.details)
