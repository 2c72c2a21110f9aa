"""Validation helpers shared by descriptors, payloads and adapters."""

from __future__ import annotations

import math
from typing import Any

from toeplab.core.errors import ErrorCode, LambdaOutsideDisk, ValidationError


def coerce_complex(value: Any, *, field_name: str) -> complex:
    """Accept a real number, a complex, a [re, im] pair or a "re,im" string."""

    if isinstance(value, bool):
        raise ValidationError(f"{field_name} must be numeric", details={"field": field_name})
    if isinstance(value, (int, float, complex)):
        number = complex(value)
    elif isinstance(value, str):
        number = _parse_complex_token(value, field_name)
    elif isinstance(value, (list, tuple)) and len(value) == 2:
        try:
            number = complex(float(value[0]), float(value[1]))
        except (TypeError, ValueError) as exc:
            raise ValidationError(
                f"{field_name} must be a [re, im] pair of numbers",
                details={"field": field_name},
            ) from exc
    else:
        raise ValidationError(
            f"{field_name} must be a number or a [re, im] pair",
            details={"field": field_name},
        )

    if not (math.isfinite(number.real) and math.isfinite(number.imag)):
        raise ValidationError(f"{field_name} must be finite", details={"field": field_name})
    return number


def validate_disk_point(value: Any, *, field_name: str = "lambda") -> complex:
    """Coerce a value and require it to lie in the open unit disk."""

    point = coerce_complex(value, field_name=field_name)
    if abs(point) >= 1.0:
        raise LambdaOutsideDisk(
            f"{field_name} must satisfy |{field_name}| < 1, got {point}",
            details={"field": field_name, "modulus": abs(point)},
        )
    return point


def validate_unimodular(value: Any, *, field_name: str, tolerance: float = 1e-9) -> complex:
    """Coerce a value and require modulus one."""

    point = coerce_complex(value, field_name=field_name)
    if abs(abs(point) - 1.0) > tolerance:
        raise ValidationError(
            f"{field_name} must have modulus 1, got |{field_name}| = {abs(point):.6g}",
            code=ErrorCode.VALIDATION_ERROR,
            details={"field": field_name},
        )
    return point


def complex_to_pair(value: complex) -> list[float]:
    return [float(value.real), float(value.imag)]


def _parse_complex_token(token: str, field_name: str) -> complex:
    text = token.strip()
    if not text:
        raise ValidationError(f"{field_name} must be a non-empty number", details={"field": field_name})
    parts = [part.strip() for part in text.split(",")]
    try:
        if len(parts) == 1:
            return complex(parts[0].replace("i", "j"))
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise ValidationError(
            f"{field_name} must look like 're,im', got {token!r}",
            details={"field": field_name},
        ) from exc
    raise ValidationError(f"{field_name} must look like 're,im', got {token!r}", details={"field": field_name})


def coerce_int(value: Any, *, field_name: str, low: int, high: int) -> int:
    """Accept an integer (or an integral float) in low..high."""

    if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
        raise ValidationError(f"{field_name} must be an integer", details={"field": field_name})
    try:
        number = int(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{field_name} must be an integer", details={"field": field_name}) from exc
    if not low <= number <= high:
        raise ValidationError(
            f"{field_name} must be in {low}..{high}",
            details={"field": field_name, "value": number},
        )
    return number


def coerce_positive_float(value: Any, *, field_name: str) -> float:
    if isinstance(value, bool):
        raise ValidationError(f"{field_name} must be a positive number", details={"field": field_name})
    try:
        number = float(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{field_name} must be a positive number", details={"field": field_name}) from exc
    if not (math.isfinite(number) and number > 0.0):
        raise ValidationError(f"{field_name} must be a positive number", details={"field": field_name})
    return number


def coerce_sequence(value: Any, *, field_name: str) -> list[Any]:
    """A non-empty list or tuple, as a list."""

    if not isinstance(value, (list, tuple)) or not value:
        raise ValidationError(f"{field_name} must be a non-empty list", details={"field": field_name})
    return list(value)
