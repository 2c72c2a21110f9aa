from __future__ import annotations

import pytest

from toeplab.core.errors import ErrorCode, LambdaOutsideDisk, ValidationError
from toeplab.core.validators import (
    coerce_complex,
    coerce_int,
    coerce_positive_float,
    coerce_sequence,
    validate_disk_point,
    validate_unimodular,
)


@pytest.mark.parametrize(
    ("raw", "expected"),
    [
        (0.5, 0.5 + 0j),
        ([0.2, -0.4], 0.2 - 0.4j),
        ("0.3,0.2", 0.3 + 0.2j),
        ("1+2i", 1 + 2j),
    ],
)
def test_coerce_complex_accepts_supported_forms(raw, expected: complex) -> None:
    assert coerce_complex(raw, field_name="z") == expected


@pytest.mark.parametrize("raw", [True, [1, 2, 3], "", "x,y", float("inf"), None])
def test_coerce_complex_rejects_bad_input(raw) -> None:
    with pytest.raises(ValidationError):
        coerce_complex(raw, field_name="z")


def test_validate_disk_point_rejects_boundary() -> None:
    with pytest.raises(LambdaOutsideDisk) as exc_info:
        validate_disk_point(1.0)

    assert exc_info.value.code == ErrorCode.PRECONDITION_FAILED


def test_validate_unimodular_checks_modulus() -> None:
    assert validate_unimodular([0.0, 1.0], field_name="mu") == 1j
    with pytest.raises(ValidationError):
        validate_unimodular(0.5, field_name="mu")


def test_coerce_int_accepts_integral_values() -> None:
    assert coerce_int(4, field_name="trials", low=1, high=10) == 4
    assert coerce_int(4.0, field_name="trials", low=1, high=10) == 4


@pytest.mark.parametrize("raw", [True, 2.5, "x", None, 0, 11])
def test_coerce_int_rejects_bad_values(raw) -> None:
    with pytest.raises(ValidationError) as exc_info:
        coerce_int(raw, field_name="trials", low=1, high=10)

    assert exc_info.value.details["field"] == "trials"


@pytest.mark.parametrize("raw", [0.0, -1e-6, "nan", float("inf"), False])
def test_coerce_positive_float_rejects_bad_values(raw) -> None:
    with pytest.raises(ValidationError):
        coerce_positive_float(raw, field_name="tolerance")


def test_coerce_sequence_needs_a_non_empty_list() -> None:
    assert coerce_sequence((1, 2), field_name="orders") == [1, 2]
    with pytest.raises(ValidationError):
        coerce_sequence([], field_name="orders")
    with pytest.raises(ValidationError):
        coerce_sequence("1,3", field_name="orders")
