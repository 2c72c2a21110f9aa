from __future__ import annotations

import pytest

from toeplab.boundary.functions import polynomial
from toeplab.core.errors import LambdaOutsideDisk, NotInKernel, NotMaximal, NotOuter
from toeplab.factorization.factor import (
    RigidityVerdict,
    maximal_factorisation,
    maximal_test,
    modified_factorisation,
    square_rigidity_probe,
    symbol_ratio_deviation,
)
from toeplab.toeplitz.descriptors import parse_symbol


@pytest.fixture
def symbol(small_cfg):
    return parse_symbol({"conj": {"power": 3}}, small_cfg)


def test_reversed_outer_polynomial_is_maximal(symbol, small_cfg) -> None:
    certificate = maximal_test(symbol, polynomial([0.5, 0.0, 2.0], small_cfg))

    assert certificate.is_maximal
    assert certificate.analytic_defect < 1e-12
    assert certificate.direct_agrees is True
    assert certificate.direct_deviation < 1e-8


def test_polynomial_with_inner_reversal_is_not_maximal(symbol, small_cfg) -> None:
    certificate = maximal_test(symbol, polynomial([2.0, 0.0, 0.5], small_cfg))

    assert not certificate.is_maximal
    assert certificate.direct_agrees is True


def test_maximal_test_requires_kernel_membership(symbol, small_cfg) -> None:
    with pytest.raises(NotInKernel):
        maximal_test(symbol, polynomial([0.0, 0.0, 0.0, 1.0], small_cfg))


def test_symbol_ratio_is_constant_for_maximal_function(symbol, small_cfg) -> None:
    assert symbol_ratio_deviation(symbol, polynomial([1.0, 0.0, 4.0], small_cfg)) < 1e-8


def test_maximal_factorisation_rebuilds_symbol(symbol, small_cfg) -> None:
    factors = maximal_factorisation(symbol, polynomial([0.5, 0.0, 2.0], small_cfg))

    assert factors.reconstruction_residual < 1e-10
    assert factors.outer_factor.evaluator(0.0).real > 0.0


def test_maximal_factorisation_rejects_non_maximal(symbol, small_cfg) -> None:
    with pytest.raises(NotMaximal):
        maximal_factorisation(symbol, polynomial([2.0, 0.0, 0.5], small_cfg))


def test_modified_factorisation_rebuilds_symbol(symbol, small_cfg) -> None:
    factors = modified_factorisation(symbol, polynomial([0.5, 0.0, 2.0], small_cfg), 0.3 + 0.2j)

    assert factors.lam == 0.3 + 0.2j
    assert factors.reconstruction_residual < 1e-10


def test_modified_factorisation_rejects_lambda_on_circle(symbol, small_cfg) -> None:
    with pytest.raises(LambdaOutsideDisk):
        modified_factorisation(symbol, polynomial([0.5, 0.0, 2.0], small_cfg), 1.0)


def test_invertible_outer_is_rigid_at_scale(small_cfg) -> None:
    probe = square_rigidity_probe(polynomial([2.0, 1.0], small_cfg), size=32)

    assert probe.verdict is RigidityVerdict.RIGID_AT_SCALE
    assert probe.dimension == 1


def test_square_of_boundary_zero_is_not_rigid(cfg) -> None:
    probe = square_rigidity_probe(polynomial([1.0, 2.0, 1.0], cfg), size=32)

    assert probe.verdict is RigidityVerdict.NOT_RIGID
    assert probe.dimension == 3


def test_rigidity_probe_needs_outer_input(small_cfg) -> None:
    with pytest.raises(NotOuter):
        square_rigidity_probe(polynomial([0.5, 1.0], small_cfg), size=32)


def test_boundary_zero_of_order_four_agrees_with_direct_check(cfg) -> None:
    symbol = parse_symbol({"conj": {"power": 5}}, cfg)
    f = polynomial([1.0, -4.0, 6.0, -4.0, 1.0], cfg)

    certificate = maximal_test(symbol, f)

    assert certificate.is_maximal
    assert certificate.direct_agrees is True
    assert certificate.direct_deviation < 10.0 * certificate.tolerance


def test_ratio_deviation_separates_non_maximal_elements(small_cfg) -> None:
    symbol = parse_symbol({"conj": {"power": 3}}, small_cfg)

    assert symbol_ratio_deviation(symbol, polynomial([1.0, 3.0], small_cfg)) == pytest.approx(0.91**0.5, rel=1e-8)
