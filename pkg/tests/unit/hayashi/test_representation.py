from __future__ import annotations

import cmath
import math

import pytest

from toeplab.boundary.functions import constant, polynomial
from toeplab.core.errors import EvenN, NonpositiveAtZero, NotOuter
from toeplab.hayashi.representation import (
    FiniteKernelRep,
    TrivialKernel,
    halfinteger_symbol_kernel,
    herglotz_parameters,
    isometric_multiplier_finite,
    piecewise_jump_exponents,
)
from toeplab.inner.functions import make_inner
from toeplab.toeplitz.descriptors import parse_symbol


@pytest.mark.parametrize("n", [0, 4, -3])
def test_halfinteger_family_needs_odd_order(n: int, small_cfg) -> None:
    with pytest.raises(EvenN):
        halfinteger_symbol_kernel(n, small_cfg)


def test_halfinteger_order_one_is_trivial(cfg) -> None:
    rep = halfinteger_symbol_kernel(1, cfg)

    assert isinstance(rep, TrivialKernel)
    assert rep.threshold == cfg.tol_section


def test_halfinteger_kernel_basis_and_margin(cfg) -> None:
    rep = halfinteger_symbol_kernel(5, cfg)

    assert isinstance(rep, FiniteKernelRep)
    assert rep.degree_n == 2
    assert max(rep.residuals) <= cfg.tol_branch
    assert rep.non_membership > cfg.tol_section


def test_isometric_multiplier_for_constant_weight(small_cfg) -> None:
    rep = FiniteKernelRep(multiplier_w=constant(1.0, small_cfg), degree_n=3)

    iso = isometric_multiplier_finite(rep)

    assert iso.alpha_zeros is not None
    assert len(iso.alpha_zeros) == 2
    assert max(abs(a) for a in iso.alpha_zeros) < 1e-6
    assert iso.gram_condition == pytest.approx(1.0)
    assert iso.alpha_defect < 1e-12


def test_isometric_multiplier_for_half_power_kernel(cfg, rng) -> None:
    rep = halfinteger_symbol_kernel(7, cfg)

    iso = isometric_multiplier_finite(rep)

    roots = sorted(iso.alpha_zeros, key=lambda a: a.imag)
    assert roots[0] == pytest.approx(0.2 - 0.4j, abs=1e-6)
    assert roots[1] == pytest.approx(0.2 + 0.4j, abs=1e-6)
    assert iso.isometry_error(rng, trials=5) < cfg.tol_branch


def test_herglotz_parameters_satisfy_identity(small_cfg) -> None:
    params = herglotz_parameters(polynomial([0.8, 0.6], small_cfg), make_inner({"power": 1}, small_cfg))

    assert params.identity_error < 1e-10
    assert params.b_sup < 1.0
    assert params.F.evaluator(0.0).real == pytest.approx(1.0)


def test_herglotz_parameters_need_outer_positive_input(small_cfg) -> None:
    alpha = make_inner({"power": 1}, small_cfg)

    with pytest.raises(NotOuter):
        herglotz_parameters(polynomial([0.5, 1.0], small_cfg), alpha)
    with pytest.raises(NonpositiveAtZero):
        herglotz_parameters(polynomial([-1.0, 0.5], small_cfg), alpha)


def test_pm_one_symbol_jump_exponents(cfg) -> None:
    symbol = parse_symbol({"piecewise": {"breaks": [0.0, 3.141592653589793], "values": [1, -1]}}, cfg)

    analysis = piecewise_jump_exponents(symbol)

    assert len(analysis.jumps) == 2
    for jump in analysis.jumps:
        assert jump.exponent == pytest.approx(-0.5, abs=cfg.tol_section)
    assert not analysis.regular2


def test_exponents_near_one_half_stay_in_range(cfg) -> None:
    turn = cmath.exp(2j * math.pi * 0.495)
    symbol = parse_symbol({"piecewise": {"breaks": [0.0, math.pi], "values": [1, [turn.real, turn.imag]]}}, cfg)

    analysis = piecewise_jump_exponents(symbol)

    exponents = sorted(jump.exponent.real for jump in analysis.jumps)
    assert all(-0.5 <= value < 0.5 for value in exponents)
    assert exponents == pytest.approx([-0.495, 0.495], abs=1e-3)
    assert not analysis.regular2
