from __future__ import annotations

import numpy as np
import pytest

from toeplab.boundary.functions import (
    OUTER_CLAMP_EXPONENT,
    BoundaryFunction,
    HardyFunction,
    OuterVerdict,
    Singularity,
    SingularPoint,
    analytic_completion,
    backward_shift,
    complex_conjugate,
    constant,
    evaluate_in_disk,
    grid_nodes,
    inner_product,
    membership_tolerance,
    monomial,
    outer_test,
    pointwise_multiply,
    polynomial,
    project_minus,
    project_plus,
    value_at_zero,
)
from toeplab.core.config import GridConfig
from toeplab.core.errors import AliasingOverflow, EvaluationTooCloseToBoundary, ValidationError, ZeroFunction


def test_grid_nodes_are_half_offset(small_cfg) -> None:
    nodes = grid_nodes(small_cfg)

    assert nodes.shape == (512,)
    assert np.allclose(np.abs(nodes), 1.0)
    assert not np.any(np.isclose(nodes, 1.0))
    assert not np.any(np.isclose(nodes, -1.0))


def test_monomial_coefficients_are_exact(small_cfg) -> None:
    f = monomial(3, small_cfg)
    g = monomial(-2, small_cfg)

    assert isinstance(f, HardyFunction)
    assert not isinstance(g, HardyFunction)
    assert f.coefficient(3) == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(np.delete(f.coeffs, 64 + 3))) < 1e-12
    assert g.coefficient(-2) == pytest.approx(1.0, abs=1e-12)


def test_from_coefficients_round_trips_band(small_cfg) -> None:
    f = BoundaryFunction.from_coefficients({-3: 2.0, 0: 1j, 5: -0.5}, small_cfg)

    assert f.coefficient(-3) == pytest.approx(2.0, abs=1e-12)
    assert f.coefficient(0) == pytest.approx(1j, abs=1e-12)
    assert f.coefficient(5) == pytest.approx(-0.5, abs=1e-12)


def test_from_coefficients_rejects_index_outside_grid(small_cfg) -> None:
    with pytest.raises(ValidationError):
        BoundaryFunction.from_coefficients({1000: 1.0}, small_cfg)


def test_samples_must_match_grid(small_cfg) -> None:
    with pytest.raises(ValidationError):
        BoundaryFunction(np.ones(10), small_cfg)
    with pytest.raises(ValidationError):
        BoundaryFunction(np.full(512, np.nan), small_cfg)


def test_inner_product_is_parseval(small_cfg) -> None:
    f = polynomial([1.0, 2.0, 0.0, 1j], small_cfg)
    g = polynomial([0.5, 0.0, 0.0, 1.0], small_cfg)

    assert inner_product(f, g) == pytest.approx(0.5 + 1j, abs=1e-12)
    assert f.norm() ** 2 == pytest.approx(6.0, abs=1e-12)


def test_projections_split_the_spectrum(small_cfg) -> None:
    f = BoundaryFunction.from_coefficients({-2: 1.0, 0: 3.0, 4: 2.0}, small_cfg)

    plus = project_plus(f)
    minus = project_minus(f)

    assert plus.analytic_defect < 1e-12
    assert plus.coefficient(4) == pytest.approx(2.0, abs=1e-12)
    assert minus.coefficient(-2) == pytest.approx(1.0, abs=1e-12)
    assert np.allclose((plus + minus).samples, f.samples)


def test_evaluate_in_disk_uses_exact_evaluator(small_cfg) -> None:
    f = polynomial([1.0, -0.5], small_cfg)

    result = evaluate_in_disk(f, 0.5j)

    assert complex(result) == pytest.approx(1.0 - 0.25j)
    assert result.error_bound == 0.0


def test_evaluate_in_disk_from_series_reports_bound(small_cfg) -> None:
    f = BoundaryFunction.from_coefficients({0: 1.0, 2: 0.25}, small_cfg)
    h = HardyFunction(f.samples, small_cfg)

    result = evaluate_in_disk(h, 0.5)

    assert complex(result) == pytest.approx(1.0625, abs=1e-12)
    assert result.error_bound > 0.0


def test_evaluate_in_disk_rejects_points_near_circle(small_cfg) -> None:
    with pytest.raises(EvaluationTooCloseToBoundary):
        evaluate_in_disk(constant(1.0, small_cfg), 1.0)


def test_value_at_zero_prefers_evaluator(small_cfg) -> None:
    assert value_at_zero(polynomial([2.0, 1.0], small_cfg)) == 2.0
    assert value_at_zero(monomial(-1, small_cfg)) == pytest.approx(0.0, abs=1e-12)


def test_backward_shift_drops_constant_term(small_cfg) -> None:
    f = polynomial([5.0, 1.0, 2.0], small_cfg)

    shifted = backward_shift(f)

    assert shifted.coefficient(0) == pytest.approx(1.0, abs=1e-12)
    assert shifted.coefficient(1) == pytest.approx(2.0, abs=1e-12)
    assert shifted.analytic_defect < 1e-12


def test_analytic_completion_real_part_matches(small_cfg) -> None:
    f = BoundaryFunction.from_coefficients({-1: 0.5, 0: 1.0, 1: 0.5}, small_cfg)

    completion = analytic_completion(f)

    assert np.allclose(completion.samples.real, f.samples.real)
    assert completion.coefficient(1) == pytest.approx(1.0, abs=1e-12)
    assert completion.evaluator is not None
    assert completion.evaluator(0.5) == pytest.approx(1.5)


def test_pointwise_multiply_keeps_exact_evaluator(small_cfg) -> None:
    product = pointwise_multiply(polynomial([1.0, 1.0], small_cfg), polynomial([1.0, -1.0], small_cfg))

    assert isinstance(product, HardyFunction)
    assert product.evaluator is not None
    assert product.evaluator(0.5) == pytest.approx(0.75)
    assert product.coefficient(2) == pytest.approx(-1.0, abs=1e-12)


def test_pointwise_multiply_raises_on_aliasing(small_cfg) -> None:
    high = monomial(40, small_cfg)

    with pytest.raises(AliasingOverflow) as exc_info:
        pointwise_multiply(high, high)

    assert exc_info.value.details["tail_energy"] == pytest.approx(1.0)


def test_pointwise_multiply_tolerates_singular_tails(small_cfg) -> None:
    jump = SingularPoint(1.0 + 0j, Singularity.JUMP)
    step = BoundaryFunction(np.sign(grid_nodes(small_cfg).imag), small_cfg, (jump,))

    product = pointwise_multiply(step, step)

    assert np.allclose(product.samples, 1.0)
    assert product.singular_points == (jump,)


def test_functions_on_different_grids_do_not_mix(small_cfg) -> None:
    other = GridConfig(grid_size=1024, truncation=64)

    with pytest.raises(ValidationError):
        inner_product(constant(1.0, small_cfg), constant(1.0, other))


def test_outer_test_verdicts(small_cfg) -> None:
    assert outer_test(polynomial([2.0, 1.0], small_cfg)).verdict is OuterVerdict.OUTER
    assert outer_test(polynomial([1.0, 2.0], small_cfg)).verdict is OuterVerdict.NOT_OUTER
    assert outer_test(monomial(1, small_cfg)).verdict is OuterVerdict.NOT_OUTER


def test_outer_test_accepts_boundary_zero(cfg) -> None:
    certificate = outer_test(polynomial([1.0, 1.0], cfg))

    assert certificate.is_outer
    assert certificate.log_abs_at_zero == pytest.approx(0.0)


def test_outer_test_rejects_zero_function(small_cfg) -> None:
    with pytest.raises(ZeroFunction):
        outer_test(constant(0.0, small_cfg))


def test_membership_tolerance_follows_singularity_tiers(cfg) -> None:
    smooth = constant(1.0, cfg)
    branch = BoundaryFunction(np.ones(cfg.grid_size), cfg, (SingularPoint(-1 + 0j, Singularity.BRANCH),))
    jump = BoundaryFunction(np.ones(cfg.grid_size), cfg, (SingularPoint(1 + 0j, Singularity.JUMP),))
    atom = BoundaryFunction(np.ones(cfg.grid_size), cfg, (SingularPoint(1 + 0j, Singularity.ATOM),))

    assert membership_tolerance(smooth) == cfg.tol_residual
    assert membership_tolerance(smooth, branch) == cfg.tol_branch
    assert membership_tolerance(branch, jump) == cfg.tol_section
    assert membership_tolerance(jump, atom) == cfg.tol_singular


def test_hardy_checked_rejects_antianalytic_input(small_cfg) -> None:
    with pytest.raises(ValidationError):
        HardyFunction.checked(monomial(-1, small_cfg))


def test_complex_conjugate_reflects_the_spectrum(small_cfg) -> None:
    f = polynomial([1.0, 2.0j, 0.0, 3.0], small_cfg)

    reflected = complex_conjugate(f)

    assert reflected.coefficient(-1) == pytest.approx(-2.0j, abs=1e-12)
    assert reflected.coefficient(-3) == pytest.approx(3.0, abs=1e-12)
    assert reflected.analytic_defect > 0.5


def _random_band(rng: np.random.Generator, cfg: GridConfig, low: int, high: int) -> BoundaryFunction:
    values = rng.normal(size=high - low + 1) + 1j * rng.normal(size=high - low + 1)
    return BoundaryFunction.from_coefficients(dict(zip(range(low, high + 1), values)), cfg)


def test_product_with_rounding_noise_is_not_aliasing(small_cfg, rng) -> None:
    noise = BoundaryFunction(1e-17 * (rng.normal(size=small_cfg.grid_size) + 0j), small_cfg)

    product = pointwise_multiply(monomial(2, small_cfg), noise)

    assert product.norm() < 1e-15


def test_aliasing_is_measured_against_the_factor_norms(small_cfg) -> None:
    small = polynomial([0.0] * 40 + [1e-6], small_cfg)

    with pytest.raises(AliasingOverflow) as exc_info:
        pointwise_multiply(small, monomial(40, small_cfg))

    assert exc_info.value.details["tail_energy"] == pytest.approx(1.0)


def test_outer_test_clamp_is_tol_coeff_squared(cfg) -> None:
    assert OUTER_CLAMP_EXPONENT == 2

    certificate = outer_test(polynomial([1.0, -4.0, 6.0, -4.0, 1.0], cfg))

    assert certificate.mean_log_abs >= OUTER_CLAMP_EXPONENT * np.log(cfg.tol_coeff)
    assert certificate.is_outer


@pytest.mark.parametrize("seed", range(5))
def test_project_plus_is_idempotent(seed, small_cfg) -> None:
    f = _random_band(np.random.default_rng(seed), small_cfg, -20, 20)

    once = project_plus(f)
    twice = project_plus(once)

    assert np.allclose(twice.samples, once.samples, atol=1e-12)
    assert np.allclose((once + project_minus(f)).samples, f.samples, atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_inner_product_matches_coefficient_sum(seed, small_cfg) -> None:
    rng = np.random.default_rng(seed)
    f = _random_band(rng, small_cfg, -10, 10)
    g = _random_band(rng, small_cfg, -10, 10)

    expected = sum(f.coefficient(n) * np.conj(g.coefficient(n)) for n in range(-10, 11))

    assert inner_product(f, g) == pytest.approx(expected, abs=1e-10)
    assert inner_product(f, f).real == pytest.approx(f.norm() ** 2, rel=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_pointwise_multiply_commutes(seed, small_cfg) -> None:
    rng = np.random.default_rng(seed)
    f = _random_band(rng, small_cfg, -20, 20)
    g = _random_band(rng, small_cfg, -20, 20)

    assert np.array_equal(pointwise_multiply(f, g).samples, pointwise_multiply(g, f).samples)
