from __future__ import annotations

import numpy as np
import pytest

from toeplab.boundary.functions import BoundaryFunction, Singularity, SingularPoint, constant, monomial, polynomial
from toeplab.core.errors import FactorisationFailed, SizeExceedsTruncation, UncertainDimension, ValidationError
from toeplab.factorization.outer import inner_outer
from toeplab.hayashi.representation import FiniteKernelRep, halfinteger_symbol_kernel
from toeplab.toeplitz.engine import (
    InclusionVerdict,
    KernelBasis,
    ToeplitzSymbol,
    kernel_angles,
    kernel_inclusion_probe,
    kernels_equal,
    minimal_kernel_symbol,
    multiplier_symbol,
    near_invariance_defect,
    numerical_kernel,
    residual_in_kernel,
    section_size,
    span_coefficients,
    toeplitz_matrix,
    unimodular_tolerance,
)
from toeplab.toeplitz.descriptors import parse_symbol


def _conj_power(power: int, cfg) -> ToeplitzSymbol:
    return parse_symbol({"conj": {"power": power}}, cfg)


def test_from_boundary_detects_unimodular_symbols(small_cfg) -> None:
    assert _conj_power(3, small_cfg).unimodular
    assert not ToeplitzSymbol.from_boundary(polynomial([2.0, 1.0], small_cfg)).unimodular


def test_unimodular_flag_is_verified(small_cfg) -> None:
    with pytest.raises(ValidationError):
        ToeplitzSymbol(boundary=constant(2.0, small_cfg), unimodular=True)


def test_toeplitz_matrix_places_coefficients(small_cfg) -> None:
    matrix = toeplitz_matrix(_conj_power(1, small_cfg), 4)

    assert np.allclose(matrix, np.eye(4, k=1))


def test_toeplitz_matrix_rejects_oversized_sections(small_cfg) -> None:
    with pytest.raises(SizeExceedsTruncation):
        toeplitz_matrix(_conj_power(1, small_cfg), small_cfg.truncation + 1)


def test_kernel_of_conjugate_monomial(small_cfg) -> None:
    basis = numerical_kernel(_conj_power(3, small_cfg), 32)

    assert basis.dimension == 3
    assert basis.certain
    assert basis.max_residual < small_cfg.tol_residual
    expected = span_coefficients([monomial(k, small_cfg) for k in range(3)])
    assert kernel_angles(basis, expected) < 1e-8


def test_kernel_of_analytic_symbol_is_trivial(small_cfg) -> None:
    basis = numerical_kernel(ToeplitzSymbol.from_boundary(monomial(2, small_cfg)), 32)

    assert basis.dimension == 0
    assert basis.certain
    assert basis.vectors == ()


def test_zero_symbol_is_uncertain_with_candidate(small_cfg) -> None:
    symbol = ToeplitzSymbol.from_boundary(constant(0.0, small_cfg))

    with pytest.raises(UncertainDimension) as exc_info:
        numerical_kernel(symbol, 16)

    candidate = exc_info.value.candidate
    assert isinstance(candidate, KernelBasis)
    assert candidate.dimension == 16
    assert not numerical_kernel(symbol, 16, allow_uncertain=True).certain


def test_minimal_kernel_symbol_recovers_outer_function(small_cfg) -> None:
    f = polynomial([2.0, 1.0], small_cfg)

    basis = numerical_kernel(minimal_kernel_symbol(f), 32)

    assert basis.dimension == 1
    assert kernel_angles(basis, span_coefficients([f])) < 1e-6


def test_residual_in_kernel_measures_analytic_part(small_cfg) -> None:
    symbol = _conj_power(2, small_cfg)

    assert residual_in_kernel(symbol, polynomial([1.0, 1.0], small_cfg)) < 1e-14
    assert residual_in_kernel(symbol, polynomial([0.0, 0.0, 1.0], small_cfg)) == pytest.approx(1.0)


def test_inclusion_follows_kernel_nesting(small_cfg) -> None:
    small = _conj_power(2, small_cfg)
    large = _conj_power(3, small_cfg)

    assert kernel_inclusion_probe(small, large, 32) is InclusionVerdict.INCLUDED
    assert kernel_inclusion_probe(large, small, 32) is InclusionVerdict.NOT_INCLUDED
    assert kernels_equal(large, large.scaled(1j), 32)
    assert not kernels_equal(small, large, 32)


def test_kernel_angles_for_mismatched_dimensions(small_cfg) -> None:
    first = numerical_kernel(_conj_power(2, small_cfg), 32)
    second = numerical_kernel(_conj_power(3, small_cfg), 32)

    assert kernel_angles(first, second) == pytest.approx(np.pi / 2)
    assert kernel_angles(first, first) < 1e-10


def test_monomial_kernel_is_nearly_invariant(small_cfg) -> None:
    symbol = _conj_power(4, small_cfg)

    assert near_invariance_defect(symbol, numerical_kernel(symbol, 32)) < small_cfg.tol_residual


def test_multiplier_symbol_kernel_contains_weighted_elements(small_cfg) -> None:
    w = polynomial([2.0, 1.0], small_cfg)
    symbol = multiplier_symbol(_conj_power(3, small_cfg), w)

    assert residual_in_kernel(symbol, polynomial([0.0, 2.0, 1.0], small_cfg)) < 1e-10
    assert residual_in_kernel(symbol, polynomial([0.0, 0.0, 0.0, 2.0, 1.0], small_cfg)) > 0.5


@pytest.mark.parametrize("n", [5, 7, 9])
def test_graded_singular_values_all_count_toward_kernel(n, cfg) -> None:
    rep = halfinteger_symbol_kernel(n, cfg)
    assert isinstance(rep, FiniteKernelRep)

    basis = numerical_kernel(rep.symbol, allow_uncertain=True)

    assert basis.dimension == (n - 1) // 2
    assert basis.gap >= 10.0


def test_section_size_follows_truncation(cfg, small_cfg) -> None:
    assert section_size(cfg) == 128
    assert section_size(small_cfg) == small_cfg.truncation
    assert section_size(small_cfg, 16) == 16

    basis = numerical_kernel(_conj_power(3, small_cfg))

    assert basis.size == small_cfg.truncation
    assert basis.dimension == 3


def test_singular_samples_get_a_looser_unimodular_check(small_cfg) -> None:
    samples = monomial(-2, small_cfg).samples * (1.0 + 1e-8)
    atom = (SingularPoint(1.0 + 0j, Singularity.ATOM),)

    assert unimodular_tolerance(BoundaryFunction(samples, small_cfg)) == pytest.approx(10.0 * small_cfg.tol_coeff)
    assert not ToeplitzSymbol.from_boundary(BoundaryFunction(samples, small_cfg)).unimodular
    assert ToeplitzSymbol.from_boundary(BoundaryFunction(samples, small_cfg, atom)).unimodular


def test_minimal_kernel_symbol_holds_a_boundary_zero_of_order_four(small_cfg) -> None:
    f = polynomial([1.0, -4.0, 6.0, -4.0, 1.0], small_cfg)

    symbol = minimal_kernel_symbol(f)

    assert residual_in_kernel(symbol, f) < small_cfg.tol_residual


def test_minimal_kernel_symbol_rejects_a_wrong_factorisation(monkeypatch, small_cfg) -> None:
    unit = constant(1.0, small_cfg)
    monkeypatch.setattr("toeplab.toeplitz.engine.inner_outer", lambda f: inner_outer(unit))

    with pytest.raises(FactorisationFailed):
        minimal_kernel_symbol(polynomial([0.0, 1.0], small_cfg))
