from __future__ import annotations

import numpy as np
import pytest

from toeplab.boundary.functions import HardyFunction, constant, grid_angles, polynomial
from toeplab.core.errors import TooManyBoundaryZeros, ZeroFunction
from toeplab.factorization.outer import inner_outer
from toeplab.inner.functions import singular_atom_function


def test_polynomial_splits_by_root_location(small_cfg) -> None:
    # (z - 0.5)(z + 2)
    f = polynomial([-1.0, 1.5, 1.0], small_cfg)

    pair = inner_outer(f)

    assert pair.method == "roots"
    assert pair.zeros == pytest.approx((0.5 + 0j,))
    assert pair.residual < 1e-12
    assert pair.certificate.is_outer
    assert pair.outer.evaluator(0.0).real > 0.0
    assert abs(pair.outer.evaluator(0.0).imag) < 1e-12
    assert np.allclose(np.abs(pair.inner.samples), 1.0)


def test_zeros_at_origin_are_split_exactly(small_cfg) -> None:
    pair = inner_outer(polynomial([0.0, 0.0, 3.0, 1.0], small_cfg))

    assert pair.zeros == (0j, 0j)
    assert pair.outer.evaluator(0.0) == pytest.approx(3.0)


def test_log_modulus_path_recovers_outer_part(cfg) -> None:
    e = singular_atom_function(cfg)
    outer = polynomial([2.0, 1.0], cfg)
    f = HardyFunction(e.samples.samples * outer.samples, cfg, e.samples.singular_points)

    pair = inner_outer(f)

    assert pair.method == "log-modulus"
    assert pair.clamped_fraction == 0.0
    assert pair.outer.evaluator(0.0) == pytest.approx(2.0, rel=1e-8)
    assert pair.residual < 1e-10


def test_too_many_boundary_zeros(small_cfg) -> None:
    half = np.where(grid_angles(small_cfg) < np.pi, 1.0, 0.0)

    with pytest.raises(TooManyBoundaryZeros):
        inner_outer(HardyFunction(half, small_cfg))


def test_zero_function_has_no_factorisation(small_cfg) -> None:
    with pytest.raises(ZeroFunction):
        inner_outer(constant(0.0, small_cfg))
