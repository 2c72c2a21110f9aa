"""Maximal functions, symbol factorisations and square-rigidity probes."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from toeplab.boundary.functions import (
    BoundaryFunction,
    HardyFunction,
    OuterCertificate,
    OuterVerdict,
    grid_nodes,
    membership_tolerance,
    merge_singular_points,
    outer_test,
)
from toeplab.core.errors import (
    LambdaOutsideDisk,
    NotInKernel,
    NotMaximal,
    NotOuter,
    NumericalFailure,
    ZeroFunction,
)
from toeplab.factorization.outer import InnerOuterPair, inner_outer
from toeplab.toeplitz.engine import (
    ToeplitzSymbol,
    kernel_tolerance,
    minimal_kernel_symbol,
    numerical_kernel,
    residual_in_kernel,
)

logger = logging.getLogger(__name__)


class RigidityVerdict(str, Enum):
    RIGID_AT_SCALE = "RigidAtScale"
    NOT_RIGID = "NotRigid"
    UNCERTAIN = "Uncertain"


@dataclass(frozen=True)
class MaximalCertificate:
    """Evidence behind a maximality verdict; ``h`` is conj(g·z·f)."""

    is_maximal: bool
    h: BoundaryFunction
    analytic_defect: float
    outer: OuterCertificate
    residual: float
    tolerance: float
    direct_agrees: bool | None = None
    direct_deviation: float | None = None


@dataclass(frozen=True)
class MaxFactorisation:
    """g = inner_factor·conj(outer_factor)/outer_factor."""

    inner_factor: BoundaryFunction
    outer_factor: HardyFunction
    inner: HardyFunction
    reconstruction_residual: float
    lam: complex | None = None


@dataclass(frozen=True)
class RigidityProbe:
    verdict: RigidityVerdict
    dimension: int
    gap: float
    max_residual: float


def maximality_tolerance(g: ToeplitzSymbol, f: BoundaryFunction) -> float:
    return max(kernel_tolerance(g), membership_tolerance(f))


def require_in_kernel(g: ToeplitzSymbol, f: HardyFunction, *, tolerance: float | None = None) -> float:
    """Residual of f under g, raising NotInKernel above the tier tolerance."""

    limit = maximality_tolerance(g, f) if tolerance is None else tolerance
    residual = residual_in_kernel(g, f)
    if residual > limit:
        raise NotInKernel(
            f"residual {residual:.3e} exceeds {limit:.1e}",
            details={"residual": residual, "tolerance": limit},
        )
    return residual


def maximal_test(g: ToeplitzSymbol, f: HardyFunction, *, cross_check: bool = True) -> MaximalCertificate:
    """f is maximal in ker T_g iff conj(g·z·f) is in H² and outer."""

    tolerance = maximality_tolerance(g, f)
    residual = require_in_kernel(g, f, tolerance=tolerance)

    cfg = f.config
    points = merge_singular_points(g.boundary.singular_points, f.singular_points)
    h = BoundaryFunction(np.conj(g.boundary.samples * grid_nodes(cfg) * f.samples), cfg, points)
    defect = h.analytic_defect
    certificate = outer_test(h)
    is_maximal = defect <= tolerance and certificate.verdict is OuterVerdict.OUTER

    direct_agrees: bool | None = None
    deviation: float | None = None
    if cross_check:
        try:
            deviation = symbol_ratio_deviation(g, f)
        except NumericalFailure as exc:
            logger.warning("maximal_test cross-check skipped: %s", exc)
        else:
            direct_agrees = (deviation <= 10.0 * tolerance) == is_maximal
            if not direct_agrees:
                logger.warning("maximal_test: criteria disagree (deviation %.3e, maximal=%s)", deviation, is_maximal)

    return MaximalCertificate(
        is_maximal=is_maximal,
        h=h,
        analytic_defect=defect,
        outer=certificate,
        residual=residual,
        tolerance=tolerance,
        direct_agrees=direct_agrees,
        direct_deviation=deviation,
    )


def symbol_ratio_deviation(g: ToeplitzSymbol, f: HardyFunction) -> float:
    """min over c of ‖g·f − c·m·f‖/‖f‖, with m = minimal_kernel_symbol(f).

    f is maximal exactly when g f = z̄·conj(O) for an outer O, i.e. when g is
    a constant multiple of m. Weighting by |f| keeps boundary zeros of f from
    dominating the comparison.
    """

    minimal = minimal_kernel_symbol(f)
    target = g.boundary.samples * f.samples
    fitted = minimal.boundary.samples * f.samples
    scale = float(np.vdot(fitted, fitted).real)
    if scale <= 0.0:
        raise ZeroFunction("ratio deviation of the zero function is undefined")
    coefficient = np.vdot(fitted, target) / scale
    return float(np.linalg.norm(target - coefficient * fitted) / np.sqrt(scale))


def _require_maximal(g: ToeplitzSymbol, f: HardyFunction) -> None:
    certificate = maximal_test(g, f, cross_check=False)
    if not certificate.is_maximal:
        raise NotMaximal(
            "function is not maximal in the kernel",
            details={"analytic_defect": certificate.analytic_defect, "outer_gap": certificate.outer.gap},
        )


def maximal_factorisation(g: ToeplitzSymbol, f_max: HardyFunction, *, pair: InnerOuterPair | None = None) -> MaxFactorisation:
    """g = conj(z·I)·Ō/O from f_max = I·O, the constant folded into I."""

    _require_maximal(g, f_max)
    pair = pair or inner_outer(f_max)
    cfg = g.config
    nodes = grid_nodes(cfg)
    outer = pair.outer.samples

    base = np.conj(nodes * pair.inner.samples) * np.conj(outer) / outer
    mean_ratio = complex(np.mean(g.boundary.samples / base))
    gamma = np.conj(mean_ratio / abs(mean_ratio))
    inner_samples = gamma * pair.inner.samples
    inner_eval = None
    if pair.inner.evaluator is not None:
        inner_base = pair.inner.evaluator

        def inner_eval(z: complex) -> complex:
            return complex(gamma * inner_base(z))

    inner = HardyFunction(inner_samples, cfg, pair.inner.singular_points, evaluator=inner_eval)
    inner_factor = BoundaryFunction(np.conj(nodes * inner_samples), cfg, inner.singular_points)
    rebuilt = inner_factor.samples * np.conj(outer) / outer
    residual = _relative_error(rebuilt, g.boundary.samples)
    logger.debug("maximal_factorisation: reconstruction residual %.3e", residual)
    return MaxFactorisation(
        inner_factor=inner_factor,
        outer_factor=pair.outer,
        inner=inner,
        reconstruction_residual=residual,
    )


def modified_factorisation(g: ToeplitzSymbol, f_max: HardyFunction, lam: complex) -> MaxFactorisation:
    """g = conj(B_λ·I)·Ō(1−λz̄)/(O(1−λ̄z)), using z = B_λ(1−λ̄z)/(1−λz̄)."""

    lam = complex(lam)
    if not abs(lam) < 1.0:
        raise LambdaOutsideDisk(f"lambda = {lam} is not in the open unit disk", details={"modulus": abs(lam)})
    base = maximal_factorisation(g, f_max)
    if lam == 0:
        return MaxFactorisation(
            inner_factor=base.inner_factor,
            outer_factor=base.outer_factor,
            inner=base.inner,
            reconstruction_residual=base.reconstruction_residual,
            lam=lam,
        )

    cfg = g.config
    nodes = grid_nodes(cfg)
    blaschke = (nodes - lam) / (1.0 - lam.conjugate() * nodes)
    inner_factor = BoundaryFunction(np.conj(blaschke * base.inner.samples), cfg, base.inner.singular_points)

    outer_eval = None
    if base.outer_factor.evaluator is not None:
        outer_base = base.outer_factor.evaluator

        def outer_eval(z: complex) -> complex:
            return complex(outer_base(z)) * (1.0 - lam.conjugate() * z)

    outer = HardyFunction(
        base.outer_factor.samples * (1.0 - lam.conjugate() * nodes),
        cfg,
        base.outer_factor.singular_points,
        evaluator=outer_eval,
    )
    rebuilt = inner_factor.samples * np.conj(outer.samples) / outer.samples
    return MaxFactorisation(
        inner_factor=inner_factor,
        outer_factor=outer,
        inner=base.inner,
        reconstruction_residual=_relative_error(rebuilt, g.boundary.samples),
        lam=lam,
    )


def rigidity_symbol(outer: HardyFunction) -> ToeplitzSymbol:
    """z̄·Ō/O, whose kernel is span{O} exactly when O is square-rigid."""

    cfg = outer.config
    values = outer.samples
    samples = np.conj(grid_nodes(cfg)) * np.conj(values) / values
    return ToeplitzSymbol.from_boundary(
        BoundaryFunction(samples / np.abs(samples), cfg, outer.singular_points),
        label="rigidity",
    )


def square_rigidity_probe(outer: HardyFunction, size: int | None = None) -> RigidityProbe:
    """Finite-section witness for square rigidity; never a proof."""

    certificate = outer_test(outer)
    if certificate.verdict is not OuterVerdict.OUTER:
        raise NotOuter(
            f"rigidity probe needs an outer function (gap {certificate.gap:.3e})",
            details={"gap": certificate.gap, "verdict": certificate.verdict.value},
        )
    basis = numerical_kernel(rigidity_symbol(outer), size, allow_uncertain=True)
    if not basis.certain or basis.dimension == 0:
        verdict = RigidityVerdict.UNCERTAIN
    elif basis.dimension == 1:
        verdict = RigidityVerdict.RIGID_AT_SCALE
    else:
        verdict = RigidityVerdict.NOT_RIGID
    logger.debug("square_rigidity_probe: %s (dimension %d, gap %.3g)", verdict.value, basis.dimension, basis.gap)
    return RigidityProbe(verdict=verdict, dimension=basis.dimension, gap=basis.gap, max_residual=basis.max_residual)


def _relative_error(values: np.ndarray, reference: np.ndarray) -> float:
    return float(np.linalg.norm(values - reference) / max(np.linalg.norm(reference), np.finfo(float).tiny))
