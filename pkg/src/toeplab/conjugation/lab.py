"""The natural conjugation on Toeplitz kernels and maximal-function constructions.

For a unimodular symbol g the conjugation is C f = conj(g)·z̄·conj(f). It
is an antilinear isometric involution of ker T_g, and f is maximal exactly
when C f is outer.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
import scipy.linalg

from toeplab.boundary.functions import (
    BoundaryFunction,
    HardyFunction,
    as_hardy,
    complex_conjugate,
    grid_nodes,
    inner_product,
    membership_tolerance,
)
from toeplab.core.errors import (
    AlphaDoesNotDivideInner,
    NotInKernel,
    UncertainDimension,
    ValidationError,
)
from toeplab.core.validators import validate_unimodular
from toeplab.factorization.factor import (
    maximal_factorisation,
    maximal_test,
    require_in_kernel,
)
from toeplab.factorization.outer import InnerOuterPair, inner_outer
from toeplab.inner.functions import InnerFunction, InnerSpec, inner_divides, make_inner, model_kernels
from toeplab.toeplitz.engine import (
    InclusionVerdict,
    KernelBasis,
    ToeplitzSymbol,
    kernel_inclusion_probe,
    kernel_tolerance,
    minimal_kernel_symbol,
    numerical_kernel,
    residual_in_kernel,
)

logger = logging.getLogger(__name__)

DEFAULT_MODEL_POINTS = (0.0, 0.5, -0.5, 0.5j, -0.5j, 0.3 + 0.3j)


class OrderRelation(str, Enum):
    PRECEDES = "precedes"
    SUCCEEDS = "succeeds"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"
    UNCERTAIN = "uncertain"


@dataclass(frozen=True)
class ConjugationContext:
    symbol: ToeplitzSymbol
    kernel: KernelBasis

    def __post_init__(self) -> None:
        if not self.symbol.unimodular:
            raise ValidationError("conjugation needs a unimodular symbol", details={"label": self.symbol.label})

    @property
    def tolerance(self) -> float:
        return kernel_tolerance(self.symbol)


@dataclass(frozen=True)
class EigenResult:
    """C f = λ f test; ``eigenvalue`` is None when the candidate fails."""

    eigenvalue: complex | None
    candidate: complex
    residual: float
    maximal_cross_check: bool | None = None


@dataclass(frozen=True)
class MaxOrderVerdict:
    relation: OrderRelation
    witness: BoundaryFunction
    forward_defect: float
    backward_defect: float
    exact: bool = False
    kernel_agrees: bool | None = None


def conjugation_context(g: ToeplitzSymbol, size: int | None = None) -> ConjugationContext:
    return ConjugationContext(symbol=g, kernel=numerical_kernel(g, size))


def model_conjugation_context(theta: InnerFunction, points: Sequence[complex] = DEFAULT_MODEL_POINTS) -> ConjugationContext:
    """Context for K_θ = ker T_θ̄, its basis orthonormalised from reproducing kernels.

    The span is all of K_θ when θ is a Blaschke product with at most
    ``len(points)`` zeros, and a subspace otherwise.
    """

    cfg = theta.config
    symbol = ToeplitzSymbol.from_boundary(complex_conjugate(theta.samples), label="conj(theta)")
    kernels = [model_kernels(theta, mu).k for mu in points]
    matrix = np.column_stack([k.samples for k in kernels]) / np.sqrt(cfg.grid_size)
    q, r = scipy.linalg.qr(matrix, mode="economic")
    rank = int(np.sum(np.abs(np.diag(r)) > 1e3 * cfg.tol_coeff * max(abs(r[0, 0]), 1.0)))
    points_tuple = theta.samples.singular_points
    vectors = tuple(HardyFunction(q[:, idx] * np.sqrt(cfg.grid_size), cfg, points_tuple) for idx in range(rank))
    residuals = tuple(residual_in_kernel(symbol, v) for v in vectors)
    basis = KernelBasis(
        vectors=vectors,
        residuals=residuals,
        dimension=rank,
        gap=float("inf"),
        certain=True,
        tolerance=kernel_tolerance(symbol),
        size=len(points),
    )
    return ConjugationContext(symbol=symbol, kernel=basis)


def conjugate_in_kernel(ctx: ConjugationContext, f: HardyFunction) -> HardyFunction:
    """C f = conj(g)·z̄·conj(f), samplewise."""

    require_in_kernel(ctx.symbol, f)
    return _conjugate(ctx, f)


def _conjugate(ctx: ConjugationContext, f: BoundaryFunction) -> HardyFunction:
    cfg = f.config
    samples = np.conj(ctx.symbol.boundary.samples * grid_nodes(cfg) * f.samples)
    points = tuple(ctx.symbol.boundary.singular_points) + tuple(f.singular_points)
    return as_hardy(BoundaryFunction(samples, cfg, points))


def eigenfunction_test(ctx: ConjugationContext, f: HardyFunction) -> EigenResult:
    """Find λ with C f = λ f, from the pairing ⟨Cf, f⟩/‖f‖², then verify it.

    The cross-check records whether α·f is maximal, α the inner factor of f;
    the two statements are equivalent.
    """

    conjugated = conjugate_in_kernel(ctx, f)
    norm2 = inner_product(f, f).real
    candidate = inner_product(conjugated, f) / norm2
    residual = float(np.linalg.norm(conjugated.samples - candidate * f.samples) / np.linalg.norm(f.samples))
    tolerance = max(ctx.tolerance, membership_tolerance(f))
    eigenvalue = candidate if residual <= tolerance and abs(abs(candidate) - 1.0) <= tolerance else None

    cross_check: bool | None = None
    try:
        pair = inner_outer(f)
        shifted = as_hardy(BoundaryFunction(pair.inner.samples * f.samples, f.config, f.singular_points))
        cross_check = maximal_test(ctx.symbol, shifted, cross_check=False).is_maximal == (eigenvalue is not None)
    except NotInKernel:
        logger.debug("eigenfunction_test: alpha*f left the kernel, cross-check skipped")
    if cross_check is False:
        logger.warning("eigenfunction_test: eigen verdict disagrees with maximality of alpha*f")

    return EigenResult(eigenvalue=eigenvalue, candidate=complex(candidate), residual=residual, maximal_cross_check=cross_check)


def outer_maximal(ctx: ConjugationContext, f_max: HardyFunction, mu: complex) -> HardyFunction:
    """O·(μ + I) for f_max = I·O; C maps it to conj(μ) times itself."""

    return prescribed_inner_maximal(ctx, f_max, None, mu)


def prescribed_inner_maximal(
    ctx: ConjugationContext,
    f_max: HardyFunction,
    alpha: InnerFunction | None,
    lam: complex,
) -> HardyFunction:
    """α·O·(λ + I·ᾱ) = O·(λα + I), maximal with inner factor α."""

    lam = validate_unimodular(lam, field_name="mu" if alpha is None else "lambda", tolerance=1e-9)
    pair = inner_outer(f_max)
    factors = maximal_factorisation(ctx.symbol, f_max, pair=pair)
    cfg = f_max.config
    inner = factors.inner
    outer = factors.outer_factor

    if alpha is None:
        alpha_samples = np.ones(cfg.grid_size, dtype=np.complex128)
        alpha_eval = None
    else:
        _require_divides(alpha, pair, inner)
        alpha_samples = alpha.samples.samples
        alpha_eval = alpha.evaluate

    samples = outer.samples * (lam * alpha_samples + inner.samples)
    evaluator = None
    if outer.evaluator is not None and inner.evaluator is not None:
        outer_eval, inner_eval = outer.evaluator, inner.evaluator

        def evaluator(z: complex) -> complex:
            a = 1.0 if alpha_eval is None else complex(alpha_eval(z))
            return complex(outer_eval(z)) * (lam * a + complex(inner_eval(z)))

    points = tuple(f_max.singular_points) + (() if alpha is None else tuple(alpha.samples.singular_points))
    return HardyFunction(samples, cfg, points, evaluator=evaluator)


def _require_divides(alpha: InnerFunction, pair: InnerOuterPair, inner: HardyFunction) -> None:
    if pair.zeros is not None and alpha.is_finite_blaschke:
        structured = make_inner(InnerSpec(zeros=pair.zeros), alpha.config)
        if not inner_divides(alpha, structured, tolerance=1e-6):
            raise AlphaDoesNotDivideInner("alpha does not divide the inner factor", details={"zeros": len(pair.zeros)})
        return
    quotient = BoundaryFunction(inner.samples * np.conj(alpha.samples.samples), alpha.config, inner.singular_points)
    limit = membership_tolerance(quotient)
    if quotient.analytic_defect > limit:
        raise AlphaDoesNotDivideInner(
            f"I·conj(alpha) is not analytic (defect {quotient.analytic_defect:.3e})",
            details={"analytic_defect": quotient.analytic_defect, "tolerance": limit},
        )


def max_order_compare(
    f1: HardyFunction,
    f2: HardyFunction,
    ctx: ConjugationContext | None = None,
) -> MaxOrderVerdict:
    """Order of inner factors: f1 precedes f2 when I₁ divides I₂.

    With a context in which both functions are maximal, the verdict is also
    read off the inclusion of the minimal kernels of C f₂ and C f₁.
    """

    pair1, pair2 = inner_outer(f1), inner_outer(f2)
    cfg = f1.config
    witness = BoundaryFunction(pair2.inner.samples * np.conj(pair1.inner.samples), cfg)
    reverse = BoundaryFunction(pair1.inner.samples * np.conj(pair2.inner.samples), cfg)
    forward_defect, backward_defect = witness.analytic_defect, reverse.analytic_defect

    exact = pair1.zeros is not None and pair2.zeros is not None
    if exact:
        inner1 = make_inner(InnerSpec(zeros=pair1.zeros), cfg)
        inner2 = make_inner(InnerSpec(zeros=pair2.zeros), cfg)
        relation = _relation(inner_divides(inner1, inner2, tolerance=1e-6), inner_divides(inner2, inner1, tolerance=1e-6))
    else:
        tolerance = membership_tolerance(f1, f2)
        if any(tolerance < d <= 10.0 * tolerance for d in (forward_defect, backward_defect)):
            relation = OrderRelation.UNCERTAIN
        else:
            relation = _relation(forward_defect <= tolerance, backward_defect <= tolerance)

    kernel_agrees = None
    if ctx is not None and relation is not OrderRelation.UNCERTAIN:
        kernel_agrees = _kernel_order_agrees(ctx, f1, f2, relation)

    return MaxOrderVerdict(
        relation=relation,
        witness=witness,
        forward_defect=forward_defect,
        backward_defect=backward_defect,
        exact=exact,
        kernel_agrees=kernel_agrees,
    )


def _relation(forward: bool, backward: bool) -> OrderRelation:
    if forward and backward:
        return OrderRelation.EQUIVALENT
    if forward:
        return OrderRelation.PRECEDES
    if backward:
        return OrderRelation.SUCCEEDS
    return OrderRelation.INCOMPARABLE


def _kernel_order_agrees(ctx: ConjugationContext, f1: HardyFunction, f2: HardyFunction, relation: OrderRelation) -> bool | None:
    try:
        if not (maximal_test(ctx.symbol, f1, cross_check=False).is_maximal and maximal_test(ctx.symbol, f2, cross_check=False).is_maximal):
            return None
        small = minimal_kernel_symbol(_conjugate(ctx, f2))
        large = minimal_kernel_symbol(_conjugate(ctx, f1))
        verdict = kernel_inclusion_probe(small, large)
    except (NotInKernel, UncertainDimension) as exc:
        logger.debug("max_order_compare: kernel cross-check skipped (%s)", exc)
        return None
    precedes = relation in (OrderRelation.PRECEDES, OrderRelation.EQUIVALENT)
    return precedes == (verdict is InclusionVerdict.INCLUDED)
