"""Ad-hoc computations on user-supplied descriptors, reported like experiments."""

from __future__ import annotations

import logging
import time
from typing import Any, Callable, Mapping

import numpy as np

from toeplab.boundary.functions import HardyFunction, OuterVerdict, outer_test
from toeplab.conjugation.lab import ConjugationContext, conjugate_in_kernel, eigenfunction_test
from toeplab.core.config import GridConfig
from toeplab.core.errors import ValidationError
from toeplab.core.models import Check, ExperimentOutcome, ExperimentReport
from toeplab.core.payloads import ComputeRequestPayload
from toeplab.core.validators import coerce_int
from toeplab.experiments.registry import DEFAULT_SEED
from toeplab.factorization.factor import (
    RigidityVerdict,
    maximal_factorisation,
    maximal_test,
    modified_factorisation,
    square_rigidity_probe,
)
from toeplab.factorization.outer import inner_outer
from toeplab.hayashi.representation import (
    FiniteKernelRep,
    TrivialKernel,
    halfinteger_symbol_kernel,
    isometric_multiplier_finite,
    piecewise_jump_exponents,
)
from toeplab.inner.functions import InnerSpec, crofoot, make_inner, random_model_element
from toeplab.toeplitz.descriptors import load_descriptor, parse_function, parse_symbol
from toeplab.toeplitz.engine import ToeplitzSymbol, numerical_kernel, residual_in_kernel, section_size

logger = logging.getLogger(__name__)

MAX_PARAM_VALUE = 10_000

ComputeHandler = Callable[[ComputeRequestPayload, GridConfig, np.random.Generator], ExperimentOutcome]


def run_compute(request: ComputeRequestPayload, cfg: GridConfig) -> ExperimentReport:
    """Evaluate one verb; the report id is ``compute:<verb>``."""

    seed = DEFAULT_SEED if request.seed is None else request.seed
    rng = np.random.default_rng(seed)
    handler = _HANDLERS[request.verb]

    logger.info("compute %s (size=%s, lambda=%s)", request.verb, request.size, request.lam)
    started = time.perf_counter()
    outcome = handler(request, cfg, rng)
    elapsed = time.perf_counter() - started

    params: dict[str, Any] = dict(request.params)
    if request.lam is not None:
        params["lambda"] = [request.lam.real, request.lam.imag]
    if request.size is not None:
        params["size"] = request.size
    return ExperimentReport.from_outcome(
        f"compute:{request.verb}",
        outcome,
        config=cfg.to_mapping(),
        seed=seed,
        params=params,
        wall_time=elapsed,
    )


def _symbol(request: ComputeRequestPayload, cfg: GridConfig) -> ToeplitzSymbol:
    assert request.symbol is not None
    return parse_symbol(request.symbol, cfg)


def _function(request: ComputeRequestPayload, cfg: GridConfig) -> HardyFunction:
    assert request.function is not None
    return parse_function(request.function, cfg)


def _size(request: ComputeRequestPayload, cfg: GridConfig) -> int:
    return section_size(cfg, request.size or None)


def _flag(value: bool) -> float:
    return 1.0 if value else 0.0


def _kernel(request: ComputeRequestPayload, cfg: GridConfig, rng: np.random.Generator) -> ExperimentOutcome:
    symbol = _symbol(request, cfg)
    basis = numerical_kernel(symbol, _size(request, cfg), allow_uncertain=True)
    return ExperimentOutcome(
        checks=(Check.at_most("max_residual", basis.max_residual, basis.tolerance),),
        metrics={
            "dimension": basis.dimension,
            "gap": basis.gap,
            "max_residual": basis.max_residual,
            "certain": _flag(basis.certain),
            "tolerance": basis.tolerance,
        },
        artifacts={f"basis_{idx}": v.analytic_coefficients() for idx, v in enumerate(basis.vectors)},
        uncertain=not basis.certain,
    )


def _inner_outer(request: ComputeRequestPayload, cfg: GridConfig, rng: np.random.Generator) -> ExperimentOutcome:
    f = _function(request, cfg)
    pair = inner_outer(f)
    artifacts: dict[str, Any] = {
        "inner": pair.inner.analytic_coefficients(),
        "outer": pair.outer.analytic_coefficients(),
    }
    if pair.zeros is not None:
        artifacts["zeros"] = list(pair.zeros)
    return ExperimentOutcome(
        checks=(
            Check.at_most("residual", pair.residual, cfg.tol_residual),
            Check.at_most("inner_defect", pair.inner_defect, cfg.tol_outer),
        ),
        metrics={
            "residual": pair.residual,
            "inner_defect": pair.inner_defect,
            "clamped_fraction": pair.clamped_fraction,
            "outer_gap": pair.certificate.gap,
        },
        artifacts=artifacts,
        notes=(f"method: {pair.method}",),
    )


def _outer_test(request: ComputeRequestPayload, cfg: GridConfig, rng: np.random.Generator) -> ExperimentOutcome:
    certificate = outer_test(_function(request, cfg))
    return ExperimentOutcome(
        metrics={
            "is_outer": _flag(certificate.is_outer),
            "gap": certificate.gap,
            "log_abs_at_zero": certificate.log_abs_at_zero,
            "mean_log_abs": certificate.mean_log_abs,
            "clamped_fraction": certificate.clamped_fraction,
        },
        uncertain=certificate.verdict is OuterVerdict.BORDERLINE,
        notes=(f"verdict: {certificate.verdict.value}",),
    )


def _crofoot(request: ComputeRequestPayload, cfg: GridConfig, rng: np.random.Generator) -> ExperimentOutcome:
    assert request.symbol is not None and request.lam is not None
    descriptor = load_descriptor(request.symbol)
    if set(descriptor) != {"inner"}:
        raise ValidationError("crofoot needs an {\"inner\": ...} descriptor", details={"field": "symbol"})
    theta = make_inner(InnerSpec.from_mapping(descriptor["inner"]), cfg)
    transform = crofoot(theta, request.lam)
    symbol = ToeplitzSymbol.from_boundary(theta.samples.with_samples(np.conj(theta.samples.samples)), label="conj(theta)")
    tolerance = cfg.tol_singular if theta.singular_atoms else cfg.tol_residual

    isometry = residual = 0.0
    for _ in range(_positive_param(request.params, "trials", default=10)):
        f, _, _ = random_model_element(transform, rng)
        image = f.with_samples(transform.multiplier.samples * f.samples)
        isometry = max(isometry, abs(image.norm() / f.norm() - 1.0))
        residual = max(residual, residual_in_kernel(symbol, image))

    return ExperimentOutcome(
        checks=(
            Check.at_most("isometry_error", isometry, tolerance),
            Check.at_most("image_residual", residual, tolerance),
        ),
        metrics={
            "isometry_error": isometry,
            "image_residual": residual,
            "theta_at_lambda_re": transform.theta_at_lambda.real,
            "theta_at_lambda_im": transform.theta_at_lambda.imag,
        },
        artifacts={"theta_lambda": transform.theta_lambda.analytic_coefficients(), "multiplier": transform.multiplier.analytic_coefficients()},
    )


def _context(request: ComputeRequestPayload, cfg: GridConfig) -> ConjugationContext:
    symbol = _symbol(request, cfg)
    return ConjugationContext(symbol=symbol, kernel=numerical_kernel(symbol, _size(request, cfg), allow_uncertain=True))


def _conjugate(request: ComputeRequestPayload, cfg: GridConfig, rng: np.random.Generator) -> ExperimentOutcome:
    ctx = _context(request, cfg)
    f = _function(request, cfg)
    image = conjugate_in_kernel(ctx, f)
    twice = conjugate_in_kernel(ctx, image)
    involution = float(np.linalg.norm(twice.samples - f.samples) / np.linalg.norm(f.samples))
    modulus = float(np.max(np.abs(np.abs(image.samples) - np.abs(f.samples)))) / f.sup_norm()
    return ExperimentOutcome(
        checks=(
            Check.at_most("involution_error", involution, ctx.tolerance),
            Check.at_most("modulus_error", modulus, ctx.tolerance),
        ),
        metrics={"involution_error": involution, "modulus_error": modulus, "kernel_dimension": ctx.kernel.dimension},
        artifacts={"conjugate": image.analytic_coefficients()},
    )


def _eigen(request: ComputeRequestPayload, cfg: GridConfig, rng: np.random.Generator) -> ExperimentOutcome:
    result = eigenfunction_test(_context(request, cfg), _function(request, cfg))
    metrics = {
        "is_eigenfunction": _flag(result.eigenvalue is not None),
        "candidate_re": result.candidate.real,
        "candidate_im": result.candidate.imag,
        "residual": result.residual,
    }
    checks: tuple[Check, ...] = ()
    if result.maximal_cross_check is not None:
        checks = (Check.holds("maximal_cross_check", result.maximal_cross_check),)
    return ExperimentOutcome(checks=checks, metrics=metrics)


def _maximal_test(request: ComputeRequestPayload, cfg: GridConfig, rng: np.random.Generator) -> ExperimentOutcome:
    certificate = maximal_test(_symbol(request, cfg), _function(request, cfg))
    checks: tuple[Check, ...] = ()
    if certificate.direct_agrees is not None:
        checks = (Check.holds("direct_agrees", certificate.direct_agrees),)
    return ExperimentOutcome(
        checks=checks,
        metrics={
            "is_maximal": _flag(certificate.is_maximal),
            "analytic_defect": certificate.analytic_defect,
            "outer_gap": certificate.outer.gap,
            "residual": certificate.residual,
        },
        uncertain=certificate.outer.verdict is OuterVerdict.BORDERLINE,
    )


def _factor(request: ComputeRequestPayload, cfg: GridConfig, rng: np.random.Generator) -> ExperimentOutcome:
    symbol = _symbol(request, cfg)
    f = _function(request, cfg)
    if request.lam is None:
        factors = maximal_factorisation(symbol, f)
    else:
        factors = modified_factorisation(symbol, f, request.lam)
    return ExperimentOutcome(
        checks=(Check.at_most("reconstruction_residual", factors.reconstruction_residual, cfg.tol_residual),),
        metrics={"reconstruction_residual": factors.reconstruction_residual},
        artifacts={
            "inner": factors.inner.analytic_coefficients(),
            "outer_factor": factors.outer_factor.analytic_coefficients(),
        },
    )


def _rigidity(request: ComputeRequestPayload, cfg: GridConfig, rng: np.random.Generator) -> ExperimentOutcome:
    probe = square_rigidity_probe(_function(request, cfg), _size(request, cfg))
    return ExperimentOutcome(
        metrics={
            "rigid": _flag(probe.verdict is RigidityVerdict.RIGID_AT_SCALE),
            "dimension": probe.dimension,
            "gap": probe.gap,
            "max_residual": probe.max_residual,
        },
        uncertain=probe.verdict is RigidityVerdict.UNCERTAIN,
        notes=(f"verdict: {probe.verdict.value}",),
    )


def _jumps(request: ComputeRequestPayload, cfg: GridConfig, rng: np.random.Generator) -> ExperimentOutcome:
    analysis = piecewise_jump_exponents(_symbol(request, cfg))
    metrics: dict[str, float] = {"jump_count": len(analysis.jumps), "regular2": _flag(analysis.regular2)}
    for idx, jump in enumerate(analysis.jumps):
        metrics[f"jump{idx}_exponent_re"] = jump.exponent.real
        metrics[f"jump{idx}_exponent_im"] = jump.exponent.imag
    return ExperimentOutcome(
        metrics=metrics,
        artifacts={
            "points": [jump.point for jump in analysis.jumps],
            "exponents": [jump.exponent for jump in analysis.jumps],
        },
    )


def _hayashi(request: ComputeRequestPayload, cfg: GridConfig, rng: np.random.Generator) -> ExperimentOutcome:
    if request.function is not None:
        degree = _positive_param(request.params, "degree")
        rep: FiniteKernelRep | TrivialKernel = FiniteKernelRep(multiplier_w=_function(request, cfg), degree_n=degree)
    else:
        rep = halfinteger_symbol_kernel(_positive_param(request.params, "n"), cfg)

    if isinstance(rep, TrivialKernel):
        return ExperimentOutcome(
            checks=(Check.at_least("smallest_singular_value", rep.smallest_singular_value, rep.threshold),),
            metrics={"dimension": 0, "gap": rep.gap},
            uncertain=rep.gap < 10.0,
        )

    iso = isometric_multiplier_finite(rep)
    isometry = iso.isometry_error(rng, trials=_positive_param(request.params, "trials", default=20))
    tolerance = rep.tolerance or cfg.tol_residual
    checks = [Check.at_most("isometry_error", isometry, max(tolerance, cfg.tol_residual))]
    if rep.residuals:
        checks.append(Check.at_most("max_basis_residual", max(rep.residuals), tolerance))
    artifacts: dict[str, Any] = {"polynomial": iso.polynomial}
    if iso.alpha_zeros is not None:
        artifacts["alpha_zeros"] = list(iso.alpha_zeros)
    return ExperimentOutcome(
        checks=tuple(checks),
        metrics={
            "dimension": rep.degree_n,
            "isometry_error": isometry,
            "gram_condition": iso.gram_condition,
            "alpha_defect": iso.alpha_defect,
        },
        artifacts=artifacts,
    )


def _positive_param(params: Mapping[str, Any], name: str, *, default: int | None = None) -> int:
    value = params.get(name, default)
    if value is None:
        raise ValidationError(f"param {name!r} is required", details={"field": name})
    return coerce_int(value, field_name=name, low=1, high=MAX_PARAM_VALUE)


_HANDLERS: dict[str, ComputeHandler] = {
    "kernel": _kernel,
    "inner-outer": _inner_outer,
    "outer-test": _outer_test,
    "crofoot": _crofoot,
    "conjugate": _conjugate,
    "eigen": _eigen,
    "maximal-test": _maximal_test,
    "factor": _factor,
    "rigidity": _rigidity,
    "jumps": _jumps,
    "hayashi": _hayashi,
}


class DescriptorComputer:
    """Adapter from ``run_compute`` to the application compute port."""

    def compute(self, request: ComputeRequestPayload, cfg: GridConfig) -> ExperimentReport:
        return run_compute(request, cfg)
