"""Inner-outer factorisation of sampled Hardy functions."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from toeplab.boundary.functions import (
    BoundaryFunction,
    HardyFunction,
    OuterCertificate,
    analytic_completion,
    grid_nodes,
    membership_tolerance,
    outer_test,
)
from toeplab.core.errors import FactorisationFailed, TooManyBoundaryZeros, ZeroFunction

logger = logging.getLogger(__name__)

MAX_ROOT_DEGREE = 32
CLAMP_LIMIT = 0.05
CLAMP_WARNING = 0.01


@dataclass(frozen=True)
class InnerOuterPair:
    """f = inner·outer with outer(0) > 0."""

    inner: HardyFunction
    outer: HardyFunction
    residual: float
    method: str
    certificate: OuterCertificate
    clamped_fraction: float = 0.0
    inner_defect: float = 0.0
    zeros: tuple[complex, ...] | None = None


def inner_outer(f: HardyFunction) -> InnerOuterPair:
    """Split ``f`` into inner and outer parts.

    Polynomials of low degree go through root finding; everything else uses
    O = exp(analytic completion of log|f|), with log|f| clamped at
    log(tol_coeff).
    """

    cfg = f.config
    scale = f.norm()
    if scale <= cfg.tol_coeff:
        raise ZeroFunction("inner-outer factorisation of the zero function")

    coefficients = _low_degree_coefficients(f)
    if coefficients is not None:
        pair = _factor_polynomial(f, coefficients)
    else:
        pair = _factor_log_modulus(f)

    logger.debug(
        "inner_outer(%s): residual=%.3e inner_defect=%.3e clamped=%.4f",
        pair.method,
        pair.residual,
        pair.inner_defect,
        pair.clamped_fraction,
    )
    return pair


def _low_degree_coefficients(f: HardyFunction) -> np.ndarray | None:
    if f.singular_points:
        return None
    spectrum = f.spectrum
    threshold = f.config.tol_coeff * max(f.norm(), 1.0)
    if np.any(np.abs(spectrum[MAX_ROOT_DEGREE + 1 :]) > threshold):
        return None
    coefficients = np.array(spectrum[: MAX_ROOT_DEGREE + 1])
    significant = np.nonzero(np.abs(coefficients) > threshold)[0]
    if significant.size == 0:
        return None
    return coefficients[: significant[-1] + 1]


def _factor_polynomial(f: HardyFunction, coefficients: np.ndarray) -> InnerOuterPair:
    cfg = f.config
    threshold = cfg.tol_coeff * max(f.norm(), 1.0)
    # zeros at the origin are split off exactly; polyroots smears repeated roots
    origin = 0
    while origin < coefficients.size - 1 and abs(coefficients[origin]) <= threshold:
        origin += 1
    coefficients = coefficients[origin:]
    roots = P.polyroots(coefficients) if coefficients.size > 1 else np.array([], dtype=np.complex128)
    inside = (0j,) * origin + tuple(complex(r) for r in roots if abs(r) < 1.0 - cfg.tol_outer)
    outside = [complex(r) for r in roots if abs(r) >= 1.0 - cfg.tol_outer]

    outer_coef = np.array([coefficients[-1]], dtype=np.complex128)
    if outside:
        outer_coef = P.polymul(outer_coef, P.polyfromroots(outside))
    for r in inside:
        if r != 0:
            outer_coef = P.polymul(outer_coef, np.array([1.0, -np.conj(r)]))
    at_zero = complex(outer_coef[0])
    if abs(at_zero) <= cfg.tol_coeff:
        raise FactorisationFailed("outer factor vanishes at the origin", details={"roots": len(roots)})
    phase = at_zero / abs(at_zero)
    outer_coef = outer_coef / phase

    nodes = grid_nodes(cfg)
    inner_samples = np.full(cfg.grid_size, phase, dtype=np.complex128)
    for r in inside:
        inner_samples *= (nodes - r) / (1.0 - np.conj(r) * nodes)

    def inner_eval(z: complex) -> complex:
        value = complex(phase)
        for r in inside:
            value *= (z - r) / (1.0 - r.conjugate() * z)
        return value

    outer = HardyFunction(
        P.polyval(nodes, outer_coef),
        cfg,
        evaluator=lambda z: complex(P.polyval(complex(z), outer_coef)),
    )
    inner = HardyFunction(inner_samples, cfg, evaluator=inner_eval)
    residual = float(np.linalg.norm(f.samples - inner_samples * outer.samples) / np.linalg.norm(f.samples))
    return InnerOuterPair(
        inner=inner,
        outer=outer,
        residual=residual,
        method="roots",
        certificate=outer_test(outer),
        inner_defect=inner.analytic_defect,
        zeros=inside,
    )


def _factor_log_modulus(f: HardyFunction) -> InnerOuterPair:
    cfg = f.config
    modulus = np.abs(f.samples)
    clamped = modulus < cfg.tol_coeff
    fraction = float(np.mean(clamped))
    if fraction > CLAMP_LIMIT:
        raise TooManyBoundaryZeros(
            f"log-modulus clamp touched {fraction:.2%} of the samples",
            details={"clamped_fraction": fraction, "limit": CLAMP_LIMIT},
        )
    if fraction > CLAMP_WARNING:
        logger.warning("inner_outer: clamp touched %.2f%% of the samples", 100.0 * fraction)

    log_modulus = BoundaryFunction(np.log(np.maximum(modulus, cfg.tol_coeff)), cfg, f.singular_points)
    completion = analytic_completion(log_modulus)
    outer_samples = np.exp(completion.samples)
    log_eval = completion.evaluator

    outer = HardyFunction(
        outer_samples,
        cfg,
        f.singular_points,
        evaluator=lambda z: complex(np.exp(log_eval(z))),
    )

    quotient = f.samples / outer_samples
    size = np.abs(quotient)
    inner_samples = np.where(size > 0.0, quotient / np.where(size > 0.0, size, 1.0), 1.0)
    inner_samples = np.where(clamped, inner_samples, quotient)

    inner_eval = None
    if f.evaluator is not None:
        f_eval = f.evaluator

        def inner_eval(z: complex) -> complex:
            return complex(f_eval(z)) / complex(np.exp(log_eval(z)))

    inner = HardyFunction(inner_samples, cfg, f.singular_points, evaluator=inner_eval)
    residual = float(np.linalg.norm(f.samples - inner_samples * outer_samples) / np.linalg.norm(f.samples))
    defect = inner.analytic_defect
    limit = 100.0 * membership_tolerance(f)
    if defect > limit:
        raise FactorisationFailed(
            f"inner part is not analytic: defect {defect:.3e} exceeds {limit:.1e}",
            details={"inner_defect": defect, "limit": limit},
        )
    return InnerOuterPair(
        inner=inner,
        outer=outer,
        residual=residual,
        method="log-modulus",
        certificate=outer_test(outer),
        clamped_fraction=fraction,
        inner_defect=defect,
    )
