"""Isometric representations of finite-dimensional Toeplitz kernels.

A kernel written as w·K_{zⁿ} is turned into u·K_{zα} with u an isometric
multiplier: the vector 𝒰 = w − P(w) orthogonal to {w z^j, 1 ≤ j < n} gives
u = 𝒰/‖𝒰‖, and 𝒰 = w·p for a polynomial p whose reciprocal roots are the
zeros of α.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from numpy.polynomial import polynomial as P

from toeplab.boundary.functions import (
    BoundaryFunction,
    HardyFunction,
    OuterVerdict,
    SingularPoint,
    Singularity,
    analytic_completion,
    grid_angles,
    principal_power,
    grid_nodes,
    outer_test,
    value_at_zero,
)
from toeplab.core.config import GridConfig
from toeplab.core.errors import (
    EvenN,
    IllConditionedGram,
    LimitEstimationFailed,
    NonpositiveAtZero,
    NotOuter,
    ValidationError,
)
from toeplab.inner.functions import InnerFunction
from toeplab.toeplitz.engine import (
    ToeplitzSymbol,
    numerical_kernel,
    residual_in_kernel,
)

logger = logging.getLogger(__name__)

GRAM_CONDITION_LIMIT = 1e12
ROOT_RECOVERY_DEGREE = 8
EXTRAPOLATION_POINTS = 4


@dataclass(frozen=True, eq=False)
class FiniteKernelRep:
    """ker T_g = w·K_{zⁿ}."""

    multiplier_w: HardyFunction
    degree_n: int
    symbol: ToeplitzSymbol | None = None
    residuals: tuple[float, ...] = ()
    tolerance: float | None = None
    non_membership: float | None = None

    def basis(self) -> list[HardyFunction]:
        cfg = self.multiplier_w.config
        nodes = grid_nodes(cfg)
        points = self.multiplier_w.singular_points
        return [HardyFunction(self.multiplier_w.samples * nodes**j, cfg, points) for j in range(self.degree_n)]


@dataclass(frozen=True)
class TrivialKernel:
    """Evidence that ker T_g = {0}: no singular value below the threshold."""

    label: str
    smallest_singular_value: float
    threshold: float
    gap: float


@dataclass(frozen=True, eq=False)
class IsometricRep:
    """u·K_{zα} with ‖u f‖ = ‖f‖ on K_{zα}; α is held as boundary samples."""

    u: HardyFunction
    alpha_boundary: BoundaryFunction
    orthogonal_vector: HardyFunction
    polynomial: np.ndarray
    gram_condition: float
    alpha_defect: float
    alpha_zeros: tuple[complex, ...] | None = None

    @property
    def degree_n(self) -> int:
        return int(self.polynomial.size)

    def model_element(self, coefficients: np.ndarray) -> HardyFunction:
        """q/p in K_{zα} for q with the given ascending coefficients (deg q < n)."""

        cfg = self.u.config
        nodes = grid_nodes(cfg)
        return HardyFunction(P.polyval(nodes, coefficients) / P.polyval(nodes, self.polynomial), cfg)

    def isometry_error(self, rng: np.random.Generator, trials: int = 50) -> float:
        """max |‖u f‖/‖f‖ − 1| over random f in K_{zα}."""

        worst = 0.0
        for _ in range(trials):
            coefficients = rng.normal(size=self.degree_n) + 1j * rng.normal(size=self.degree_n)
            f = self.model_element(coefficients)
            image = BoundaryFunction(self.u.samples * f.samples, f.config)
            worst = max(worst, abs(image.norm() / f.norm() - 1.0))
        return worst


@dataclass(frozen=True, eq=False)
class HerglotzParameters:
    F: HardyFunction
    b: HardyFunction
    a: HardyFunction
    u_alpha: BoundaryFunction
    identity_error: float
    b_sup: float


@dataclass(frozen=True)
class JumpExponent:
    point: complex
    exponent: complex
    left_limit: complex
    right_limit: complex


@dataclass(frozen=True)
class JumpAnalysis:
    jumps: tuple[JumpExponent, ...]
    regular2: bool


def isometric_multiplier_finite(rep: FiniteKernelRep) -> IsometricRep:
    """Solve the Gram normal equations for the projection of w onto ℬ₀ = {w z^j, j ≥ 1}."""

    n = rep.degree_n
    if n < 1:
        raise ValidationError("degree_n must be >= 1", details={"degree_n": n})
    w = rep.multiplier_w
    cfg = w.config
    nodes = grid_nodes(cfg)
    weight = BoundaryFunction(np.abs(w.samples) ** 2, cfg)

    if n == 1:
        coefficients = np.zeros(0, dtype=np.complex128)
        condition = 1.0
    else:
        # ⟨w z^k, w z^j⟩ = ĉ(j − k) for c = |w|²
        gram = np.array([[weight.coefficient(j - k) for k in range(1, n)] for j in range(1, n)])
        rhs = np.array([weight.coefficient(j) for j in range(1, n)])
        condition = float(np.linalg.cond(gram))
        if not math.isfinite(condition) or condition > GRAM_CONDITION_LIMIT:
            raise IllConditionedGram(
                f"Gram matrix condition number {condition:.3e} exceeds {GRAM_CONDITION_LIMIT:.0e}",
                details={"condition": condition if math.isfinite(condition) else None},
            )
        coefficients = scipy.linalg.solve(gram, rhs, assume_a="her")

    polynomial = np.concatenate([[1.0 + 0j], -coefficients])
    p_samples = P.polyval(nodes, polynomial)
    orthogonal = HardyFunction(w.samples * p_samples, cfg, w.singular_points)
    norm = orthogonal.norm()

    phase = 1.0 + 0j
    at_zero = value_at_zero(w)
    if abs(at_zero) > cfg.tol_coeff:
        phase = at_zero / abs(at_zero)
    u = HardyFunction(orthogonal.samples / (norm * phase), cfg, w.singular_points)

    alpha_samples = nodes ** (n - 1) * np.conj(p_samples) / p_samples
    alpha = BoundaryFunction(alpha_samples, cfg)
    alpha_zeros = None
    if n - 1 <= ROOT_RECOVERY_DEGREE:
        roots = P.polyroots(polynomial) if n > 1 else np.array([])
        # a degree drop in p leaves zeros of alpha at the origin
        alpha_zeros = tuple(complex(np.conj(1.0 / r)) for r in roots) + (0j,) * (n - 1 - len(roots))
    logger.debug("isometric_multiplier_finite: n=%d cond=%.3g alpha_zeros=%s", n, condition, alpha_zeros)
    return IsometricRep(
        u=u,
        alpha_boundary=alpha,
        orthogonal_vector=orthogonal,
        polynomial=polynomial,
        gram_condition=condition,
        alpha_defect=alpha.analytic_defect,
        alpha_zeros=alpha_zeros,
    )


def herglotz_parameters(u: HardyFunction, alpha: InnerFunction | BoundaryFunction) -> HerglotzParameters:
    """F = Herglotz integral of |u|², b = (F−1)/(F+1), a = 2u/(F+1), u_α = a/(1−αb)."""

    cfg = u.config
    certificate = outer_test(u)
    if certificate.verdict is not OuterVerdict.OUTER:
        raise NotOuter(f"u is not outer (gap {certificate.gap:.3e})", details={"gap": certificate.gap})
    at_zero = value_at_zero(u)
    if at_zero.real <= cfg.tol_coeff or abs(at_zero.imag) > cfg.tol_residual * max(1.0, abs(at_zero)):
        raise NonpositiveAtZero(f"u(0) = {at_zero} is not real and positive")

    F = analytic_completion(BoundaryFunction(np.abs(u.samples) ** 2, cfg, u.singular_points))
    f_eval = F.evaluator
    b = HardyFunction((F.samples - 1.0) / (F.samples + 1.0), cfg, u.singular_points, evaluator=_mobius(f_eval))
    a_eval = None
    if u.evaluator is not None:
        u_eval = u.evaluator

        def a_eval(z: complex) -> complex:
            return 2.0 * complex(u_eval(z)) / (complex(f_eval(z)) + 1.0)

    a = HardyFunction(2.0 * u.samples / (F.samples + 1.0), cfg, u.singular_points, evaluator=a_eval)
    alpha_samples = alpha.samples.samples if isinstance(alpha, InnerFunction) else alpha.samples
    u_alpha = BoundaryFunction(a.samples / (1.0 - alpha_samples * b.samples), cfg, u.singular_points)

    identity = np.abs(a.samples) ** 2 + np.abs(b.samples) ** 2
    return HerglotzParameters(
        F=F,
        b=b,
        a=a,
        u_alpha=u_alpha,
        identity_error=float(np.max(np.abs(identity - 1.0))),
        b_sup=b.sup_norm(),
    )


def _mobius(f_eval):
    def evaluate(z: complex) -> complex:
        value = complex(f_eval(z))
        return (value - 1.0) / (value + 1.0)

    return evaluate


def half_power_symbol(n: int, cfg: GridConfig, *, cut: int = -1) -> ToeplitzSymbol:
    """z̄^{n/2}, principal branch with the cut at ``cut``."""

    values = principal_power(cfg, -n / 2.0, cut=cut)
    points = (SingularPoint(complex(cut), Singularity.JUMP),) if n % 2 else ()
    return ToeplitzSymbol.from_boundary(BoundaryFunction(values, cfg, points), label=f"conj(z)^({n}/2)")


def sqrt_one_plus_z(cfg: GridConfig) -> HardyFunction:
    """(1+z)^{1/2}, principal branch, with an exact evaluator."""

    nodes = grid_nodes(cfg)
    return HardyFunction(
        np.sqrt(1.0 + nodes),
        cfg,
        (SingularPoint(-1.0 + 0j, Singularity.BRANCH),),
        evaluator=lambda z: cmath.sqrt(1.0 + complex(z)),
    )


def halfinteger_symbol_kernel(n: int, cfg: GridConfig) -> FiniteKernelRep | TrivialKernel:
    """ker T_{z̄^{n/2}} = (1+z)^{1/2}·K_{z^N}, N = (n−1)/2, trivial for n = 1."""

    if isinstance(n, bool) or not isinstance(n, int) or n < 1 or n % 2 == 0:
        raise EvenN(f"n must be an odd positive integer, got {n!r}", details={"n": n})
    symbol = half_power_symbol(n, cfg)

    if n == 1:
        basis = numerical_kernel(symbol, allow_uncertain=True)
        smallest = basis.singular_values[0] if basis.singular_values else float("nan")
        return TrivialKernel(label=symbol.label, smallest_singular_value=smallest, threshold=cfg.tol_section, gap=basis.gap)

    degree = (n - 1) // 2
    w = sqrt_one_plus_z(cfg)
    rep = FiniteKernelRep(multiplier_w=w, degree_n=degree, symbol=symbol, tolerance=cfg.tol_branch)
    residuals = tuple(residual_in_kernel(symbol, v) for v in rep.basis())
    outside = HardyFunction(w.samples * grid_nodes(cfg) ** degree, cfg, w.singular_points)
    margin = residual_in_kernel(symbol, outside)
    if max(residuals) > cfg.tol_branch:
        logger.warning("half-integer kernel n=%d: basis residual %.3e above tol_branch", n, max(residuals))
    if margin <= 100.0 * cfg.tol_branch:
        logger.warning("half-integer kernel n=%d: non-membership margin %.3e is thin", n, margin)
    return FiniteKernelRep(
        multiplier_w=w,
        degree_n=degree,
        symbol=symbol,
        residuals=residuals,
        tolerance=cfg.tol_branch,
        non_membership=margin,
    )


def piecewise_jump_exponents(g: ToeplitzSymbol) -> JumpAnalysis:
    """α_k = log(g(c⁻)/g(c⁺))/(2πi) with Re α_k in [−1/2, 1/2).

    One-sided limits are extrapolated to zero offset from the nearest
    samples on each side; a lower-order fit must agree to tol_section.
    Exponents within tol_section of ±1/2 make the symbol not regular2; a
    rounding-level offset below 1/2 is read as −1/2.
    """

    cfg = g.config
    tolerance = cfg.tol_section
    jumps: list[JumpExponent] = []
    for point in g.jump_points:
        left = _one_sided_limit(g, point, side=-1)
        right = _one_sided_limit(g, point, side=1)
        if abs(right) <= cfg.tol_coeff or abs(left) <= cfg.tol_coeff:
            raise LimitEstimationFailed("symbol vanishes at a jump point", details={"point": [point.real, point.imag]})
        ratio = left / right
        exponent = cmath.log(ratio) / (2j * math.pi)
        if exponent.real >= 0.5:
            exponent -= 1.0
        elif 0.5 - exponent.real <= 10.0 * cfg.tol_coeff:
            exponent = complex(-0.5, exponent.imag)
        jumps.append(JumpExponent(point=complex(point), exponent=complex(exponent), left_limit=left, right_limit=right))

    regular2 = all(0.5 - abs(item.exponent.real) > tolerance for item in jumps)
    logger.debug("piecewise_jump_exponents: %d jumps, regular2=%s", len(jumps), regular2)
    return JumpAnalysis(jumps=tuple(jumps), regular2=regular2)


def _one_sided_limit(g: ToeplitzSymbol, point: complex, *, side: int) -> complex:
    cfg = g.config
    angles = grid_angles(cfg)
    offsets = np.angle(np.exp(1j * (angles - cmath.phase(point))))
    mask = offsets * side > 0
    order = np.argsort(np.abs(offsets[mask]))[:EXTRAPOLATION_POINTS]
    distance = np.abs(offsets[mask][order])
    values = g.boundary.samples[mask][order]

    full = _extrapolate(distance, values, EXTRAPOLATION_POINTS - 1)
    reduced = _extrapolate(distance[:-1], values[:-1], EXTRAPOLATION_POINTS - 2)
    if abs(full - reduced) > cfg.tol_section * max(1.0, abs(full)):
        raise LimitEstimationFailed(
            f"one-sided limit at {point} did not converge ({abs(full - reduced):.3e})",
            details={"point": [point.real, point.imag], "side": side},
        )
    return complex(full)


def _extrapolate(distance: np.ndarray, values: np.ndarray, degree: int) -> complex:
    real = P.polyfit(distance, values.real, degree)[0]
    imag = P.polyfit(distance, values.imag, degree)[0]
    return complex(real, imag)
