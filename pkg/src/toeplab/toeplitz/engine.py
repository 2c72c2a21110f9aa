"""Finite sections, numerical Toeplitz kernels and kernel comparisons."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.linalg

from toeplab.boundary.functions import (
    BoundaryFunction,
    HardyFunction,
    Singularity,
    backward_shift,
    band_plus_norm,
    complex_conjugate,
    grid_nodes,
    membership_tolerance,
    merge_singular_points,
    pointwise_multiply,
    samples_from_spectrum,
)
from toeplab.core.config import GridConfig
from toeplab.core.errors import (
    FactorisationFailed,
    SizeExceedsTruncation,
    UncertainDimension,
    ValidationError,
    ZeroFunction,
)
from toeplab.factorization.outer import inner_outer

logger = logging.getLogger(__name__)

GAP_RATIO = 10.0
DEFAULT_SECTION_SIZE = 128


class InclusionVerdict(str, Enum):
    INCLUDED = "Included"
    NOT_INCLUDED = "NotIncluded"
    UNCERTAIN = "Uncertain"


@dataclass(frozen=True)
class ToeplitzSymbol:
    """Boundary values of g with the metadata the engine dispatches on."""

    boundary: BoundaryFunction
    unimodular: bool
    jump_points: tuple[complex, ...] = ()
    label: str = ""

    def __post_init__(self) -> None:
        if self.unimodular:
            deviation = unimodular_deviation(self.boundary)
            if deviation > unimodular_tolerance(self.boundary):
                raise ValidationError(
                    f"symbol flagged unimodular deviates by {deviation:.3e}",
                    details={"deviation": deviation},
                )

    @classmethod
    def from_boundary(cls, boundary: BoundaryFunction, *, label: str = "") -> "ToeplitzSymbol":
        """Infer the unimodular flag and jump points from the samples."""

        unimodular = unimodular_deviation(boundary) <= unimodular_tolerance(boundary)
        jumps = tuple(item.point for item in boundary.singular_points if item.kind is Singularity.JUMP)
        return cls(boundary=boundary, unimodular=unimodular, jump_points=jumps, label=label)

    @property
    def config(self):
        return self.boundary.config

    def scaled(self, factor: complex) -> "ToeplitzSymbol":
        return ToeplitzSymbol.from_boundary(self.boundary * factor, label=self.label)


@dataclass(frozen=True, eq=False)
class KernelBasis:
    """Orthonormal numerical basis of ker T_g with its certificate."""

    vectors: tuple[HardyFunction, ...]
    residuals: tuple[float, ...]
    dimension: int
    gap: float
    certain: bool
    tolerance: float
    size: int
    singular_values: tuple[float, ...] = field(default=())

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)

    def coefficient_matrix(self) -> np.ndarray:
        """Columns hold c_0..c_N of each vector."""

        if not self.vectors:
            return np.zeros((0, 0), dtype=np.complex128)
        return np.column_stack([v.analytic_coefficients() for v in self.vectors])


def unimodular_deviation(f: BoundaryFunction) -> float:
    return float(np.max(np.abs(np.abs(f.samples) - 1.0)))


def unimodular_tolerance(f: BoundaryFunction) -> float:
    """10·tol_coeff, or tol_residual when the samples carry singular points."""

    cfg = f.config
    return cfg.tol_residual if f.singular_points else 10.0 * cfg.tol_coeff


def section_size(cfg: GridConfig, size: int | None = None) -> int:
    return size if size is not None else min(DEFAULT_SECTION_SIZE, cfg.truncation)


def kernel_tolerance(g: ToeplitzSymbol) -> float:
    return membership_tolerance(g.boundary)


def toeplitz_section(g: ToeplitzSymbol, rows: int, cols: int) -> np.ndarray:
    """Rectangular finite section, entry (j, k) = ĝ(j−k)."""

    half = g.config.grid_size // 2
    if rows > half or cols > half:
        raise SizeExceedsTruncation(f"section {rows}x{cols} exceeds the grid band")
    spectrum = g.boundary.spectrum
    column = np.array([spectrum[j] for j in range(rows)])
    row = np.array([spectrum[-k % g.config.grid_size] for k in range(cols)])
    return scipy.linalg.toeplitz(column, row)


def toeplitz_matrix(g: ToeplitzSymbol, size: int) -> np.ndarray:
    """Square finite section T_size(g)."""

    if size > g.config.truncation or size <= 0:
        raise SizeExceedsTruncation(
            f"size {size} must be in 1..{g.config.truncation}",
            details={"size": size, "truncation": g.config.truncation},
        )
    return toeplitz_section(g, size, size)


def residual_in_kernel(g: ToeplitzSymbol, f: BoundaryFunction) -> float:
    """‖P⁺(g·f)‖/‖f‖, with P⁺ read on the coefficient band 0..N."""

    scale = f.norm()
    if scale <= f.config.tol_coeff:
        raise ZeroFunction("residual of the zero function is undefined")
    return band_plus_norm(pointwise_multiply(g.boundary, f)) / scale


def _polynomial_function(coordinates: np.ndarray, g: ToeplitzSymbol) -> HardyFunction:
    cfg = g.config
    spectrum = np.zeros(cfg.grid_size, dtype=np.complex128)
    spectrum[: coordinates.shape[0]] = coordinates
    return HardyFunction(samples_from_spectrum(spectrum, cfg), cfg)


def numerical_kernel(
    g: ToeplitzSymbol,
    size: int | None = None,
    *,
    allow_uncertain: bool = False,
) -> KernelBasis:
    """Null space of the tall section T_{2n×n}(g), re-verified against g.

    The dimension is the last split d with s_d at most tol_section and
    s_{d+1}/s_d at least GAP_RATIO, so graded steps below the threshold all
    count toward the kernel. Without such a split the largest ratio is
    reported and the dimension is uncertain. ``size`` defaults to
    min(DEFAULT_SECTION_SIZE, truncation).
    """

    cfg = g.config
    size = section_size(cfg, size)
    if size > cfg.truncation or size <= 0:
        raise SizeExceedsTruncation(
            f"size {size} must be in 1..{cfg.truncation}",
            details={"size": size, "truncation": cfg.truncation},
        )

    section = toeplitz_section(g, 2 * size, size)
    _, singular, vh = scipy.linalg.svd(section, full_matrices=False)
    ascending = singular[::-1]
    threshold = cfg.tol_section
    floor = max(np.finfo(float).eps * float(singular[0]), np.finfo(float).tiny)

    dimension = 0
    gap = float(ascending[0]) / threshold
    if ascending[-1] <= threshold:
        dimension, gap = size, 1.0
    else:
        best, best_at = 0.0, 0
        for d in range(1, size):
            if ascending[d - 1] > threshold:
                break
            ratio = float(ascending[d]) / max(float(ascending[d - 1]), floor)
            if ratio >= GAP_RATIO:
                dimension, gap = d, ratio
            if ratio > best:
                best, best_at = ratio, d
        if not dimension and best_at:
            dimension, gap = best_at, best

    coordinates = np.conj(vh[size - dimension :]).T if dimension else np.zeros((size, 0))
    vectors = tuple(_polynomial_function(coordinates[:, idx], g) for idx in range(dimension))
    tolerance = max(kernel_tolerance(g), cfg.tol_section if g.jump_points else 0.0)
    residuals = tuple(residual_in_kernel(g, v) for v in vectors)

    verified = all(r <= tolerance for r in residuals)
    certain = gap >= GAP_RATIO and verified and dimension < size
    basis = KernelBasis(
        vectors=vectors,
        residuals=residuals,
        dimension=dimension,
        gap=gap,
        certain=certain,
        tolerance=tolerance,
        size=size,
        singular_values=tuple(float(s) for s in ascending[: min(size, dimension + 8)]),
    )
    logger.debug("kernel %s: dimension=%d gap=%.3g max_residual=%.3e", g.label, dimension, gap, basis.max_residual)

    if not certain:
        reason = "residual" if not verified else "gap"
        logger.warning("kernel %s: uncertain dimension %d (%s, gap %.3g)", g.label, dimension, reason, gap)
        if not allow_uncertain:
            raise UncertainDimension(
                f"dimension {dimension} is not certified ({reason}; gap {gap:.3g})",
                candidate=basis,
                details={"dimension": dimension, "gap": _finite(gap), "reason": reason},
            )
    return basis


def minimal_kernel_symbol(f: HardyFunction) -> ToeplitzSymbol:
    """z̄·conj(I)·conj(O)/O for f = I·O: the smallest kernel containing f.

    Raises FactorisationFailed when f itself misses the kernel of the result
    by more than the membership tolerance.
    """

    pair = inner_outer(f)
    cfg = f.config
    outer = pair.outer.samples
    phase = np.ones_like(outer)
    np.divide(np.conj(outer), outer, out=phase, where=np.abs(outer) > np.finfo(float).tiny)
    samples = np.conj(grid_nodes(cfg)) * np.conj(pair.inner.samples) * phase
    samples = samples / np.abs(samples)
    points = merge_singular_points(f.singular_points)
    symbol = ToeplitzSymbol.from_boundary(BoundaryFunction(samples, cfg, points), label="minimal")

    residual = residual_in_kernel(symbol, f)
    tolerance = kernel_tolerance(symbol)
    if not residual <= tolerance:
        raise FactorisationFailed(
            f"f misses its minimal kernel by {residual:.3e}",
            details={"residual": _finite(residual), "tolerance": tolerance},
        )
    return symbol


def kernel_inclusion_probe(h: ToeplitzSymbol, g: ToeplitzSymbol, size: int | None = None) -> InclusionVerdict:
    """Is ker T_h ⊂ ker T_g? Every basis vector of ker T_h is tested under g."""

    basis = numerical_kernel(h, size)
    if basis.dimension == 0:
        return InclusionVerdict.INCLUDED
    tolerance = max(basis.tolerance, kernel_tolerance(g))
    residuals = [residual_in_kernel(g, v) for v in basis.vectors]
    worst = max(residuals)
    if worst <= tolerance:
        return InclusionVerdict.INCLUDED
    if worst <= 10.0 * tolerance:
        return InclusionVerdict.UNCERTAIN
    return InclusionVerdict.NOT_INCLUDED


def kernels_equal(g1: ToeplitzSymbol, g2: ToeplitzSymbol, size: int | None = None) -> bool:
    return (
        kernel_inclusion_probe(g1, g2, size) is InclusionVerdict.INCLUDED
        and kernel_inclusion_probe(g2, g1, size) is InclusionVerdict.INCLUDED
    )


def kernel_angles(first: KernelBasis | np.ndarray, second: KernelBasis | np.ndarray) -> float:
    """Largest principal angle between two spans (π/2 if dimensions differ)."""

    a = first.coefficient_matrix() if isinstance(first, KernelBasis) else np.asarray(first)
    b = second.coefficient_matrix() if isinstance(second, KernelBasis) else np.asarray(second)
    if a.size == 0 and b.size == 0:
        return 0.0
    if a.size == 0 or b.size == 0 or a.shape[1] != b.shape[1]:
        return math.pi / 2.0
    return float(np.max(scipy.linalg.subspace_angles(a, b)))


def span_coefficients(functions: list[HardyFunction]) -> np.ndarray:
    return np.column_stack([f.analytic_coefficients() for f in functions])


def multiplier_symbol(h: ToeplitzSymbol, w: HardyFunction) -> ToeplitzSymbol:
    """h·conj(w)/w: the symbol whose kernel contains w·ker T_h."""

    ratio = complex_conjugate(w).samples / w.samples
    points = merge_singular_points(h.boundary.singular_points, w.singular_points)
    return ToeplitzSymbol.from_boundary(
        BoundaryFunction(h.boundary.samples * ratio, h.config, points),
        label=f"{h.label}*conj(w)/w",
    )


def near_invariance_defect(g: ToeplitzSymbol, basis: KernelBasis) -> float:
    """Worst residual of S*f over the combinations f of the basis with f(0) = 0."""

    if basis.dimension == 0:
        return 0.0
    values_at_zero = np.array([[v.coefficient(0) for v in basis.vectors]])
    combos = scipy.linalg.null_space(values_at_zero) if np.any(np.abs(values_at_zero) > 0) else np.eye(basis.dimension)
    worst = 0.0
    for column in combos.T:
        samples = sum(c * v.samples for c, v in zip(column, basis.vectors))
        f = HardyFunction(samples, g.config, merge_singular_points(*(v.singular_points for v in basis.vectors)))
        shifted = backward_shift(f)
        if shifted.norm() <= g.config.tol_coeff:
            continue
        worst = max(worst, residual_in_kernel(g, shifted))
    return worst


def _finite(value: float) -> float:
    return value if math.isfinite(value) else 1e300
