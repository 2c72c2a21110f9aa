"""Structured inner functions, model spaces and the Crofoot transform."""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Mapping, Sequence

import numpy as np

from toeplab.boundary.functions import (
    BoundaryFunction,
    HardyFunction,
    SingularPoint,
    Singularity,
    complex_conjugate,
    grid_nodes,
    inner_product,
    pointwise_multiply,
    project_plus,
)
from toeplab.core.config import GridConfig
from toeplab.core.errors import (
    LambdaOutsideDisk,
    NonpositiveMass,
    NotFiniteBlaschke,
    ThetaUnimodularAtLambda,
    ValidationError,
    ZeroOnOrOutsideDisk,
)
from toeplab.core.validators import coerce_complex, complex_to_pair

logger = logging.getLogger(__name__)

# |z − λ| below this switches k̃ evaluation to the derivative limit.
_REMOVABLE_RADIUS = 1e-7


@dataclass(frozen=True)
class InnerSpec:
    """Descriptor-level data for an inner function; atoms are (angle, mass)."""

    zeros: tuple[complex, ...] = ()
    atoms: tuple[tuple[float, float], ...] = ()
    power: int = 0
    constant: complex = 1.0 + 0.0j

    @classmethod
    def from_mapping(cls, raw: Mapping[str, Any]) -> "InnerSpec":
        if not isinstance(raw, Mapping):
            raise ValidationError("inner spec must be an object")
        unknown = set(raw) - {"zeros", "atoms", "power", "constant"}
        if unknown:
            raise ValidationError(f"unknown inner spec keys: {sorted(unknown)}")

        zeros_raw = raw.get("zeros") or []
        atoms_raw = raw.get("atoms") or []
        if not isinstance(zeros_raw, (list, tuple)) or not isinstance(atoms_raw, (list, tuple)):
            raise ValidationError("zeros and atoms must be lists")

        zeros = tuple(coerce_complex(item, field_name=f"zeros[{idx}]") for idx, item in enumerate(zeros_raw))
        atoms: list[tuple[float, float]] = []
        for idx, item in enumerate(atoms_raw):
            if not isinstance(item, (list, tuple)) or len(item) != 2:
                raise ValidationError(f"atoms[{idx}] must be [angle, mass]")
            try:
                atoms.append((float(item[0]), float(item[1])))
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"atoms[{idx}] must hold numbers") from exc

        power = raw.get("power", 0)
        if isinstance(power, bool) or not isinstance(power, int) or power < 0:
            raise ValidationError("power must be a nonnegative integer")
        constant = coerce_complex(raw.get("constant", 1.0), field_name="constant")
        return cls(zeros=zeros, atoms=tuple(atoms), power=power, constant=constant)

    def to_mapping(self) -> dict[str, Any]:
        return {
            "zeros": [complex_to_pair(a) for a in self.zeros],
            "atoms": [[angle, mass] for angle, mass in self.atoms],
            "power": self.power,
            "constant": complex_to_pair(self.constant),
        }


@dataclass(frozen=True, eq=False)
class InnerFunction:
    """Blaschke zeros, point atoms, a monomial and a unimodular constant."""

    blaschke_zeros: tuple[complex, ...]
    singular_atoms: tuple[tuple[complex, float], ...]
    monomial_power: int
    unimodular_constant: complex
    config: GridConfig

    @cached_property
    def samples(self) -> HardyFunction:
        points = tuple(SingularPoint(point, Singularity.ATOM) for point, _ in self.singular_atoms)
        return HardyFunction(self.evaluate(grid_nodes(self.config)), self.config, points, evaluator=self.evaluate)

    @property
    def is_finite_blaschke(self) -> bool:
        return not self.singular_atoms

    @property
    def zero_count(self) -> int:
        return len(self.blaschke_zeros) + self.monomial_power

    def all_zeros(self) -> tuple[complex, ...]:
        """Zeros with multiplicity, the monomial folded in as zeros at 0."""

        return tuple(self.blaschke_zeros) + (0j,) * self.monomial_power

    def evaluate(self, z: Any) -> Any:
        point = np.asarray(z, dtype=np.complex128)
        value = np.full(point.shape, self.unimodular_constant, dtype=np.complex128)
        if self.monomial_power:
            value = value * point**self.monomial_power
        for a in self.blaschke_zeros:
            value = value * (point - a) / (1.0 - np.conj(a) * point)
        for p, mass in self.singular_atoms:
            value = value * np.exp(-mass * (p + point) / (p - point))
        return complex(value) if value.ndim == 0 else value

    def derivative(self, z: complex) -> complex:
        """θ′(z) by the product rule over the factored form."""

        point = complex(z)
        values: list[complex] = []
        slopes: list[complex] = []
        if self.monomial_power:
            values.append(point**self.monomial_power)
            slopes.append(self.monomial_power * point ** (self.monomial_power - 1))
        for a in self.blaschke_zeros:
            denom = 1.0 - a.conjugate() * point
            values.append((point - a) / denom)
            slopes.append((1.0 - abs(a) ** 2) / denom**2)
        for p, mass in self.singular_atoms:
            factor = cmath.exp(-mass * (p + point) / (p - point))
            values.append(factor)
            slopes.append(factor * (-2.0 * mass * p) / (p - point) ** 2)

        total = 0j
        for idx, slope in enumerate(slopes):
            term = slope
            for jdx, value in enumerate(values):
                if jdx != idx:
                    term *= value
            total += term
        return complex(self.unimodular_constant * total)

    def times(self, other: "InnerFunction") -> "InnerFunction":
        return InnerFunction(
            blaschke_zeros=self.blaschke_zeros + other.blaschke_zeros,
            singular_atoms=self.singular_atoms + other.singular_atoms,
            monomial_power=self.monomial_power + other.monomial_power,
            unimodular_constant=self.unimodular_constant * other.unimodular_constant,
            config=self.config,
        )

    def to_spec(self) -> InnerSpec:
        return InnerSpec(
            zeros=self.blaschke_zeros,
            atoms=tuple((cmath.phase(p), mass) for p, mass in self.singular_atoms),
            power=self.monomial_power,
            constant=self.unimodular_constant,
        )


@dataclass(frozen=True)
class ModelKernelPair:
    """k_λ^θ and k̃_λ^θ with the data they were built from."""

    k: HardyFunction
    k_tilde: HardyFunction
    lam: complex
    theta_at_lambda: complex
    k_min_modulus: float


@dataclass(frozen=True)
class CrofootTransform:
    theta_lambda: HardyFunction
    multiplier: HardyFunction
    lam: complex
    theta_at_lambda: complex


@dataclass(frozen=True)
class WienerHopfFactors:
    """B = B₋·zⁿ·B₊ for a finite Blaschke product."""

    b_minus: BoundaryFunction
    index: int
    b_plus: HardyFunction
    zeros: tuple[complex, ...]
    reconstruction_error: float


def make_inner(spec: InnerSpec | Mapping[str, Any], cfg: GridConfig) -> InnerFunction:
    """Validate a spec and assemble the structured inner function."""

    if not isinstance(spec, InnerSpec):
        spec = InnerSpec.from_mapping(spec)

    for idx, a in enumerate(spec.zeros):
        if abs(a) >= 1.0:
            raise ZeroOnOrOutsideDisk(
                f"zero {a} is not in the open unit disk",
                details={"index": idx, "modulus": abs(a)},
            )
    atoms: list[tuple[complex, float]] = []
    for idx, (angle, mass) in enumerate(spec.atoms):
        if not mass > 0.0 or not math.isfinite(mass):
            raise NonpositiveMass(f"atom mass must be > 0, got {mass}", details={"index": idx})
        atoms.append((cmath.exp(1j * angle), float(mass)))
    if abs(abs(spec.constant) - 1.0) > 1e-9:
        raise ValidationError("constant must be unimodular", details={"field": "constant"})

    return InnerFunction(
        blaschke_zeros=tuple(complex(a) for a in spec.zeros),
        singular_atoms=tuple(atoms),
        monomial_power=int(spec.power),
        unimodular_constant=complex(spec.constant) / abs(spec.constant),
        config=cfg,
    )


def singular_atom_function(cfg: GridConfig, *, angle: float = 0.0, mass: float = 1.0) -> InnerFunction:
    """exp(−m(p+z)/(p−z)) with p = e^{i·angle}; the default is E(z)."""

    return make_inner(InnerSpec(atoms=((angle, mass),)), cfg)


def model_kernels(theta: InnerFunction, lam: complex) -> ModelKernelPair:
    """Reproducing kernel k_λ^θ and conjugate kernel k̃_λ^θ."""

    lam = _require_disk_point(lam)
    cfg = theta.config
    c = complex(theta.evaluate(lam))
    nodes = grid_nodes(cfg)
    theta_samples = theta.samples.samples
    points = theta.samples.singular_points

    def k_eval(z: complex) -> complex:
        return (1.0 - c.conjugate() * theta.evaluate(z)) / (1.0 - lam.conjugate() * z)

    def k_tilde_eval(z: complex) -> complex:
        if abs(z - lam) < _REMOVABLE_RADIUS:
            return theta.derivative(lam)
        return (theta.evaluate(z) - c) / (z - lam)

    k_samples = (1.0 - c.conjugate() * theta_samples) / (1.0 - lam.conjugate() * nodes)
    k_tilde_samples = (theta_samples - c) / (nodes - lam)
    k = HardyFunction(k_samples, cfg, points, evaluator=k_eval)
    k_tilde = HardyFunction(k_tilde_samples, cfg, points, evaluator=k_tilde_eval)
    return ModelKernelPair(
        k=k,
        k_tilde=k_tilde,
        lam=lam,
        theta_at_lambda=c,
        k_min_modulus=float(np.min(np.abs(k_samples))),
    )


def model_projection(theta: InnerFunction | BoundaryFunction, f: HardyFunction) -> HardyFunction:
    """P_θ f = f − θ·P⁺(θ̄ f)."""

    boundary = _theta_boundary(theta)
    analytic_part = project_plus(pointwise_multiply(complex_conjugate(boundary), f))
    removed = pointwise_multiply(boundary, analytic_part)
    return HardyFunction(f.samples - removed.samples, f.config, f.singular_points)


def crofoot(theta: InnerFunction, lam: complex) -> CrofootTransform:
    """θ_λ = (θ−c)/(1−c̄θ) and M = (1−c̄θ)/√(1−|c|²), c = θ(λ)."""

    lam = _require_disk_point(lam)
    cfg = theta.config
    c = complex(theta.evaluate(lam))
    if abs(c) >= 1.0 - cfg.tol_residual:
        raise ThetaUnimodularAtLambda(
            f"|θ(λ)| = {abs(c):.12f} is too close to 1",
            details={"theta_at_lambda": complex_to_pair(c)},
        )
    scale = math.sqrt(1.0 - abs(c) ** 2)
    samples = theta.samples.samples
    points = theta.samples.singular_points

    def theta_lambda_eval(z: complex) -> complex:
        t = theta.evaluate(z)
        return (t - c) / (1.0 - c.conjugate() * t)

    def multiplier_eval(z: complex) -> complex:
        return (1.0 - c.conjugate() * theta.evaluate(z)) / scale

    theta_lambda = HardyFunction((samples - c) / (1.0 - c.conjugate() * samples), cfg, points, evaluator=theta_lambda_eval)
    multiplier = HardyFunction((1.0 - c.conjugate() * samples) / scale, cfg, points, evaluator=multiplier_eval)
    return CrofootTransform(theta_lambda=theta_lambda, multiplier=multiplier, lam=lam, theta_at_lambda=c)


def crofoot_general(theta: InnerFunction, lam1: complex, lam: complex) -> CrofootTransform:
    """θ_{λ₁,λ} = B_{λ₁}·k̃_λ/k_λ with multiplier k_λ·(1 − conj(λ₁)z).

    The multiplier maps K_{θ_{λ₁,λ}} into K_θ; no norm claim is made. For
    λ₁ = λ this is the Crofoot transform up to the normalising constant.
    """

    lam1 = _require_disk_point(lam1, field_name="lambda1")
    pair = model_kernels(theta, lam)
    cfg = theta.config
    nodes = grid_nodes(cfg)
    blaschke = (nodes - lam1) / (1.0 - lam1.conjugate() * nodes)
    samples = blaschke * pair.k_tilde.samples / pair.k.samples

    def ratio_eval(z: complex) -> complex:
        return (z - lam1) / (1.0 - lam1.conjugate() * z) * pair.k_tilde.evaluator(z) / pair.k.evaluator(z)

    def multiplier_eval(z: complex) -> complex:
        return pair.k.evaluator(z) * (1.0 - lam1.conjugate() * z)

    points = theta.samples.singular_points
    return CrofootTransform(
        theta_lambda=HardyFunction(samples, cfg, points, evaluator=ratio_eval),
        multiplier=HardyFunction(pair.k.samples * (1.0 - lam1.conjugate() * nodes), cfg, points, evaluator=multiplier_eval),
        lam=pair.lam,
        theta_at_lambda=pair.theta_at_lambda,
    )


def reproducing_kernel_value(theta_eval, mu: complex, z: complex) -> complex:
    """k_μ(z) = (1 − conj(φ(μ))φ(z))/(1 − μ̄z) for an inner evaluator φ."""

    return (1.0 - complex(theta_eval(mu)).conjugate() * complex(theta_eval(z))) / (1.0 - mu.conjugate() * z)


def crofoot_gram_ratio(
    theta: InnerFunction,
    lam: complex,
    points: Sequence[complex],
    coefficients: Sequence[complex],
) -> float:
    """‖M f‖²/‖f‖² for f = Σ c_j k_{μ_j}^{θ_λ}, from reproducing-kernel Gram matrices.

    ‖f‖² uses the θ_λ kernels; ‖M f‖² uses M k_μ^{θ_λ} = s·k_μ^θ/conj(1 − c̄θ(μ)).
    """

    transform = crofoot(theta, lam)
    c = transform.theta_at_lambda
    s2 = 1.0 - abs(c) ** 2
    mus = [complex(mu) for mu in points]
    coef = np.asarray(coefficients, dtype=np.complex128)

    gram_source = np.array(
        [[reproducing_kernel_value(transform.theta_lambda.evaluator, mj, mi) for mj in mus] for mi in mus]
    )
    d = np.array([1.0 - c.conjugate() * theta.evaluate(mu) for mu in mus])
    gram_image = np.array(
        [
            [s2 * reproducing_kernel_value(theta.evaluate, mj, mi) / (d[j].conjugate() * d[i]) for j, mj in enumerate(mus)]
            for i, mi in enumerate(mus)
        ]
    )
    source = float(np.real(np.conj(coef) @ gram_source @ coef))
    image = float(np.real(np.conj(coef) @ gram_image @ coef))
    return image / source


def fbp_wiener_hopf(blaschke: InnerFunction) -> WienerHopfFactors:
    """B = B₋ zⁿ B₊ with B₊ = Π(1 − ā_k z)^{−1} and B₋ = conj(B₊^{−1})."""

    if not blaschke.is_finite_blaschke:
        raise NotFiniteBlaschke("Wiener-Hopf split needs a finite Blaschke product")
    cfg = blaschke.config
    nodes = grid_nodes(cfg)
    zeros = blaschke.all_zeros()

    inverse_plus = np.ones(cfg.grid_size, dtype=np.complex128)
    minus = np.full(cfg.grid_size, blaschke.unimodular_constant, dtype=np.complex128)
    for a in zeros:
        inverse_plus *= 1.0 - np.conj(a) * nodes
        minus *= 1.0 - a * np.conj(nodes)

    def plus_eval(z: complex) -> complex:
        value = 1.0 + 0j
        for a in zeros:
            value /= 1.0 - a.conjugate() * z
        return value

    b_plus = HardyFunction(1.0 / inverse_plus, cfg, evaluator=plus_eval)
    b_minus = BoundaryFunction(minus, cfg)
    index = len(zeros)
    rebuilt = minus * nodes**index / inverse_plus
    error = float(np.max(np.abs(blaschke.samples.samples - rebuilt)))
    logger.debug("wiener-hopf split: index=%d reconstruction_error=%.3e", len(zeros), error)
    return WienerHopfFactors(b_minus=b_minus, index=index, b_plus=b_plus, zeros=zeros, reconstruction_error=error)


def fbp_model_basis(factors: WienerHopfFactors) -> list[HardyFunction]:
    """{B₊ z^j, j < n}, a (non-orthogonal) basis of K_B."""

    cfg = factors.b_plus.config
    nodes = grid_nodes(cfg)
    return [HardyFunction(factors.b_plus.samples * nodes**j, cfg) for j in range(factors.index)]


def random_blaschke(rng: np.random.Generator, count: int, cfg: GridConfig, *, radius: float = 0.8) -> InnerFunction:
    """Blaschke product with ``count`` zeros drawn uniformly from |a| ≤ radius."""

    moduli = radius * np.sqrt(rng.uniform(0.0, 1.0, size=count))
    angles = rng.uniform(0.0, 2.0 * np.pi, size=count)
    zeros = tuple(complex(r * np.exp(1j * t)) for r, t in zip(moduli, angles))
    return make_inner(InnerSpec(zeros=zeros), cfg)


def random_model_element(
    theta: InnerFunction | CrofootTransform,
    rng: np.random.Generator,
    *,
    terms: int = 4,
    radius: float = 0.7,
) -> tuple[HardyFunction, tuple[complex, ...], np.ndarray]:
    """f = Σ c_j k_{μ_j} in K_θ (or K_{θ_λ}) with random points and weights."""

    evaluate = theta.evaluate if isinstance(theta, InnerFunction) else theta.theta_lambda.evaluator
    boundary = theta.samples if isinstance(theta, InnerFunction) else theta.theta_lambda
    cfg = boundary.config
    nodes = grid_nodes(cfg)

    moduli = radius * np.sqrt(rng.uniform(0.0, 1.0, size=terms))
    mus = tuple(complex(r * np.exp(1j * t)) for r, t in zip(moduli, rng.uniform(0.0, 2.0 * np.pi, size=terms)))
    coef = rng.normal(size=terms) + 1j * rng.normal(size=terms)

    samples = np.zeros(cfg.grid_size, dtype=np.complex128)
    for c, mu in zip(coef, mus):
        samples += c * (1.0 - np.conj(evaluate(mu)) * boundary.samples) / (1.0 - np.conj(mu) * nodes)

    def element_eval(z: complex) -> complex:
        return complex(sum(c * reproducing_kernel_value(evaluate, mu, z) for c, mu in zip(coef, mus)))

    element = HardyFunction(samples, cfg, boundary.singular_points, evaluator=element_eval)
    return element, mus, coef


def inner_divides(divisor: InnerFunction, target: InnerFunction, *, tolerance: float = 1e-9) -> bool:
    """Exact test that target/divisor is inner: zero containment and atom dominance."""

    remaining = list(target.all_zeros())
    for a in divisor.all_zeros():
        match = next((idx for idx, b in enumerate(remaining) if abs(a - b) <= tolerance), None)
        if match is None:
            return False
        remaining.pop(match)

    for p, mass in divisor.singular_atoms:
        available = sum(m for q, m in target.singular_atoms if abs(p - q) <= tolerance)
        if available + tolerance < mass:
            return False
    return True


def reproducing_check(theta: InnerFunction, f: HardyFunction, lam: complex) -> tuple[complex, complex]:
    """(⟨f, k_λ^θ⟩, f(λ)) for f ∈ K_θ."""

    pair = model_kernels(theta, lam)
    if f.evaluator is None:
        raise ValidationError("reproducing check needs an element with an exact evaluator")
    return inner_product(f, pair.k), complex(f.evaluator(pair.lam))


def _theta_boundary(theta: InnerFunction | BoundaryFunction) -> BoundaryFunction:
    return theta.samples if isinstance(theta, InnerFunction) else theta


def _require_disk_point(value: complex, *, field_name: str = "lambda") -> complex:
    point = complex(value)
    if not abs(point) < 1.0:
        raise LambdaOutsideDisk(
            f"{field_name} = {point} is not in the open unit disk",
            details={"field": field_name, "modulus": abs(point)},
        )
    return point

