"""Registered experiments: the worked examples and property suites of the lab.

Every body has the signature ``(cfg, rng, params) -> ExperimentOutcome`` and
draws all randomness from ``rng``. Importing this module fills ``REGISTRY``.
"""

from __future__ import annotations

import math
from typing import Any, Mapping

import numpy as np

from toeplab.boundary.functions import (
    BoundaryFunction,
    HardyFunction,
    OuterVerdict,
    as_hardy,
    complex_conjugate,
    grid_nodes,
    inner_product,
    membership_tolerance,
    monomial,
    outer_test,
    pointwise_multiply,
    polynomial,
)
from toeplab.conjugation.lab import (
    conjugate_in_kernel,
    conjugation_context,
    eigenfunction_test,
    model_conjugation_context,
    outer_maximal,
)
from toeplab.core.config import GridConfig
from toeplab.core.models import Check, ExperimentOutcome
from toeplab.core.validators import (
    coerce_complex,
    coerce_int,
    coerce_positive_float,
    coerce_sequence,
    validate_disk_point,
)
from toeplab.experiments.registry import REGISTRY
from toeplab.factorization.factor import (
    RigidityVerdict,
    maximal_factorisation,
    maximal_test,
    modified_factorisation,
    square_rigidity_probe,
)
from toeplab.hayashi.representation import (
    FiniteKernelRep,
    TrivialKernel,
    halfinteger_symbol_kernel,
    herglotz_parameters,
    isometric_multiplier_finite,
    piecewise_jump_exponents,
)
from toeplab.inner.functions import (
    CrofootTransform,
    InnerFunction,
    InnerSpec,
    crofoot,
    crofoot_general,
    crofoot_gram_ratio,
    fbp_model_basis,
    fbp_wiener_hopf,
    make_inner,
    model_kernels,
    random_blaschke,
    random_model_element,
    singular_atom_function,
)
from toeplab.toeplitz.descriptors import parse_function, parse_symbol
from toeplab.toeplitz.engine import (
    DEFAULT_SECTION_SIZE,
    KernelBasis,
    ToeplitzSymbol,
    kernel_angles,
    kernels_equal,
    multiplier_symbol,
    near_invariance_defect,
    numerical_kernel,
    residual_in_kernel,
    section_size,
    span_coefficients,
)

SINGULAR_GRID_FACTOR = 8
GRAM_SCHMIDT_ROOT = 0.2 + 0.4j
IDENTITY_TOLERANCE = 1e-8
Params = Mapping[str, Any]


def singular_grid(cfg: GridConfig) -> GridConfig:
    """Finer grid for singular inner atoms, whose coefficients decay slowly."""

    return cfg.with_overrides({"grid_size": cfg.grid_size * SINGULAR_GRID_FACTOR})


def conj_symbol(theta: InnerFunction | BoundaryFunction, label: str) -> ToeplitzSymbol:
    boundary = theta.samples if isinstance(theta, InnerFunction) else theta
    return ToeplitzSymbol.from_boundary(complex_conjugate(boundary), label=label)


def power_symbol(power: int, cfg: GridConfig) -> ToeplitzSymbol:
    return ToeplitzSymbol.from_boundary(monomial(power, cfg), label=f"z^{power}")


def _int_param(params: Params, name: str, *, low: int, high: int) -> int:
    return coerce_int(params.get(name), field_name=name, low=low, high=high)


def _int_list_param(params: Params, name: str, *, low: int, high: int) -> list[int]:
    items = coerce_sequence(params.get(name), field_name=name)
    return [coerce_int(item, field_name=name, low=low, high=high) for item in items]


def _point_param(params: Params, name: str) -> complex:
    return coerce_complex(params.get(name), field_name=name)


def _points_param(params: Params, name: str, *, in_disk: bool = False) -> list[complex]:
    items = coerce_sequence(params.get(name), field_name=name)
    if in_disk:
        return [validate_disk_point(item, field_name=name) for item in items]
    return [coerce_complex(item, field_name=name) for item in items]


def _relative(values: np.ndarray, reference: np.ndarray) -> float:
    return float(np.linalg.norm(values - reference) / max(np.linalg.norm(reference), np.finfo(float).tiny))


# --- half-integer powers and piecewise symbols -------------------------------------


@REGISTRY.register(
    "kernel_z_7_2",
    description="ker T for conj(z)^(7/2) = (1+z)^(1/2)·K_{z^3}; isometric multiplier roots (1±2i)/5",
    anchor="half-integer power symbol, Gram-Schmidt isometric multiplier",
    defaults={"trials": 50},
)
def kernel_z_7_2(cfg: GridConfig, rng: np.random.Generator, params: Params) -> ExperimentOutcome:
    rep = halfinteger_symbol_kernel(7, cfg)
    assert isinstance(rep, FiniteKernelRep)
    iso = isometric_multiplier_finite(rep)
    zeros = iso.alpha_zeros or ()
    a_error = min((abs(a - GRAM_SCHMIDT_ROOT) for a in zeros), default=math.inf)
    conj_error = min((abs(a - GRAM_SCHMIDT_ROOT.conjugate()) for a in zeros), default=math.inf)
    isometry = iso.isometry_error(rng, trials=_int_param(params, "trials", low=1, high=10_000))
    numeric = numerical_kernel(rep.symbol, allow_uncertain=True)

    checks = (
        Check.at_most("a_error", a_error, 1e-6),
        Check.at_most("conj_a_error", conj_error, 1e-6),
        Check.at_most("max_basis_residual", max(rep.residuals), cfg.tol_branch),
        Check.at_least("non_membership", rep.non_membership or 0.0, cfg.tol_section),
        Check.at_most("isometry_error", isometry, cfg.tol_branch),
        Check.at_most("alpha_defect", iso.alpha_defect, cfg.tol_residual),
    )
    return ExperimentOutcome(
        checks=checks,
        metrics={
            "a_error": a_error,
            "dimension": rep.degree_n,
            "numerical_dimension": numeric.dimension,
            "numerical_gap": numeric.gap,
            "gram_condition": iso.gram_condition,
            "isometry_error": isometry,
        },
        artifacts={"alpha_zeros": list(zeros), "polynomial": iso.polynomial},
    )


@REGISTRY.register(
    "halfinteger_family",
    description="Kernels of conj(z)^(n/2) for n = 1, 3, 5, 7, 9 have dimension max(0, (n-1)/2)",
    anchor="half-integer power symbols, kernel dimension family",
    defaults={"orders": [1, 3, 5, 7, 9]},
)
def halfinteger_family(cfg: GridConfig, rng: np.random.Generator, params: Params) -> ExperimentOutcome:
    checks: list[Check] = []
    metrics: dict[str, float] = {}
    uncertain = False
    for n in _int_list_param(params, "orders", low=1, high=63):
        rep = halfinteger_symbol_kernel(n, cfg)
        if isinstance(rep, TrivialKernel):
            checks.append(Check.at_least(f"n{n}_smallest_singular_value", rep.smallest_singular_value, rep.threshold))
            metrics[f"n{n}_dimension"] = 0
            metrics[f"n{n}_gap"] = rep.gap
            uncertain = uncertain or rep.gap < 10.0
            continue

        numeric = numerical_kernel(rep.symbol, allow_uncertain=True)
        uncertain = uncertain or not numeric.certain
        checks.extend(
            (
                Check.equal(f"n{n}_numerical_dimension", numeric.dimension, rep.degree_n),
                Check.at_most(f"n{n}_basis_residual", max(rep.residuals), cfg.tol_branch),
                Check.at_least(f"n{n}_non_membership", rep.non_membership or 0.0, cfg.tol_section),
            )
        )
        metrics[f"n{n}_dimension"] = numeric.dimension
        metrics[f"n{n}_gap"] = numeric.gap
    return ExperimentOutcome(checks=tuple(checks), metrics=metrics, uncertain=uncertain)


@REGISTRY.register(
    "pm_one_symbol",
    description="Piecewise symbol ±1 with jumps at 1 and -1: exponents -1/2, trivial kernel",
    anchor="piecewise constant symbol, jump exponents and trivial kernel",
    defaults={"sizes": [64, DEFAULT_SECTION_SIZE]},
)
def pm_one_symbol(cfg: GridConfig, rng: np.random.Generator, params: Params) -> ExperimentOutcome:
    symbol = parse_symbol({"piecewise": {"breaks": [0.0, math.pi], "values": [1.0, -1.0]}}, cfg, label="pm_one")
    analysis = piecewise_jump_exponents(symbol)

    checks = [Check.holds("not_regular2", not analysis.regular2)]
    metrics: dict[str, float] = {"jump_count": len(analysis.jumps)}
    for idx, jump in enumerate(analysis.jumps):
        checks.append(Check.at_most(f"jump{idx}_exponent_error", abs(jump.exponent + 0.5), cfg.tol_section))
        metrics[f"jump{idx}_exponent_re"] = jump.exponent.real

    uncertain = False
    sizes = [min(size, cfg.truncation) for size in _int_list_param(params, "sizes", low=1, high=cfg.grid_size)]
    for size in sizes:
        basis = numerical_kernel(symbol, size, allow_uncertain=True)
        uncertain = uncertain or not basis.certain
        checks.append(Check.equal(f"size{size}_dimension", basis.dimension, 0))
        metrics[f"size{size}_dimension"] = basis.dimension
        metrics[f"size{size}_smallest_singular_value"] = basis.singular_values[0] if basis.singular_values else math.nan
    metrics["dimension"] = metrics[f"size{sizes[-1]}_dimension"]
    return ExperimentOutcome(checks=tuple(checks), metrics=metrics, uncertain=uncertain)


# --- model spaces -------------------------------------------------------------------


@REGISTRY.register(
    "dim_K_zn",
    description="ker T for conj(z)^n is spanned by 1, z, ..., z^(n-1)",
    anchor="model space of a monomial",
    defaults={"n": 5},
)
def dim_k_zn(cfg: GridConfig, rng: np.random.Generator, params: Params) -> ExperimentOutcome:
    n = _int_param(params, "n", low=1, high=section_size(cfg) - 1)
    symbol = power_symbol(-n, cfg)
    basis = numerical_kernel(symbol, allow_uncertain=True)
    exact = np.eye(cfg.truncation + 1, n, dtype=np.complex128)
    angle = kernel_angles(basis, exact)
    defect = near_invariance_defect(symbol, basis)
    return ExperimentOutcome(
        checks=(
            Check.equal("dimension", basis.dimension, n),
            Check.at_most("max_residual", basis.max_residual, basis.tolerance),
            Check.at_most("span_angle", angle, 1e-8),
            Check.at_most("near_invariance", defect, 1e-6),
        ),
        metrics={"dimension": basis.dimension, "gap": basis.gap, "span_angle": angle},
        uncertain=not basis.certain,
    )


@REGISTRY.register(
    "blaschke_dimensions",
    description="dim ker T for conj(B) equals the zero count for random finite Blaschke products",
    anchor="model spaces of finite Blaschke products",
    defaults={"count": 20, "max_zeros": 6},
)
def blaschke_dimensions(cfg: GridConfig, rng: np.random.Generator, params: Params) -> ExperimentOutcome:
    count = _int_param(params, "count", low=1, high=1000)
    max_zeros = _int_param(params, "max_zeros", low=1, high=32)
    matches = 0
    uncertain = 0
    worst_residual = 0.0
    for _ in range(count):
        blaschke = random_blaschke(rng, int(rng.integers(1, max_zeros + 1)), cfg)
        basis = numerical_kernel(conj_symbol(blaschke, "conj(B)"), allow_uncertain=True)
        matches += int(basis.dimension == blaschke.zero_count)
        uncertain += int(not basis.certain)
        worst_residual = max(worst_residual, basis.max_residual)
    return ExperimentOutcome(
        checks=(
            Check.equal("matches", matches, count),
            Check.at_most("max_residual", worst_residual, cfg.tol_residual),
        ),
        metrics={"matches": matches, "uncertain": uncertain, "max_residual": worst_residual},
        uncertain=uncertain > 0,
    )


@REGISTRY.register(
    "wiener_hopf_fbp",
    description="B = B_- z^n B_+ for random finite Blaschke products; {B_+ z^j} spans K_B",
    anchor="Wiener-Hopf factorisation of a finite Blaschke product",
    defaults={"count": 50, "max_zeros": 8},
)
def wiener_hopf_fbp(cfg: GridConfig, rng: np.random.Generator, params: Params) -> ExperimentOutcome:
    count = _int_param(params, "count", low=1, high=1000)
    max_zeros = _int_param(params, "max_zeros", low=1, high=32)
    worst_error = 0.0
    worst_residual = 0.0
    index_matches = 0
    for _ in range(count):
        blaschke = random_blaschke(rng, int(rng.integers(1, max_zeros + 1)), cfg)
        factors = fbp_wiener_hopf(blaschke)
        symbol = conj_symbol(blaschke, "conj(B)")
        worst_error = max(worst_error, factors.reconstruction_error)
        worst_residual = max(worst_residual, *(residual_in_kernel(symbol, v) for v in fbp_model_basis(factors)))
        index_matches += int(factors.index == blaschke.zero_count)
    return ExperimentOutcome(
        checks=(
            Check.at_most("reconstruction_error", worst_error, 1e-9),
            Check.at_most("basis_residual", worst_residual, cfg.tol_residual),
            Check.equal("index_matches", index_matches, count),
        ),
        metrics={"reconstruction_error": worst_error, "basis_residual": worst_residual},
    )


# --- conjugation --------------------------------------------------------------------


def _conjugation_identities(theta: InnerFunction, rng: np.random.Generator, trials: int) -> dict[str, float]:
    ctx = model_conjugation_context(theta)
    involution = modulus = pairing = 0.0
    previous: tuple[HardyFunction, HardyFunction] | None = None
    for _ in range(trials):
        f, _, _ = random_model_element(theta, rng)
        cf = conjugate_in_kernel(ctx, f)
        ccf = conjugate_in_kernel(ctx, cf)
        scale = f.norm()
        involution = max(involution, float(np.linalg.norm(ccf.samples - f.samples) / np.sqrt(f.config.grid_size)) / scale)
        modulus = max(modulus, float(np.max(np.abs(np.abs(cf.samples) - np.abs(f.samples)))) / f.sup_norm())
        if previous is not None:
            g, cg = previous
            mismatch = abs(inner_product(cf, cg) - inner_product(g, f))
            pairing = max(pairing, mismatch / (scale * g.norm()))
        previous = (f, cf)
    return {"involution": involution, "modulus": modulus, "pairing": pairing}


@REGISTRY.register(
    "conjugation_suite",
    description="C^2 = I, |Cf| = |f| and <Cf, Cg> = <g, f> on K_{z^5}, K_B and ker T for conj(zE)",
    anchor="natural conjugation on Toeplitz kernels",
    defaults={"trials": 100, "zeros": 4},
)
def conjugation_suite(cfg: GridConfig, rng: np.random.Generator, params: Params) -> ExperimentOutcome:
    trials = _int_param(params, "trials", low=2, high=10_000)
    fine = singular_grid(cfg)
    spaces = {
        "z5": make_inner(InnerSpec(power=5), cfg),
        "blaschke": random_blaschke(rng, _int_param(params, "zeros", low=1, high=16), cfg),
        "zE": make_inner(InnerSpec(atoms=((0.0, 1.0),), power=1), fine),
    }
    checks: list[Check] = []
    metrics: dict[str, float] = {"singular_grid_size": fine.grid_size}
    for name, theta in spaces.items():
        for key, value in _conjugation_identities(theta, rng, trials).items():
            checks.append(Check.at_most(f"{name}_{key}", value, IDENTITY_TOLERANCE))
            metrics[f"{name}_{key}"] = value
    return ExperimentOutcome(checks=tuple(checks), metrics=metrics)


@REGISTRY.register(
    "eigenfunction_K_z5",
    description="Eigenfunctions of the conjugation on K_{z^5}: (1-z)^4 -> 1, z - z^3 -> -1, z -> none",
    anchor="eigenfunctions of the natural conjugation",
)
def eigenfunction_k_z5(cfg: GridConfig, rng: np.random.Generator, params: Params) -> ExperimentOutcome:
    ctx = conjugation_context(power_symbol(-5, cfg))
    cases = {
        "one_minus_z_4": (polynomial([1, -4, 6, -4, 1], cfg), 1.0 + 0j),
        "z_minus_z3": (polynomial([0, 1, 0, -1], cfg), -1.0 + 0j),
        "z": (polynomial([0, 1], cfg), None),
    }
    checks: list[Check] = []
    metrics: dict[str, float] = {}
    for name, (f, expected) in cases.items():
        result = eigenfunction_test(ctx, f)
        metrics[f"{name}_residual"] = result.residual
        metrics[f"{name}_candidate_re"] = result.candidate.real
        checks.append(Check.holds(f"{name}_cross_check", result.maximal_cross_check is True))
        if expected is None:
            checks.append(Check.holds(f"{name}_no_eigenvalue", result.eigenvalue is None))
            continue
        error = math.inf if result.eigenvalue is None else abs(result.eigenvalue - expected)
        checks.append(Check.at_most(f"{name}_eigenvalue_error", error, IDENTITY_TOLERANCE))
        checks.append(Check.at_most(f"{name}_residual", result.residual, IDENTITY_TOLERANCE))

    # C z^2(1-z)^2 = z^4 conj(z^2 (1-z)^2) = (z-1)^2, not z^2 - 1
    image = conjugate_in_kernel(ctx, polynomial([0, 0, 1, -2, 1], cfg))
    derived_error = (image - polynomial([1, -2, 1], cfg)).norm()
    metrics["display_distance"] = (image - polynomial([-1, 0, 1], cfg)).norm()
    checks.append(Check.at_most("conj_z2_one_minus_z_2_error", derived_error, IDENTITY_TOLERANCE))
    checks.append(Check.holds("conj_z2_one_minus_z_2_outer", outer_test(image).verdict is OuterVerdict.OUTER))
    return ExperimentOutcome(
        checks=tuple(checks),
        metrics=metrics,
        notes=("C(z^2 (1-z)^2) evaluates to (z-1)^2; the form z^2 - 1 is not its image",),
    )


# --- maximal functions --------------------------------------------------------------


def _maximal_instances(cfg: GridConfig) -> list[tuple[str, ToeplitzSymbol, HardyFunction, bool]]:
    theta1 = make_inner(InnerSpec(zeros=(0.5, -0.3j)), cfg)
    theta2 = make_inner(InnerSpec(zeros=(0.4,), power=2), cfg)
    theta3 = make_inner(InnerSpec(zeros=(0.6j,), power=3), cfg)
    z2, z3, z5 = power_symbol(-2, cfg), power_symbol(-3, cfg), power_symbol(-5, cfg)
    return [
        ("k_tilde_0_B", conj_symbol(theta1, "conj(B)"), model_kernels(theta1, 0.0).k_tilde, True),
        ("k_tilde_z2B", conj_symbol(theta2, "conj(z^2 B)"), model_kernels(theta2, 0.2 + 0.1j).k_tilde, True),
        ("k_tilde_z3B", conj_symbol(theta3, "conj(z^3 B)"), model_kernels(theta3, -0.3).k_tilde, True),
        ("one_minus_z_4_in_z5", z5, polynomial([1, -4, 6, -4, 1], cfg), True),
        ("z2_one_minus_z_2_in_z5", z5, polynomial([0, 0, 1, -2, 1], cfg), True),
        ("z4_in_z5", z5, polynomial([0, 0, 0, 0, 1], cfg), True),
        ("one_plus_z_in_z2", z2, polynomial([1, 1], cfg), True),
        ("one_in_z2", z2, polynomial([1], cfg), False),
        ("z_in_z5", z5, polynomial([0, 1], cfg), False),
        ("one_in_z5", z5, polynomial([1], cfg), False),
        ("k_0_B", conj_symbol(theta1, "conj(B)"), model_kernels(theta1, 0.0).k, False),
        ("one_plus_3z_in_z3", z3, polynomial([1, 3], cfg), False),
    ]


@REGISTRY.register(
    "maximal_equivalence",
    description="Maximality via 'Cf is outer' agrees with the direct symbol-ratio criterion on 12 instances",
    anchor="maximal functions, conjugation criterion",
)
def maximal_equivalence(cfg: GridConfig, rng: np.random.Generator, params: Params) -> ExperimentOutcome:
    instances = _maximal_instances(cfg)
    checks: list[Check] = []
    agreed = direct = 0
    for name, symbol, f, expected in instances:
        certificate = maximal_test(symbol, f)
        ok = certificate.is_maximal == expected
        agreed += int(ok)
        direct += int(certificate.direct_agrees is True)
        checks.append(Check.holds(f"{name}_verdict", ok))
        checks.append(Check.holds(f"{name}_direct_agrees", certificate.direct_agrees is True))
    total = len(instances)
    return ExperimentOutcome(
        checks=tuple(checks),
        metrics={"instances": total, "agreement": agreed / total, "direct_agreement": direct / total},
    )


@REGISTRY.register(
    "outer_maximal_construction",
    description="O(mu + I) is outer, maximal and satisfies C(O^M) = conj(mu) O^M in 10 kernels",
    anchor="outer maximal functions built from a maximal factorisation",
    defaults={"blaschke_count": 5},
)
def outer_maximal_construction(cfg: GridConfig, rng: np.random.Generator, params: Params) -> ExperimentOutcome:
    cases: list[tuple[str, ToeplitzSymbol, HardyFunction]] = [
        (f"z{n}", power_symbol(-n, cfg), as_hardy(monomial(n - 1, cfg))) for n in range(2, 7)
    ]
    for idx in range(_int_param(params, "blaschke_count", low=0, high=100)):
        blaschke = random_blaschke(rng, int(rng.integers(1, 5)), cfg)
        cases.append((f"blaschke{idx}", conj_symbol(blaschke, "conj(B)"), model_kernels(blaschke, 0.0).k_tilde))

    outer_ok = maximal_ok = 0
    worst = 0.0
    for name, symbol, f_max in cases:
        ctx = conjugation_context(symbol)
        mu = complex(np.exp(2j * np.pi * rng.uniform()))
        built = outer_maximal(ctx, f_max, mu)
        outer_ok += int(outer_test(built).verdict is OuterVerdict.OUTER)
        maximal_ok += int(maximal_test(symbol, built, cross_check=False).is_maximal)
        image = conjugate_in_kernel(ctx, built)
        worst = max(worst, _relative(image.samples, mu.conjugate() * built.samples))

    total = len(cases)
    return ExperimentOutcome(
        checks=(
            Check.equal("outer", outer_ok, total),
            Check.equal("maximal", maximal_ok, total),
            Check.at_most("conjugation_eigen_error", worst, cfg.tol_residual),
        ),
        metrics={"kernels": total, "conjugation_eigen_error": worst},
    )


@REGISTRY.register(
    "theta_max_factorisation",
    description="theta = z (k~/k)(k/conj k) and the (modified) maximal factorisation of conj(theta)",
    anchor="maximal-function factorisation of a model-space symbol",
    defaults={"zeros": 3, "lambda": [0.3, 0.2], "lambda1": [-0.2, 0.5]},
)
def theta_max_factorisation(cfg: GridConfig, rng: np.random.Generator, params: Params) -> ExperimentOutcome:
    theta = random_blaschke(rng, _int_param(params, "zeros", low=1, high=16), cfg)
    lam = validate_disk_point(params.get("lambda"), field_name="lambda")
    lam1 = validate_disk_point(params.get("lambda1"), field_name="lambda1")
    symbol = conj_symbol(theta, "conj(theta)")
    pair = model_kernels(theta, 0.0)
    nodes = grid_nodes(cfg)
    k, kt = pair.k.samples, pair.k_tilde.samples
    identity = float(np.max(np.abs(theta.samples.samples - nodes * (kt / k) * (k / np.conj(k)))))

    plain = maximal_factorisation(symbol, pair.k_tilde)
    modified = modified_factorisation(symbol, pair.k_tilde, lam)
    same = crofoot_general(theta, lam, lam).theta_lambda.samples
    reference = crofoot(theta, lam).theta_lambda.samples
    crofoot_gap = float(np.max(np.abs(same - reference)))

    general = crofoot_general(theta, lam1, lam)
    f, _, _ = random_model_element(general, rng)
    image = BoundaryFunction(general.multiplier.samples * f.samples, cfg)
    image_residual = residual_in_kernel(symbol, image)
    unimodular = float(np.max(np.abs(np.abs(general.theta_lambda.samples) - 1.0)))

    return ExperimentOutcome(
        checks=(
            Check.at_most("k_ratio_identity", identity, 1e-10),
            Check.at_most("factorisation_residual", plain.reconstruction_residual, cfg.tol_residual),
            Check.at_most("modified_residual", modified.reconstruction_residual, cfg.tol_residual),
            Check.at_most("crofoot_general_diagonal", crofoot_gap, 1e-10),
            Check.at_most("general_unimodular", unimodular, 1e-10),
            Check.at_most("general_image_residual", image_residual, cfg.tol_residual),
        ),
        metrics={
            "k_ratio_identity": identity,
            "factorisation_residual": plain.reconstruction_residual,
            "modified_residual": modified.reconstruction_residual,
        },
    )


@REGISTRY.register(
    "e_singular_factorisation",
    description="Maximal function of ker T for z·conj(E) and its outer conjugate k(0)k - k~(0)k~",
    anchor="singular inner function E, maximal function and isometric description",
    defaults={"trials": 20},
)
def e_singular_factorisation(cfg: GridConfig, rng: np.random.Generator, params: Params) -> ExperimentOutcome:
    fine = singular_grid(cfg)
    theta = singular_atom_function(fine)
    nodes = grid_nodes(fine)
    points = theta.samples.singular_points
    symbol = ToeplitzSymbol.from_boundary(BoundaryFunction(nodes * np.conj(theta.samples.samples), fine, points), label="z*conj(E)")

    pair = model_kernels(theta, 0.0)
    k0 = complex(pair.k.evaluator(0.0))
    kt0 = complex(pair.k_tilde.evaluator(0.0))
    f_max = HardyFunction((k0 * pair.k_tilde.samples - kt0 * pair.k.samples) * np.conj(nodes), fine, points)
    displayed = HardyFunction(k0 * pair.k.samples - kt0 * pair.k_tilde.samples, fine, points)

    certificate = maximal_test(symbol, f_max, cross_check=False)
    conjugate = np.conj(symbol.boundary.samples * nodes * f_max.samples)

    transform = crofoot(theta, 0.0)
    alpha = transform.theta_lambda.samples * np.conj(nodes)
    worst_ratio = worst_residual = 0.0
    for _ in range(_int_param(params, "trials", low=1, high=1000)):
        f = _alpha_model_element(transform, alpha, rng)
        image = HardyFunction(transform.multiplier.samples * f.samples, fine, points)
        worst_ratio = max(worst_ratio, abs(image.norm() / f.norm() - 1.0))
        worst_residual = max(worst_residual, residual_in_kernel(symbol, image))

    return ExperimentOutcome(
        checks=(
            Check.at_most("k_at_zero_error", abs(k0 - (1.0 - math.exp(-2.0))), 1e-12),
            Check.at_most("k_tilde_at_zero_error", abs(kt0 + 2.0 / math.e), 1e-12),
            Check.at_most("kernel_residual", certificate.residual, fine.tol_singular),
            Check.holds("maximal", certificate.is_maximal),
            Check.at_most(
                "conjugate_matches_display",
                _relative(conjugate, displayed.samples),
                membership_tolerance(symbol.boundary, displayed),
            ),
            Check.holds("display_outer", outer_test(displayed).verdict is OuterVerdict.OUTER),
            Check.at_most("isometry_error", worst_ratio, fine.tol_singular),
            Check.at_most("image_residual", worst_residual, fine.tol_singular),
        ),
        metrics={
            "k_at_zero": k0.real,
            "k_tilde_at_zero": kt0.real,
            "outer_gap": certificate.outer.gap,
            "isometry_error": worst_ratio,
            "grid_size": fine.grid_size,
        },
        notes=("k~_0(0) = E'(0) = -2/e",),
    )


def _alpha_model_element(transform: CrofootTransform, alpha: np.ndarray, rng: np.random.Generator, terms: int = 4) -> HardyFunction:
    """Σ c_j k_{μ_j}^α for α = θ₀/z, sampled from the Crofoot data of θ at 0."""

    cfg = transform.theta_lambda.config
    nodes = grid_nodes(cfg)
    evaluate = transform.theta_lambda.evaluator
    samples = np.zeros(cfg.grid_size, dtype=np.complex128)
    for _ in range(terms):
        mu = complex(0.7 * math.sqrt(rng.uniform(0.05, 1.0)) * np.exp(2j * np.pi * rng.uniform()))
        weight = complex(rng.normal(), rng.normal())
        alpha_mu = complex(evaluate(mu)) / mu
        samples += weight * (1.0 - np.conj(alpha_mu) * alpha) / (1.0 - np.conj(mu) * nodes)
    return HardyFunction(samples, cfg, transform.theta_lambda.singular_points)


# --- Crofoot transforms -------------------------------------------------------------


def _crofoot_run(theta: InnerFunction, lams: list[complex], rng: np.random.Generator, trials: int) -> dict[str, float]:
    symbol = conj_symbol(theta, "conj(theta)")
    gram = sampled = residual = 0.0
    for lam in lams:
        transform = crofoot(theta, lam)
        for _ in range(trials):
            f, mus, coef = random_model_element(transform, rng)
            gram = max(gram, abs(math.sqrt(crofoot_gram_ratio(theta, lam, mus, coef)) - 1.0))
            image = HardyFunction(transform.multiplier.samples * f.samples, f.config, f.singular_points)
            sampled = max(sampled, abs(image.norm() / f.norm() - 1.0))
            residual = max(residual, residual_in_kernel(symbol, image))
    return {"gram_isometry_error": gram, "sampled_isometry_error": sampled, "image_residual": residual}


_CROFOOT_DEFAULTS = {"trials": 50, "lambdas": [[0.0, 0.0], [0.3, 0.2]]}


@REGISTRY.register(
    "crofoot_isometry_E",
    description="Crofoot multiplier is isometric from K_{E_lambda} onto K_E for the singular inner E",
    anchor="Crofoot transform of a singular inner function",
    defaults=_CROFOOT_DEFAULTS,
)
def crofoot_isometry_e(cfg: GridConfig, rng: np.random.Generator, params: Params) -> ExperimentOutcome:
    fine = singular_grid(cfg)
    lams = _points_param(params, "lambdas", in_disk=True)
    values = _crofoot_run(singular_atom_function(fine), lams, rng, _int_param(params, "trials", low=1, high=10_000))
    return ExperimentOutcome(
        checks=(
            Check.at_most("gram_isometry_error", values["gram_isometry_error"], 1e-5),
            Check.at_most("image_residual", values["image_residual"], fine.tol_singular),
        ),
        metrics={**values, "grid_size": fine.grid_size},
    )


@REGISTRY.register(
    "crofoot_isometry_blaschke",
    description="Crofoot multiplier is isometric from K_{B_lambda} onto K_B for a random 5-zero Blaschke product",
    anchor="Crofoot transform of a finite Blaschke product",
    defaults={**_CROFOOT_DEFAULTS, "zeros": 5},
)
def crofoot_isometry_blaschke(cfg: GridConfig, rng: np.random.Generator, params: Params) -> ExperimentOutcome:
    theta = random_blaschke(rng, _int_param(params, "zeros", low=1, high=32), cfg)
    lams = _points_param(params, "lambdas", in_disk=True)
    values = _crofoot_run(theta, lams, rng, _int_param(params, "trials", low=1, high=10_000))
    return ExperimentOutcome(
        checks=(
            Check.at_most("sampled_isometry_error", values["sampled_isometry_error"], 1e-6),
            Check.at_most("gram_isometry_error", values["gram_isometry_error"], 1e-6),
            Check.at_most("image_residual", values["image_residual"], cfg.tol_residual),
        ),
        metrics=values,
    )


# --- rigidity, near invariance, kernel equalities -----------------------------------


@REGISTRY.register(
    "rigidity_probes",
    description="Square-rigidity witnesses: 2+z and k_lambda rigid, 1+z not rigid (dimension 2)",
    anchor="square-rigid outer functions and minimal kernels",
    defaults={"zeros": 3, "lambda": [0.3, 0.0]},
)
def rigidity_probes(cfg: GridConfig, rng: np.random.Generator, params: Params) -> ExperimentOutcome:
    theta = random_blaschke(rng, _int_param(params, "zeros", low=1, high=16), cfg)
    cases = {
        "two_plus_z": (polynomial([2, 1], cfg), RigidityVerdict.RIGID_AT_SCALE, 1),
        "one_plus_z": (polynomial([1, 1], cfg), RigidityVerdict.NOT_RIGID, 2),
        "k_lambda": (model_kernels(theta, validate_disk_point(params.get("lambda"), field_name="lambda")).k, RigidityVerdict.RIGID_AT_SCALE, 1),
    }
    checks: list[Check] = []
    metrics: dict[str, float] = {}
    uncertain = False
    for name, (outer, expected, dimension) in cases.items():
        probe = square_rigidity_probe(outer)
        uncertain = uncertain or probe.verdict is RigidityVerdict.UNCERTAIN
        checks.append(Check.holds(f"{name}_verdict", probe.verdict is expected))
        checks.append(Check.equal(f"{name}_dimension", probe.dimension, dimension))
        metrics[f"{name}_dimension"] = probe.dimension
        metrics[f"{name}_gap"] = probe.gap
    return ExperimentOutcome(checks=tuple(checks), metrics=metrics, uncertain=uncertain)


@REGISTRY.register(
    "near_invariance",
    description="Backward shift keeps zero-at-origin kernel elements in the kernel",
    anchor="near backward-shift invariance of Toeplitz kernels",
    defaults={"blaschke_count": 3, "tolerance": 1e-6},
)
def near_invariance(cfg: GridConfig, rng: np.random.Generator, params: Params) -> ExperimentOutcome:
    tolerance = coerce_positive_float(params.get("tolerance"), field_name="tolerance")
    symbols: list[tuple[str, ToeplitzSymbol]] = [("z3", power_symbol(-3, cfg)), ("z5", power_symbol(-5, cfg))]
    for idx in range(_int_param(params, "blaschke_count", low=0, high=100)):
        blaschke = random_blaschke(rng, int(rng.integers(1, 5)), cfg)
        symbols.append((f"blaschke{idx}", conj_symbol(blaschke, "conj(B)")))
        if idx == 0:
            symbols.append(("multiplied", multiplier_symbol(symbols[-1][1], polynomial([2, 1], cfg))))

    checks: list[Check] = []
    metrics: dict[str, float] = {}
    uncertain = False
    for name, symbol in symbols:
        basis = numerical_kernel(symbol, allow_uncertain=True)
        uncertain = uncertain or not basis.certain
        defect = near_invariance_defect(symbol, basis)
        checks.append(Check.at_most(f"{name}_defect", defect, tolerance))
        metrics[f"{name}_defect"] = defect

    rep = halfinteger_symbol_kernel(7, cfg)
    assert isinstance(rep, FiniteKernelRep)
    exact = KernelBasis(
        vectors=tuple(rep.basis()),
        residuals=rep.residuals,
        dimension=rep.degree_n,
        gap=math.inf,
        certain=True,
        tolerance=cfg.tol_branch,
        size=0,
    )
    defect = near_invariance_defect(rep.symbol, exact)
    checks.append(Check.at_most("half_integer_defect", defect, 10.0 * cfg.tol_branch))
    metrics["half_integer_defect"] = defect
    return ExperimentOutcome(checks=tuple(checks), metrics=metrics, uncertain=uncertain)


@REGISTRY.register(
    "kernel_equality_z_minus_a",
    description="ker T_{(z-a)h} = ker T_{zh} for |a| = 1, and not for |a| > 1",
    anchor="kernel equality under a boundary zero factor",
    defaults={"points": [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]], "control": [2.0, 0.0]},
)
def kernel_equality_z_minus_a(cfg: GridConfig, rng: np.random.Generator, params: Params) -> ExperimentOutcome:
    nodes = grid_nodes(cfg)
    blaschke = random_blaschke(rng, 2, cfg)
    bases = {
        "conj_z3": monomial(-3, cfg).samples,
        "conj_zB": np.conj(nodes * blaschke.samples.samples),
    }
    cases = [(a, True) for a in _points_param(params, "points")] + [(_point_param(params, "control"), False)]

    checks: list[Check] = []
    agreed = 0
    for name, h in bases.items():
        plain = ToeplitzSymbol.from_boundary(BoundaryFunction(nodes * h, cfg), label=f"z*{name}")
        for a, expected in cases:
            shifted = ToeplitzSymbol.from_boundary(BoundaryFunction((nodes - a) * h, cfg), label=f"(z-a)*{name}")
            ok = kernels_equal(shifted, plain) == expected
            agreed += int(ok)
            checks.append(Check.holds(f"{name}_a={a.real:g}{a.imag:+g}i", ok))
    return ExperimentOutcome(checks=tuple(checks), metrics={"agreement": agreed / len(checks)})


@REGISTRY.register(
    "multiplier_consistency",
    description="w·ker T_h = ker T_{h conj(w)/w} for invertible rational w",
    anchor="multipliers between Toeplitz kernels",
    defaults={"trials": 10},
)
def multiplier_consistency(cfg: GridConfig, rng: np.random.Generator, params: Params) -> ExperimentOutcome:
    worst_residual = worst_angle = 0.0
    dimension_matches = 0
    trials = _int_param(params, "trials", low=1, high=1000)
    for _ in range(trials):
        roots = [_outside_point(rng) for _ in range(3)]
        w = parse_function({"rational": {"numerator": roots[:2], "denominator": roots[2:]}}, cfg)
        h = conj_symbol(random_blaschke(rng, int(rng.integers(1, 4)), cfg), "conj(B)")
        g = multiplier_symbol(h, w)
        products = [as_hardy(pointwise_multiply(w, v)) for v in numerical_kernel(h).vectors]
        worst_residual = max(worst_residual, *(residual_in_kernel(g, p) for p in products))
        target = numerical_kernel(g, allow_uncertain=True)
        dimension_matches += int(target.dimension == len(products))
        worst_angle = max(worst_angle, kernel_angles(span_coefficients(products), target))
    return ExperimentOutcome(
        checks=(
            Check.at_most("image_residual", worst_residual, cfg.tol_residual),
            Check.equal("dimension_matches", dimension_matches, trials),
            Check.at_most("span_angle", worst_angle, 1e-6),
        ),
        metrics={"image_residual": worst_residual, "span_angle": worst_angle},
    )


def _outside_point(rng: np.random.Generator) -> list[float]:
    point = rng.uniform(1.5, 3.0) * np.exp(2j * np.pi * rng.uniform())
    return [float(point.real), float(point.imag)]


# --- Herglotz data ------------------------------------------------------------------


@REGISTRY.register(
    "herglotz_example",
    description="u = (1+z)/sqrt(2), alpha = z: F = 1+z, b = z/(2+z), a = sqrt(2)(1+z)/(2+z)",
    anchor="Herglotz parameters of an isometric multiplier",
)
def herglotz_example(cfg: GridConfig, rng: np.random.Generator, params: Params) -> ExperimentOutcome:
    nodes = grid_nodes(cfg)
    root2 = math.sqrt(2.0)
    u = polynomial([1.0 / root2, 1.0 / root2], cfg)
    data = herglotz_parameters(u, make_inner(InnerSpec(power=1), cfg))
    errors = {
        "F_error": float(np.max(np.abs(data.F.samples - (1.0 + nodes)))),
        "b_error": float(np.max(np.abs(data.b.samples - nodes / (2.0 + nodes)))),
        "a_error": float(np.max(np.abs(data.a.samples - root2 * (1.0 + nodes) / (2.0 + nodes)))),
        "u_alpha_error": float(np.max(np.abs(data.u_alpha.samples - root2 / (2.0 - nodes)))),
        "F_at_zero_error": abs(complex(data.F.evaluator(0.0)) - 1.0),
    }
    checks = [Check.at_most(name, value, 1e-10) for name, value in errors.items()]
    checks.append(Check.at_most("identity_error", data.identity_error, 1e-12))
    checks.append(Check.at_most("b_sup", data.b_sup, 1.0 + 1e-12))
    return ExperimentOutcome(checks=tuple(checks), metrics={**errors, "identity_error": data.identity_error})
