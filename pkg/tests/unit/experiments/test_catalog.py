from __future__ import annotations

import pytest

from toeplab.core.errors import LambdaOutsideDisk, ValidationError
from toeplab.core.models import ReportStatus
from toeplab.experiments import REGISTRY


def test_dim_k_zn_recovers_monomial_span(cfg) -> None:
    report = REGISTRY.run("dim_K_zn", cfg)

    assert report.status is ReportStatus.PASS
    assert report.metrics["dimension"] == 5
    assert report.metrics["span_angle"] < 1e-8


def test_dim_k_zn_accepts_other_orders(cfg) -> None:
    report = REGISTRY.run("dim_K_zn", cfg, params={"n": 9})

    assert report.metrics["dimension"] == 9
    assert report.params["n"] == 9


@pytest.mark.parametrize("n", [0, 500, 2.5, "five"])
def test_dim_k_zn_rejects_bad_orders(n, cfg) -> None:
    with pytest.raises(ValidationError):
        REGISTRY.run("dim_K_zn", cfg, params={"n": n})


def test_pm_one_symbol_has_trivial_kernel(cfg) -> None:
    report = REGISTRY.run("pm_one_symbol", cfg, params={"sizes": [64]})

    assert report.metrics["jump_count"] == 2
    assert report.metrics["dimension"] == 0


def test_kernel_equality_for_blaschke_factor(cfg) -> None:
    report = REGISTRY.run("kernel_equality_z_minus_a", cfg)

    assert report.metrics["agreement"] == 1.0


def test_wiener_hopf_split_is_exact(cfg) -> None:
    report = REGISTRY.run("wiener_hopf_fbp", cfg, params={"count": 5, "max_zeros": 4})

    assert report.status is ReportStatus.PASS


def test_herglotz_example_identity(cfg) -> None:
    report = REGISTRY.run("herglotz_example", cfg)

    assert report.metrics["identity_error"] < 1e-10
    assert report.status is ReportStatus.PASS


def test_reports_serialise_round_trip(cfg) -> None:
    report = REGISTRY.run("dim_K_zn", cfg, seed=5)

    assert type(report).from_json(report.to_json()) == report


def test_eigenfunction_k_z5_records_derived_conjugate(cfg) -> None:
    report = REGISTRY.run("eigenfunction_K_z5", cfg)

    checks = {check.name: check for check in report.checks}
    assert checks["conj_z2_one_minus_z_2_error"].passed
    assert report.metrics["display_distance"] == pytest.approx(8**0.5, rel=1e-9)
    assert any("(z-1)^2" in note for note in report.notes)


@pytest.mark.parametrize("experiment_id", [info.experiment_id for info in REGISTRY.list()])
def test_every_catalog_experiment_passes(experiment_id, cfg) -> None:
    report = REGISTRY.run(experiment_id, cfg)

    failed = [check.name for check in report.checks if not check.passed]
    assert report.passed, f"{experiment_id}: {report.status.value}, failed checks {failed}"


def test_catalog_has_every_experiment() -> None:
    assert len(REGISTRY) == 19


def test_halfinteger_family_dimensions(cfg) -> None:
    report = REGISTRY.run("halfinteger_family", cfg)

    assert [report.metrics[f"n{n}_dimension"] for n in (1, 3, 5, 7, 9)] == [0, 1, 2, 3, 4]


def test_singular_display_check_uses_singular_tier(cfg) -> None:
    report = REGISTRY.run("e_singular_factorisation", cfg, params={"trials": 3})

    checks = {check.name: check for check in report.checks}
    assert checks["conjugate_matches_display"].tolerance == cfg.tol_singular
    assert checks["conjugate_matches_display"].passed


def test_kernel_experiments_follow_small_truncation(small_cfg) -> None:
    report = REGISTRY.run("dim_K_zn", small_cfg)

    assert report.status is ReportStatus.PASS
    assert report.metrics["dimension"] == 5


def test_pm_one_sizes_are_clipped_to_truncation(small_cfg) -> None:
    report = REGISTRY.run("pm_one_symbol", small_cfg)

    assert report.metrics["dimension"] == 0


@pytest.mark.parametrize(
    ("experiment_id", "params"),
    [
        ("halfinteger_family", {"orders": "1,3"}),
        ("halfinteger_family", {"orders": [1, 2.5]}),
        ("pm_one_symbol", {"sizes": []}),
        ("crofoot_isometry_blaschke", {"lambdas": [["a", "b"]]}),
        ("theta_max_factorisation", {"lambda": "x"}),
        ("near_invariance", {"tolerance": -1.0}),
        ("kernel_equality_z_minus_a", {"control": None}),
    ],
)
def test_malformed_params_raise_validation_errors(experiment_id, params, cfg) -> None:
    with pytest.raises(ValidationError):
        REGISTRY.run(experiment_id, cfg, params=params)


def test_crofoot_lambdas_must_lie_in_disk(cfg) -> None:
    with pytest.raises(LambdaOutsideDisk):
        REGISTRY.run("crofoot_isometry_blaschke", cfg, params={"lambdas": [[1.5, 0.0]]})
