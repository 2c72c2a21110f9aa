from __future__ import annotations

import numpy as np
import pytest

from toeplab.core.config import GridConfig
from toeplab.core.errors import UnknownExperiment, ValidationError
from toeplab.core.models import Check, ExperimentOutcome, ReportStatus
from toeplab.experiments import DEFAULT_SEED, REGISTRY
from toeplab.experiments.registry import ExperimentRegistry

CATALOGUE = {
    "kernel_z_7_2",
    "halfinteger_family",
    "pm_one_symbol",
    "dim_K_zn",
    "blaschke_dimensions",
    "wiener_hopf_fbp",
    "conjugation_suite",
    "eigenfunction_K_z5",
    "maximal_equivalence",
    "outer_maximal_construction",
    "theta_max_factorisation",
    "e_singular_factorisation",
    "crofoot_isometry_E",
    "crofoot_isometry_blaschke",
    "rigidity_probes",
    "near_invariance",
    "kernel_equality_z_minus_a",
    "multiplier_consistency",
    "herglotz_example",
}


def _registry() -> ExperimentRegistry:
    registry = ExperimentRegistry()

    @registry.register("draw", description="draw one number", anchor="sampling", defaults={"scale": 1.0})
    def draw(cfg: GridConfig, rng: np.random.Generator, params) -> ExperimentOutcome:
        value = float(rng.uniform()) * params["scale"]
        return ExperimentOutcome(checks=(Check.at_most("value", value, params["scale"]),), metrics={"value": value})

    return registry


def test_catalogue_is_registered_with_anchors() -> None:
    assert {info.experiment_id for info in REGISTRY.list()} == CATALOGUE
    assert all(info.anchor and info.description for info in REGISTRY.list())


def test_listing_is_sorted() -> None:
    ids = [info.experiment_id for info in REGISTRY.list()]

    assert ids == sorted(ids)


def test_duplicate_registration_is_rejected() -> None:
    registry = _registry()

    with pytest.raises(ValueError):
        registry.register("draw", description="again", anchor="sampling")(lambda cfg, rng, params: ExperimentOutcome())


def test_unknown_experiment_lists_known_ids() -> None:
    with pytest.raises(UnknownExperiment) as exc_info:
        _registry().run("missing", GridConfig())

    assert exc_info.value.details["known"] == ["draw"]


def test_unknown_parameter_is_rejected() -> None:
    with pytest.raises(ValidationError) as exc_info:
        _registry().run("draw", GridConfig(), params={"size": 3})

    assert exc_info.value.details["field"] == "size"


def test_runs_are_reproducible_for_a_seed() -> None:
    registry = _registry()

    first = registry.run("draw", GridConfig(), seed=11)
    second = registry.run("draw", GridConfig(), seed=11)
    other = registry.run("draw", GridConfig(), seed=12)

    assert first.metrics == second.metrics
    assert first.metrics != other.metrics


def test_report_echoes_defaults_seed_and_config() -> None:
    report = _registry().run("draw", GridConfig(), params={"scale": 2.0})

    assert report.seed == DEFAULT_SEED
    assert report.params == {"scale": 2.0}
    assert report.config["grid_size"] == 4096
    assert report.status is ReportStatus.PASS
    assert report.wall_time >= 0.0
