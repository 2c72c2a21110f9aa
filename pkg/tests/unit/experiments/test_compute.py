from __future__ import annotations

import pytest

from toeplab.core.errors import NotInKernel, ValidationError
from toeplab.core.models import ReportStatus
from toeplab.core.payloads import validate_compute_request
from toeplab.experiments import DEFAULT_SEED, run_compute


def _compute(raw: dict, cfg):
    return run_compute(validate_compute_request(raw), cfg)


def test_kernel_verb_reports_dimension_and_basis(small_cfg) -> None:
    report = _compute({"verb": "kernel", "symbol": {"conj": {"power": 3}}, "size": 32}, small_cfg)

    assert report.experiment_id == "compute:kernel"
    assert report.status is ReportStatus.PASS
    assert report.metrics["dimension"] == 3
    assert report.metrics["certain"] == 1.0
    assert sorted(report.artifacts) == ["basis_0", "basis_1", "basis_2"]
    assert report.params == {"size": 32}
    assert report.seed == DEFAULT_SEED


def test_inner_outer_verb_lists_zeros(small_cfg) -> None:
    report = _compute({"verb": "inner-outer", "function": {"polynomial": [-1.0, 1.5, 1.0]}}, small_cfg)

    assert report.status is ReportStatus.PASS
    assert report.artifacts["zeros"] == [[pytest.approx(0.5), pytest.approx(0.0, abs=1e-12)]]
    assert report.notes == ("method: roots",)


def test_outer_test_verb_reports_verdict(small_cfg) -> None:
    report = _compute({"verb": "outer-test", "function": {"polynomial": [0.5, 1.0]}}, small_cfg)

    assert report.metrics["is_outer"] == 0.0
    assert report.notes == ("verdict: NotOuter",)


def test_crofoot_verb_is_isometric(small_cfg) -> None:
    report = _compute(
        {"verb": "crofoot", "symbol": {"inner": {"zeros": [[0.3, 0.2], [-0.5, 0.1]]}}, "lambda": [0.2, -0.1], "params": {"trials": 3}},
        small_cfg,
    )

    assert report.status is ReportStatus.PASS
    assert report.params["lambda"] == [0.2, -0.1]


def test_crofoot_verb_needs_inner_descriptor(small_cfg) -> None:
    with pytest.raises(ValidationError):
        _compute({"verb": "crofoot", "symbol": {"power": 2}, "lambda": 0.1}, small_cfg)


def test_conjugate_verb_checks_involution(small_cfg) -> None:
    report = _compute(
        {"verb": "conjugate", "symbol": {"conj": {"power": 3}}, "function": {"polynomial": [1.0, 2.0, 3.0]}, "size": 32},
        small_cfg,
    )

    assert report.status is ReportStatus.PASS
    assert report.artifacts["conjugate"][:3] == [
        [pytest.approx(3.0), pytest.approx(0.0, abs=1e-12)],
        [pytest.approx(2.0), pytest.approx(0.0, abs=1e-12)],
        [pytest.approx(1.0), pytest.approx(0.0, abs=1e-12)],
    ]


def test_conjugate_verb_rejects_function_outside_kernel(small_cfg) -> None:
    with pytest.raises(NotInKernel):
        _compute({"verb": "conjugate", "symbol": {"conj": {"power": 1}}, "function": {"power": 2}, "size": 32}, small_cfg)


def test_maximal_test_and_factor_verbs(small_cfg) -> None:
    raw = {"symbol": {"conj": {"power": 3}}, "function": {"polynomial": [0.5, 0.0, 2.0]}, "size": 32}

    maximal = _compute({"verb": "maximal-test", **raw}, small_cfg)
    factor = _compute({"verb": "factor", **raw, "lambda": [0.1, 0.1]}, small_cfg)

    assert maximal.metrics["is_maximal"] == 1.0
    assert maximal.status is ReportStatus.PASS
    assert factor.status is ReportStatus.PASS


def test_jumps_verb_on_pm_one_symbol(cfg) -> None:
    report = _compute({"verb": "jumps", "symbol": {"piecewise": {"breaks": [0.0, 3.141592653589793], "values": [1, -1]}}}, cfg)

    assert report.metrics["jump_count"] == 2
    assert report.metrics["regular2"] == 0.0
    assert report.metrics["jump0_exponent_re"] == pytest.approx(-0.5, abs=1e-2)


def test_hayashi_verb_with_explicit_multiplier(small_cfg) -> None:
    report = _compute({"verb": "hayashi", "function": {"constant": 1.0}, "params": {"degree": 2, "trials": 3}}, small_cfg)

    assert report.status is ReportStatus.PASS
    assert report.metrics["dimension"] == 2
    assert report.metrics["gram_condition"] == pytest.approx(1.0)


def test_hayashi_verb_requires_order(small_cfg) -> None:
    with pytest.raises(ValidationError):
        _compute({"verb": "hayashi", "params": {"n": 0}}, small_cfg)


def test_rigidity_verb(small_cfg) -> None:
    report = _compute({"verb": "rigidity", "function": {"polynomial": [2.0, 1.0]}, "size": 32}, small_cfg)

    assert report.metrics["rigid"] == 1.0
    assert report.notes == ("verdict: RigidAtScale",)


@pytest.mark.parametrize("trials", ["many", 0, -3, 2.5, True])
def test_crofoot_verb_rejects_malformed_trials(trials, small_cfg) -> None:
    raw = {"verb": "crofoot", "symbol": {"inner": {"zeros": [[0.3, 0.2]]}}, "lambda": 0.1, "params": {"trials": trials}}

    with pytest.raises(ValidationError):
        _compute(raw, small_cfg)


def test_hayashi_verb_rejects_malformed_trials(small_cfg) -> None:
    with pytest.raises(ValidationError):
        _compute({"verb": "hayashi", "function": {"constant": 1.0}, "params": {"degree": 2, "trials": "x"}}, small_cfg)


def test_kernel_verb_defaults_size_to_truncation(small_cfg) -> None:
    report = _compute({"verb": "kernel", "symbol": {"conj": {"power": 2}}}, small_cfg)

    assert report.status is ReportStatus.PASS
    assert report.metrics["dimension"] == 2
