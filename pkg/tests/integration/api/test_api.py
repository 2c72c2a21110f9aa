from __future__ import annotations

from fastapi.testclient import TestClient

from toeplab.api.server import create_app
from toeplab.core.config import GridConfig

SMALL = {"grid_size": 512, "truncation": 64}


def _client() -> TestClient:
    return TestClient(create_app(GridConfig(grid_size=512, truncation=64)))


def test_list_experiments_endpoint() -> None:
    response = _client().get("/v1/experiments")

    assert response.status_code == 200
    experiments = response.json()["experiments"]
    assert len(experiments) == 19
    assert {"id", "description", "anchor"} <= set(experiments[0])


def test_run_experiment_endpoint_returns_report() -> None:
    response = _client().post("/v1/experiments/run", json={"experiment_id": "dim_K_zn", "params": {"n": 4}})

    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "pass"
    assert body["metrics"]["dimension"] == 4.0
    assert body["config"]["grid_size"] == 512
    assert body["schema_version"] == "1"


def test_compute_endpoint_kernel() -> None:
    response = _client().post(
        "/v1/compute",
        json={"verb": "kernel", "symbol": {"conj": {"power": 3}}, "size": 32},
    )

    assert response.status_code == 200
    body = response.json()
    assert body["experiment_id"] == "compute:kernel"
    assert body["metrics"]["dimension"] == 3.0
    assert sorted(body["artifacts"]) == ["basis_0", "basis_1", "basis_2"]


def test_compute_endpoint_accepts_lambda_alias() -> None:
    response = _client().post(
        "/v1/compute",
        json={"verb": "crofoot", "symbol": {"inner": {"zeros": [[0.5, 0]]}}, "lambda": [0.3, 0.1]},
    )

    assert response.status_code == 200
    assert response.json()["params"]["lambda"] == [0.3, 0.1]


def test_unknown_experiment_maps_to_404() -> None:
    response = _client().post("/v1/experiments/run", json={"experiment_id": "nope"})

    assert response.status_code == 404
    assert response.json()["detail"]["code"] == "UNKNOWN_EXPERIMENT"


def test_bad_verb_maps_to_400() -> None:
    response = _client().post("/v1/compute", json={"verb": "invert", "symbol": {"constant": 1.0}})

    assert response.status_code == 400
    assert response.json()["detail"]["code"] == "VALIDATION_ERROR"


def test_invalid_override_maps_to_400() -> None:
    response = _client().post(
        "/v1/experiments/run",
        json={"experiment_id": "dim_K_zn", "overrides": {"grid_size": 1000}},
    )

    assert response.status_code == 400
    assert response.json()["detail"]["code"] == "CONFIG_INVALID"


def test_precondition_maps_to_422() -> None:
    response = _client().post("/v1/compute", json={"verb": "inner-outer", "function": {"constant": 0.0}})

    assert response.status_code == 422
    assert response.json()["detail"]["code"] == "PRECONDITION_FAILED"
