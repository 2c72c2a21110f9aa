from __future__ import annotations

import pytest

from toeplab.core.config import GridConfig, load_grid_config
from toeplab.core.errors import ConfigInvalid, ErrorCode


def test_defaults_match_documented_tiers() -> None:
    cfg = GridConfig()

    assert cfg.grid_size == 4096
    assert cfg.truncation == 256
    assert cfg.tol_coeff == 1e-10
    assert cfg.tol_residual == 1e-7
    assert cfg.tol_branch == 1e-4
    assert cfg.tol_section == 1e-2
    assert cfg.tol_singular == 5e-2


@pytest.mark.parametrize(
    "overrides",
    [
        {"grid_size": 3000},
        {"grid_size": 512, "truncation": 256},
        {"tol_residual": 0.0},
        {"tol_branch": float("nan")},
        {"truncation": -1},
    ],
)
def test_invalid_configs_raise_config_invalid(overrides: dict) -> None:
    with pytest.raises(ConfigInvalid) as exc_info:
        GridConfig().with_overrides(overrides)

    assert exc_info.value.code == ErrorCode.CONFIG_INVALID


def test_with_overrides_rejects_unknown_field() -> None:
    with pytest.raises(ConfigInvalid) as exc_info:
        GridConfig().with_overrides({"grid": 1024})

    assert exc_info.value.details == {"field": "grid"}


def test_with_overrides_coerces_strings_and_skips_none() -> None:
    cfg = GridConfig().with_overrides({"grid_size": "8192", "tol_residual": "1e-8", "truncation": None})

    assert cfg.grid_size == 8192
    assert cfg.tol_residual == 1e-8
    assert cfg.truncation == 256


def test_load_grid_config_reads_environment_then_overrides() -> None:
    environ = {"TOEPLAB_GRID_SIZE": "8192", "TOEPLAB_TOL_BRANCH": "2e-4"}

    cfg = load_grid_config({"tol_branch": 3e-4}, environ=environ)

    assert cfg.grid_size == 8192
    assert cfg.tol_branch == 3e-4


def test_to_mapping_echoes_every_field() -> None:
    mapped = GridConfig().to_mapping()

    assert set(mapped) == {
        "grid_size",
        "truncation",
        "tol_coeff",
        "tol_residual",
        "tol_outer",
        "tol_branch",
        "tol_section",
        "tol_singular",
    }
