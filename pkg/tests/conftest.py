from __future__ import annotations

import numpy as np
import pytest

from toeplab.core.config import GridConfig


@pytest.fixture
def cfg() -> GridConfig:
    return GridConfig()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def small_cfg() -> GridConfig:
    return GridConfig(grid_size=512, truncation=64)
