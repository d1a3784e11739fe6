"""Shared fixtures: case configurations and synthetic scenarios.

Session scope keeps the expensive pieces (full-year synthesis) built once;
the short three-week scenarios exist so closed-loop tests stay fast.
"""

import numpy as np
import pytest
from hypothesis import settings

from mesbench.data.scenario import make_scenario
from mesbench.model.presets import (
    DEFAULT_START_EPOCH,
    STEPS_PER_WEEK,
    case_config,
    with_default_weights,
)
from mesbench.model.types import TimeGrid

settings.register_profile("suite", deadline=None, max_examples=50)
settings.load_profile("suite")


def short_grid(n_steps: int, start: float = DEFAULT_START_EPOCH) -> TimeGrid:
    return TimeGrid(start_epoch=start, n_steps=n_steps, step_s=900)


@pytest.fixture(scope="session")
def simple_cfg():
    return case_config("simple")


@pytest.fixture(scope="session")
def complex_cfg():
    return case_config("complex")


@pytest.fixture(scope="session")
def scenario_simple_3w():
    return make_scenario(0, short_grid(3 * STEPS_PER_WEEK), "simple")


@pytest.fixture(scope="session")
def scenario_complex_3w():
    return make_scenario(0, short_grid(3 * STEPS_PER_WEEK), "complex")


@pytest.fixture(scope="session")
def year_scenario_simple(simple_cfg):
    return make_scenario(0, simple_cfg.grid, "simple")


@pytest.fixture(scope="session")
def year_scenario_complex(complex_cfg):
    return make_scenario(0, complex_cfg.grid, "complex")


@pytest.fixture(scope="session")
def simple_weighted(simple_cfg, year_scenario_simple):
    return with_default_weights(simple_cfg, year_scenario_simple.x_el.values)


@pytest.fixture(scope="session")
def complex_weighted(complex_cfg, year_scenario_complex):
    return with_default_weights(complex_cfg, year_scenario_complex.x_el.values)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
