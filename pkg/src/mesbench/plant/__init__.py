"""Discrete-time truth plant: asset physics, balances, episodes."""

from mesbench.data.scenario import ExogenousFrame
from mesbench.plant.assets import (
    chp_feasible_pq,
    converter_step,
    pv_power,
    storage_step,
    wind_power,
)
from mesbench.plant.export import trajectory_csv
from mesbench.plant.sim import (
    AssetFlows,
    StateError,
    StepRecord,
    StepResult,
    episode_objective,
    initial_state,
    run_episode,
    step,
)

__all__ = [
    "AssetFlows",
    "ExogenousFrame",
    "StateError",
    "StepRecord",
    "StepResult",
    "chp_feasible_pq",
    "converter_step",
    "episode_objective",
    "initial_state",
    "pv_power",
    "run_episode",
    "step",
    "storage_step",
    "trajectory_csv",
    "wind_power",
]
