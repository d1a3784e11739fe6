"""mesbench: multi-energy-system dispatch benchmark.

A simulated electricity/heat/gas plant with dispatchable converters and
storages, a receding-horizon linear MPC built on an in-repo MILP solver,
and from-scratch PPO/TD3 agents trained on the same plant.  Everything is
deterministic under a seed so controller comparisons are reproducible.
"""

from mesbench.model.types import (
    AssetKind,
    AssetSpec,
    Carrier,
    ConfigError,
    ControlAction,
    Efficiency,
    LossTerms,
    MesConfig,
    Observation,
    RewardWeights,
    SystemState,
    TimeGrid,
    UnknownAssetError,
)

__version__ = "0.1.0"

__all__ = [
    "AssetKind",
    "AssetSpec",
    "Carrier",
    "ConfigError",
    "ControlAction",
    "Efficiency",
    "LossTerms",
    "MesConfig",
    "Observation",
    "RewardWeights",
    "SystemState",
    "TimeGrid",
    "UnknownAssetError",
    "__version__",
]
