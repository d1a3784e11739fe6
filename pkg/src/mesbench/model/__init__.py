"""Core value types, config validation and the action/reward contract."""

from mesbench.model.actions import (
    Channel,
    controllable_channels,
    project_action,
    reward,
)
from mesbench.model.presets import case_config, with_default_weights
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
from mesbench.model.validate import validate_config

__all__ = [
    "AssetKind",
    "AssetSpec",
    "Carrier",
    "Channel",
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
    "case_config",
    "controllable_channels",
    "project_action",
    "reward",
    "validate_config",
    "with_default_weights",
]
