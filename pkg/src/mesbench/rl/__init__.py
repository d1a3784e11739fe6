"""Learning-based controllers: networks, environment, PPO and TD3."""

from mesbench.rl.buffers import ReplayBuffer, RolloutBuffer, gae
from mesbench.rl.checkpoint import CheckpointError, load_agent, save_agent
from mesbench.rl.env import (
    EPISODE_STEPS,
    EnvSpec,
    MesEnv,
    ProtocolError,
    action_to_control,
    levels_to_norm,
    make_env_spec,
    normalize_obs,
    observation_bounds,
)
from mesbench.rl.nets import (
    AdamState,
    MlpParams,
    ShapeError,
    adam_init,
    adam_step,
    mlp_forward,
    mlp_grad,
    mlp_init,
    params_from_flat,
)
from mesbench.rl.policies import GaussianHead, MultiDiscreteHead, OUNoise
from mesbench.rl.ppo import (
    PPO_COMPLEX,
    PPO_SIMPLE,
    NumericalError,
    PpoAgent,
    PpoHyper,
    PpoStats,
    measure_reward_scale,
)
from mesbench.rl.td3 import (
    TD3_COMPLEX,
    TD3_SIMPLE,
    Td3Agent,
    Td3Hyper,
    polyak_update,
    td3_target,
)

__all__ = [
    "EPISODE_STEPS",
    "PPO_COMPLEX",
    "PPO_SIMPLE",
    "TD3_COMPLEX",
    "TD3_SIMPLE",
    "AdamState",
    "CheckpointError",
    "EnvSpec",
    "GaussianHead",
    "MesEnv",
    "MlpParams",
    "MultiDiscreteHead",
    "NumericalError",
    "OUNoise",
    "PpoAgent",
    "PpoHyper",
    "PpoStats",
    "ProtocolError",
    "ReplayBuffer",
    "RolloutBuffer",
    "ShapeError",
    "Td3Agent",
    "Td3Hyper",
    "action_to_control",
    "adam_init",
    "adam_step",
    "gae",
    "levels_to_norm",
    "load_agent",
    "make_env_spec",
    "measure_reward_scale",
    "mlp_forward",
    "mlp_grad",
    "mlp_init",
    "normalize_obs",
    "observation_bounds",
    "params_from_flat",
    "polyak_update",
    "save_agent",
    "td3_target",
]
