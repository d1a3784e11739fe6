"""Agent checkpoints: one .npz holding parameters plus a JSON header.

The header (format version, algorithm, hyperparameters, the frozen
EnvSpec with its normalization bounds, reward scale, step counter) rides
inside the archive as a JSON string, so a checkpoint is a single file.
Optimizer moments are deliberately not stored -- a checkpoint is a policy
snapshot for evaluation and deployment, not a mid-flight training state.
"""

from __future__ import annotations

import json
from dataclasses import asdict

import numpy as np

from mesbench.model.actions import Channel
from mesbench.model.types import Carrier, RewardWeights
from mesbench.rl.env import EnvSpec
from mesbench.rl.nets import MlpParams, params_from_flat
from mesbench.rl.policies import GaussianHead
from mesbench.rl.ppo import PpoAgent, PpoHyper
from mesbench.rl.td3 import Td3Agent, Td3Hyper

FORMAT_VERSION = 1


class CheckpointError(ValueError):
    """The file is not a readable agent checkpoint."""


def _spec_to_dict(spec: EnvSpec) -> dict:
    return {
        "case_label": spec.case_label,
        "obs_low": list(spec.obs_low),
        "obs_high": list(spec.obs_high),
        "channels": [
            {
                "key": c.key,
                "asset_id": c.asset_id,
                "carrier": c.carrier.value,
                "kind": c.kind,
                "p_min": c.p_min,
                "p_max": c.p_max,
            }
            for c in spec.channels
        ],
        "action_mode": spec.action_mode,
        "tau": spec.tau,
        "episode_len": spec.episode_len,
        "reward_weights": asdict(spec.reward_weights),
    }


def _spec_from_dict(d: dict) -> EnvSpec:
    return EnvSpec(
        case_label=d["case_label"],
        obs_low=tuple(d["obs_low"]),
        obs_high=tuple(d["obs_high"]),
        channels=tuple(
            Channel(
                key=c["key"],
                asset_id=c["asset_id"],
                carrier=Carrier(c["carrier"]),
                kind=c["kind"],
                p_min=c["p_min"],
                p_max=c["p_max"],
            )
            for c in d["channels"]
        ),
        action_mode=d["action_mode"],
        tau=d["tau"],
        episode_len=d["episode_len"],
        reward_weights=RewardWeights(**d["reward_weights"]),
    )


def _pack(prefix: str, p: MlpParams, out: dict) -> None:
    for i, arr in enumerate(p.flat()):
        out[f"{prefix}{i}"] = arr


def _unpack(prefix: str, data) -> MlpParams:
    arrays = []
    i = 0
    while f"{prefix}{i}" in data:
        arrays.append(np.asarray(data[f"{prefix}{i}"]))
        i += 1
    if not arrays:
        raise CheckpointError(f"no arrays under prefix {prefix!r}")
    return params_from_flat(arrays)


def save_agent(agent, path: str) -> None:
    """Write a PpoAgent or Td3Agent snapshot to ``path`` (.npz)."""
    meta = {
        "format_version": FORMAT_VERSION,
        "algo": agent.algo,
        "seed": agent.seed,
        "hyper": asdict(agent.hyper),
        "env_spec": _spec_to_dict(agent.spec),
        "reward_scale": agent.reward_scale,
        "env_steps": agent.env_steps,
    }
    arrays: dict = {"__meta__": np.frombuffer(json.dumps(meta).encode(), np.uint8)}
    if agent.algo == "ppo":
        _pack("policy_", agent.policy, arrays)
        _pack("value_", agent.value, arrays)
        if not agent.discrete:
            arrays["log_std"] = agent.head.log_std
    elif agent.algo == "td3":
        _pack("actor_", agent.actor, arrays)
        _pack("q1_", agent.q1, arrays)
        _pack("q2_", agent.q2, arrays)
        _pack("actor_t_", agent.actor_target, arrays)
        _pack("q1_t_", agent.q1_target, arrays)
        _pack("q2_t_", agent.q2_target, arrays)
    else:
        raise CheckpointError(f"unknown algorithm {agent.algo!r}")
    np.savez(path, **arrays)


def load_agent(path: str):
    """Rebuild the agent stored at ``path``."""
    try:
        data = np.load(path)
    except Exception as exc:
        raise CheckpointError(f"cannot read {path}: {exc}") from exc
    if "__meta__" not in data:
        raise CheckpointError(f"{path} has no checkpoint header")
    meta = json.loads(bytes(np.asarray(data["__meta__"])).decode())
    if meta.get("format_version") != FORMAT_VERSION:
        raise CheckpointError(
            f"unsupported checkpoint version {meta.get('format_version')}"
        )
    spec = _spec_from_dict(meta["env_spec"])
    if meta["algo"] == "ppo":
        agent = PpoAgent(spec, PpoHyper(**meta["hyper"]), meta["seed"])
        agent.policy = _unpack("policy_", data)
        agent.value = _unpack("value_", data)
        if not agent.discrete:
            agent.head = GaussianHead(log_std=np.asarray(data["log_std"]))
    elif meta["algo"] == "td3":
        agent = Td3Agent(spec, Td3Hyper(**meta["hyper"]), meta["seed"])
        agent.actor = _unpack("actor_", data)
        agent.q1 = _unpack("q1_", data)
        agent.q2 = _unpack("q2_", data)
        agent.actor_target = _unpack("actor_t_", data)
        agent.q1_target = _unpack("q1_t_", data)
        agent.q2_target = _unpack("q2_t_", data)
    else:
        raise CheckpointError(f"unknown algorithm {meta['algo']!r}")
    agent.reward_scale = meta["reward_scale"]
    agent.env_steps = meta["env_steps"]
    return agent
