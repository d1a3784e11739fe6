"""Episodic environment over the plant: the interface an agent trains on.

The observation is the plant's six-component view (thermal demand,
electric demand, wind in-feed, PV in-feed, accumulated cost, day-ahead
price), min-max normalized to [-1, 1] with bounds computed once from the
whole scenario and frozen into the EnvSpec -- the same bounds at train and
eval time, stored in checkpoints.

Actions arrive normalized as well: one value in [-1, 1] per controllable
channel.  Storage channels map linearly to the signed power rating;
converter channels map [-1, 1] onto [0, p_nom].  The mapped action is then
projected onto the feasible set, so an agent can emit anything and the
plant still only ever sees legal setpoints.

An episode is one week (672 steps) starting at a uniformly random cursor
with uniformly random storage fill in [0.2, 0.8] of capacity; the reward
is -(a * l_cost + b * l_comfort), exactly the per-step loss the rest of
the package accounts in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mesbench.data.scenario import Scenario
from mesbench.model.actions import (
    STORAGE,
    Channel,
    controllable_channels,
    project_action,
    reward as step_reward,
)
from mesbench.model.types import (
    AssetKind,
    ControlAction,
    MesConfig,
    RewardWeights,
)
from mesbench.plant.assets import pv_power, wind_power
from mesbench.plant.sim import SystemState, initial_state
from mesbench.plant import sim

EPISODE_STEPS = 672  # one week at 15-minute resolution
SOC_RESET_RANGE = (0.2, 0.8)  # initial fill, fraction of capacity
OBS_DIM = 6


class ProtocolError(RuntimeError):
    """step() called before the first reset()."""


@dataclass(frozen=True)
class EnvSpec:
    """Frozen description of one training environment.

    action_mode "box" exposes each channel as a continuous [-1, 1]
    setpoint; "multidiscrete" exposes tau evenly spaced levels per channel
    (level k maps to -1 + 2k/(tau-1), then through the same box mapping).
    """

    case_label: str
    obs_low: tuple[float, ...]  # per-component lower bound, raw units
    obs_high: tuple[float, ...]
    channels: tuple[Channel, ...]
    action_mode: str  # "box" | "multidiscrete"
    tau: int  # levels per dimension (multidiscrete only)
    episode_len: int
    reward_weights: RewardWeights

    def __post_init__(self):
        if self.action_mode not in ("box", "multidiscrete"):
            raise ValueError(f"unknown action_mode {self.action_mode!r}")
        if self.action_mode == "multidiscrete" and self.tau < 2:
            raise ValueError("multidiscrete needs tau >= 2")
        if len(self.obs_low) != OBS_DIM or len(self.obs_high) != OBS_DIM:
            raise ValueError("observation bounds must have 6 components")
        if self.episode_len < 1:
            raise ValueError("episode_len must be >= 1")
        expected = {"simple": 3, "complex": 6}.get(self.case_label)
        if expected is not None and len(self.channels) != expected:
            raise ValueError(
                f"{self.case_label} case has {expected} action dimensions, "
                f"got {len(self.channels)}"
            )

    @property
    def action_dim(self) -> int:
        return len(self.channels)


def observation_bounds(
    cfg: MesConfig, scenario: Scenario, episode_len: int = EPISODE_STEPS
) -> tuple[np.ndarray, np.ndarray]:
    """Scenario-wide (low, high) for the six observation components.

    Demands, in-feeds and price read their extremes straight off the data;
    the accumulated-cost component is bracketed by the worst sustained
    import (and export, for the lower end) over one episode -- loose but
    fixed, which is all a normalizer needs.
    """
    wind = np.zeros(scenario.n_steps)
    solar = np.zeros(scenario.n_steps)
    for a in cfg.by_kind(AssetKind.WIND):
        wind += np.array([wind_power(float(v), a) for v in scenario.wind_speed.values])
    for a in cfg.by_kind(AssetKind.PV):
        solar += np.array([pv_power(float(v), a) for v in scenario.irradiance.values])

    x_hi = float(np.max(scenario.x_el.values))
    x_lo = float(np.min(scenario.x_el.values))
    el_cap = sum(
        a.outputs[0][1] for a in cfg.by_kind(AssetKind.GRID_ELECTRIC)
    )
    gas_cap = sum(a.outputs[0][1] for a in cfg.by_kind(AssetKind.GRID_GAS))
    dt_h = cfg.grid.step_h
    worst_spend = episode_len * dt_h * (x_hi * el_cap + cfg.gas_price * gas_cap)
    worst_earn = episode_len * dt_h * x_hi * el_cap

    lo = np.array(
        [
            float(np.min(scenario.e_th_demand.values)),
            float(np.min(scenario.e_el_demand.values)),
            0.0,
            0.0,
            -worst_earn,
            x_lo,
        ]
    )
    hi = np.array(
        [
            float(np.max(scenario.e_th_demand.values)),
            float(np.max(scenario.e_el_demand.values)),
            float(np.max(wind)),
            float(np.max(solar)),
            worst_spend,
            x_hi,
        ]
    )
    return lo, hi


def make_env_spec(
    cfg: MesConfig,
    scenario: Scenario,
    action_mode: str = "box",
    tau: int = 5,
    episode_len: int = EPISODE_STEPS,
) -> EnvSpec:
    lo, hi = observation_bounds(cfg, scenario, episode_len)
    return EnvSpec(
        case_label=cfg.case_label,
        obs_low=tuple(float(v) for v in lo),
        obs_high=tuple(float(v) for v in hi),
        channels=controllable_channels(cfg),
        action_mode=action_mode,
        tau=tau,
        episode_len=episode_len,
        reward_weights=cfg.reward_weights,
    )


def normalize_obs(spec: EnvSpec, raw: np.ndarray) -> np.ndarray:
    """Min-max map into [-1, 1]; degenerate (flat) components map to 0."""
    lo = np.asarray(spec.obs_low)
    hi = np.asarray(spec.obs_high)
    span = hi - lo
    safe = np.where(span > 0.0, span, 1.0)
    out = 2.0 * (raw - lo) / safe - 1.0
    return np.clip(np.where(span > 0.0, out, 0.0), -1.0, 1.0)


def action_to_control(spec: EnvSpec, a_norm: np.ndarray) -> ControlAction:
    """Map a normalized action vector onto raw channel setpoints (W).

    The result is *pre-projection*: callers run it through
    ``project_action`` (the env does this itself in step()).
    """
    a = np.clip(np.asarray(a_norm, dtype=np.float64), -1.0, 1.0)
    if a.shape != (spec.action_dim,):
        raise ValueError(
            f"action shape {a.shape}, expected ({spec.action_dim},)"
        )
    sp: dict[str, float] = {}
    for v, ch in zip(a, spec.channels):
        if ch.kind == STORAGE:
            sp[ch.key] = float(v) * ch.p_max
        else:
            sp[ch.key] = 0.5 * (float(v) + 1.0) * ch.p_max
    return ControlAction(setpoints=sp)


def levels_to_norm(spec: EnvSpec, levels: np.ndarray) -> np.ndarray:
    """Multi-discrete level indices -> normalized box values."""
    lv = np.asarray(levels)
    if np.any(lv < 0) or np.any(lv >= spec.tau):
        raise ValueError(f"levels outside [0, {spec.tau})")
    return -1.0 + 2.0 * lv / (spec.tau - 1)


class MesEnv:
    """Week-long episodes over a fixed scenario.

    reset(seed) -> normalized observation (ndarray, shape (6,))
    step(a_norm) -> (observation, reward, done)

    ``a_norm`` is the normalized action vector; the env maps it to asset
    units, projects it, and advances the plant.  Rewards are raw (no
    scaling) so different agents see identical numbers.
    """

    def __init__(
        self, cfg: MesConfig, scenario: Scenario, spec: EnvSpec | None = None
    ):
        self.cfg = cfg
        self.scenario = scenario
        self.spec = spec if spec is not None else make_env_spec(cfg, scenario)
        if self.spec.case_label != cfg.case_label:
            raise ValueError("spec was built for a different case")
        self._rng = np.random.default_rng(0)
        self._state: SystemState | None = None
        self._t = 0
        self.last_loss = None  # LossTerms of the most recent step

    @property
    def state(self) -> SystemState | None:
        return self._state

    def seed(self, seed: int) -> None:
        self._rng = np.random.default_rng(seed)

    def reset(self, seed: int | None = None) -> np.ndarray:
        """Start a new episode: random week, random storage fill."""
        if seed is not None:
            self.seed(seed)
        last_start = self.scenario.n_steps - self.spec.episode_len - 1
        if last_start < 0:
            raise ValueError("scenario shorter than one episode")
        cursor = int(self._rng.integers(0, last_start + 1))
        lo, hi = SOC_RESET_RANGE
        fills = {
            a.id: float(self._rng.uniform(lo, hi)) for a in self.cfg.storages
        }
        return self.reset_at(cursor, fills)

    def reset_at(
        self, cursor: int, soc_frac: float | dict = 0.5
    ) -> np.ndarray:
        """Start an episode at a chosen cursor -- evaluation entry point."""
        if not 0 <= cursor <= self.scenario.n_steps - self.spec.episode_len - 1:
            raise ValueError(f"cursor {cursor} leaves no room for an episode")
        self._state = initial_state(self.cfg, self.scenario, cursor, soc_frac)
        self._t = 0
        return normalize_obs(self.spec, self._state.obs.as_array())

    def step(self, a_norm: np.ndarray) -> tuple[np.ndarray, float, bool]:
        if self._state is None:
            raise ProtocolError("reset() must be called before step()")
        if self._t >= self.spec.episode_len:
            raise ProtocolError("episode is done; reset() to start another")
        action = project_action(self.cfg, action_to_control(self.spec, a_norm))
        cur = self._state.cursor
        res = sim.step(
            self._state,
            action,
            self.scenario.frame(cur),
            self.cfg,
            self.scenario.frame(cur + 1) if cur + 1 < self.scenario.n_steps else None,
        )
        self._state = res.next
        self._t += 1
        self.last_loss = res.loss
        reward = step_reward(res.loss, self.spec.reward_weights)
        done = self._t >= self.spec.episode_len
        obs = normalize_obs(self.spec, self._state.obs.as_array())
        return obs, float(reward), done
