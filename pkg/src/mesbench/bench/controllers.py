"""Controller adapters: one per-step interface for every contender.

A controller sees the plant state and returns a raw action; the benchmark
projects it and advances the plant.  Four kinds compete: the two
receding-horizon planners (perfect and realistic foresight), trained
agents evaluated deterministically, and the do-nothing / uniform-random
baselines.  Wrapping the planner behind the same act() face as the agents
is what makes per-step wall-time comparisons meaningful: each controller
is timed around exactly one call per simulated step.
"""

from __future__ import annotations

import numpy as np

from mesbench.data.scenario import Scenario
from mesbench.model.actions import controllable_channels
from mesbench.model.types import ControlAction, MesConfig, SystemState
from mesbench.mpc import MpcConfig, plan_horizon
from mesbench.mpc.runner import _forecast_window
from mesbench.rl.env import EnvSpec, action_to_control, normalize_obs


class ZeroController:
    """Emits all-zero setpoints; storages idle, converters off.

    In the simple case the plant's internal heat-following boiler still
    covers thermal demand, so "zero" is a meaningful passive baseline.
    """

    name = "zero"

    def reset(self, cfg: MesConfig, scenario: Scenario) -> None:
        self._action = ControlAction(setpoints={})

    def act(self, state: SystemState) -> ControlAction:
        return self._action


class RandomController:
    """Uniform random setpoints over each channel's normalized box."""

    name = "random"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def reset(self, cfg: MesConfig, scenario: Scenario) -> None:
        self._rng = np.random.default_rng(self.seed)
        self._channels = controllable_channels(cfg)

    def act(self, state: SystemState) -> ControlAction:
        sp = {}
        for ch in self._channels:
            u = self._rng.uniform(-1.0, 1.0)
            if ch.kind == "storage":
                sp[ch.key] = u * ch.p_max
            else:
                sp[ch.key] = 0.5 * (u + 1.0) * ch.p_max
        return ControlAction(setpoints=sp)


class AgentController:
    """A frozen policy evaluated deterministically."""

    def __init__(self, agent, name: str | None = None):
        self.agent = agent
        self.spec: EnvSpec = agent.spec
        self.name = name if name is not None else agent.algo

    def reset(self, cfg: MesConfig, scenario: Scenario) -> None:
        if cfg.case_label != self.spec.case_label:
            raise ValueError(
                f"agent trained on {self.spec.case_label!r}, "
                f"benchmark runs {cfg.case_label!r}"
            )

    def act(self, state: SystemState) -> ControlAction:
        obs = normalize_obs(self.spec, state.obs.as_array())
        out = self.agent.act(obs, deterministic=True)
        a_env = out[0] if isinstance(out, tuple) else out
        return action_to_control(self.spec, a_env)


class MpcController:
    """Receding-horizon planner behind the per-step interface.

    Plans ``c_steps`` ahead whenever its queue runs dry; act() pops one
    action per call.  The planning cost lands on the step that triggered
    it, which is exactly how a deployed planner would spend its time.
    """

    def __init__(self, mpc_cfg: MpcConfig, name: str):
        self.mpc_cfg = mpc_cfg
        self.name = name

    def reset(self, cfg: MesConfig, scenario: Scenario) -> None:
        self._cfg = cfg
        self._scenario = scenario
        self._queue: list[ControlAction] = []
        self.solve_walls: list[float] = []  # seconds per horizon solve

    def act(self, state: SystemState) -> ControlAction:
        if not self._queue:
            self._replan(state)
        return self._queue.pop(0)

    def _replan(self, state: SystemState) -> None:
        mc = self.mpc_cfg
        t0 = state.cursor
        forecasts = _forecast_window(self._scenario, mc, t0)
        plan = plan_horizon(
            self._cfg,
            forecasts,
            state,
            mc.n_steps,
            max_nodes=mc.max_nodes,
            gap_tol=mc.gap_tol,
            cursor=t0,
        )
        self._queue = list(plan.actions[: mc.c_steps])
        self.solve_walls.append(plan.solve_stats.wall_s)
