"""Learning curves: train from scratch, evaluate frozen policies on a grid.

Evaluation is always the same three held-out weeks (45, 48, 51 of the
synthetic year), deterministic policy, storages starting half full -- so
any two points on any curve differ only by the parameters of the policy.
Curves start with the untrained point at step 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mesbench.data.scenario import make_scenario
from mesbench.model.presets import STEPS_PER_WEEK, case_config, with_default_weights
from mesbench.rl import (
    PPO_COMPLEX,
    PPO_SIMPLE,
    TD3_COMPLEX,
    TD3_SIMPLE,
    MesEnv,
    PpoAgent,
    Td3Agent,
    make_env_spec,
)

EVAL_WEEKS = (45, 48, 51)  # held-out week starts, by week index
EVAL_EPISODES = len(EVAL_WEEKS)


def case_hyper(agent_kind: str, case_label: str):
    """The tuned hyperparameters for (algorithm, case)."""
    table = {
        ("ppo", "simple"): PPO_SIMPLE,
        ("ppo", "complex"): PPO_COMPLEX,
        ("td3", "simple"): TD3_SIMPLE,
        ("td3", "complex"): TD3_COMPLEX,
    }
    try:
        return table[(agent_kind, case_label)]
    except KeyError:
        raise ValueError(
            f"unknown agent/case pair ({agent_kind!r}, {case_label!r})"
        ) from None


def case_action_mode(agent_kind: str, case_label: str) -> str:
    """Continuous everywhere except the discrete-action complex-case PPO."""
    if agent_kind == "ppo" and case_label == "complex":
        return "multidiscrete"
    return "box"


def make_agent(agent_kind: str, env_spec, seed: int, hyper=None):
    if hyper is None:
        hyper = case_hyper(agent_kind, env_spec.case_label)
    if agent_kind == "ppo":
        return PpoAgent(env_spec, hyper, seed)
    if agent_kind == "td3":
        return Td3Agent(env_spec, hyper, seed)
    raise ValueError(f"unknown agent kind {agent_kind!r}")


def evaluate_policy(agent, env: MesEnv, week_starts=None) -> float:
    """Mean deterministic-policy return over the fixed evaluation weeks."""
    if week_starts is None:
        week_starts = [w * STEPS_PER_WEEK for w in EVAL_WEEKS]
    total = 0.0
    for w0 in week_starts:
        obs = env.reset_at(w0, 0.5)
        ep = 0.0
        done = False
        while not done:
            out = agent.act(obs, deterministic=True)
            a = out[0] if isinstance(out, tuple) else out
            obs, r, done = env.step(a)
            ep += r
        total += ep
    return total / len(week_starts)


@dataclass(frozen=True)
class LearningCurve:
    """Evaluation returns on the eval grid, one row per grid point."""

    agent_kind: str
    case_label: str
    steps: tuple[int, ...]  # 0, eval_every, 2*eval_every, ...
    returns: tuple[tuple[float, ...], ...]  # [seed][grid point]
    seeds: tuple[int, ...]

    def mean(self) -> np.ndarray:
        return np.mean(self.returns, axis=0)

    def std(self) -> np.ndarray:
        return np.std(self.returns, axis=0)


def train_with_curve(
    agent_kind: str,
    case_label: str,
    budget_steps: int,
    eval_every: int,
    seed: int,
    scenario_seed: int = 0,
    hyper=None,
    tau: int = 5,
):
    """One seed trained from scratch, evaluated on the step grid.

    Returns ``(steps, returns, agent)``: the grid 0, eval_every, ...,
    the deterministic-policy return at each point, and the trained agent.
    A zero budget yields the single untrained point.  Evaluation points
    land on the nominal grid k*eval_every even when an update cycle
    overshoots the boundary, so curves from different seeds line up.
    """
    if budget_steps < 0 or (budget_steps > 0 and eval_every < 1):
        raise ValueError("need budget_steps >= 0 and eval_every >= 1")
    cfg = case_config(case_label)
    scenario = make_scenario(scenario_seed, cfg.grid, case_label)
    cfg = with_default_weights(cfg, scenario.x_el.values)
    spec = make_env_spec(
        cfg, scenario, case_action_mode(agent_kind, case_label), tau
    )
    grid = list(range(0, budget_steps + 1, eval_every)) if budget_steps else [0]

    agent = make_agent(agent_kind, spec, seed, hyper)
    eval_env = MesEnv(cfg, scenario, spec)
    points = {0: evaluate_policy(agent, eval_env)}

    def on_cycle(steps_done: int, ag):
        k = len(points)  # next grid index to fill
        while k < len(grid) and steps_done >= grid[k]:
            points[grid[k]] = evaluate_policy(ag, eval_env)
            k += 1

    if budget_steps > 0:
        train_env = MesEnv(cfg, scenario, spec)
        agent.train(train_env, budget_steps, env_seed=seed, callback=on_cycle)
        # a final partial cycle may have stopped short of the last point
        on_cycle(agent.env_steps, agent)
    return tuple(grid), tuple(points[g] for g in grid), agent


def learning_curve(
    agent_kind: str,
    case_label: str,
    budget_steps: int,
    eval_every: int,
    seeds: tuple[int, ...] = (0, 1, 2),
    scenario_seed: int = 0,
    hyper=None,
    tau: int = 5,
) -> LearningCurve:
    """Train per seed, evaluating every ``eval_every`` steps (plus step 0)."""
    grid: tuple[int, ...] = ()
    all_returns = []
    for seed in seeds:
        grid, returns, _ = train_with_curve(
            agent_kind, case_label, budget_steps, eval_every, seed,
            scenario_seed=scenario_seed, hyper=hyper, tau=tau,
        )
        all_returns.append(returns)
    return LearningCurve(
        agent_kind=agent_kind,
        case_label=case_label,
        steps=tuple(grid),
        returns=tuple(all_returns),
        seeds=tuple(seeds),
    )


def curve_csv(curve: LearningCurve) -> str:
    """step, one column per seed, mean, std."""
    cols = ",".join(f"seed{s}" for s in curve.seeds)
    lines = [f"step,{cols},mean,std"]
    means, stds = curve.mean(), curve.std()
    for i, step in enumerate(curve.steps):
        vals = ",".join(repr(curve.returns[j][i]) for j in range(len(curve.seeds)))
        lines.append(f"{step},{vals},{float(means[i])!r},{float(stds[i])!r}")
    return "\n".join(lines) + "\n"
