"""Twin-delayed deterministic policy gradient.

Off-policy: a ring replay buffer collects (s, a, r, s', d); every
``train_freq`` environment steps the agent runs ``gradient_steps`` update
iterations.  Each iteration regresses both critics onto

    y = r + gamma * (1 - d) * min(Q1', Q2')            (targets)
    a' = clip(mu'(s') + clip(eps, -c, c), -1, 1),  eps ~ N(0, sigma_t)

and every ``policy_delay``-th iteration ascends Q1(s, mu(s)) on the actor
and moves the three target nets by the polyak rule targ <- rho*targ +
(1-rho)*main.  The actor bounds its output with a final tanh so the
deterministic action always lies in the normalized box; exploration adds
white or Ornstein-Uhlenbeck noise on top, clipped back into the box.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mesbench.rl.buffers import ReplayBuffer
from mesbench.rl.env import MesEnv
from mesbench.rl.nets import (
    MlpParams,
    adam_init,
    adam_step,
    mlp_forward,
    mlp_forward_cache,
    mlp_grad,
    mlp_init,
    params_from_flat,
)
from mesbench.rl.policies import OUNoise
from mesbench.rl.ppo import NumericalError, measure_reward_scale, HIDDEN

WARMUP_SEED_OFFSET = 99991

NOISE_NORMAL = "normal"
NOISE_OU = "ornstein_uhlenbeck"


@dataclass(frozen=True)
class Td3Hyper:
    """Knobs of the twin-critic method."""

    gamma: float = 0.9
    learning_rate: float = 7.551e-5
    batch_size: int = 24
    buffer_size: int = 100_000
    train_freq: int = 96
    gradient_steps: int = 100
    noise_type: str = NOISE_OU
    noise_std: float = 0.337  # exploration noise, normalized action units
    policy_delay: int = 2
    target_noise: float = 0.2  # sigma of target-action smoothing
    target_clip: float = 0.5  # c, clip bound on the smoothing draw
    polyak: float = 0.995  # rho
    learning_starts: int = 100  # uniform-random steps before the policy acts

    def __post_init__(self):
        if self.policy_delay < 1:
            raise ValueError("policy_delay must be >= 1")
        if not 0.0 < self.polyak < 1.0:
            raise ValueError("polyak must be in (0, 1)")
        if self.noise_type not in (NOISE_NORMAL, NOISE_OU):
            raise ValueError(f"unknown noise_type {self.noise_type!r}")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError("gamma must be in (0, 1]")
        if min(self.batch_size, self.buffer_size, self.train_freq) < 1:
            raise ValueError("counts must be >= 1")


#: tuned settings, one per benchmark case
TD3_SIMPLE = Td3Hyper()
TD3_COMPLEX = Td3Hyper(
    gamma=0.9,
    learning_rate=3.833e-4,
    batch_size=100,
    buffer_size=100_000,
    train_freq=2000,
    gradient_steps=2000,
    noise_type=NOISE_NORMAL,
    noise_std=0.329,
)


def td3_target(
    rewards: np.ndarray,
    dones: np.ndarray,
    next_obs: np.ndarray,
    actor_target: MlpParams,
    q1_target: MlpParams,
    q2_target: MlpParams,
    hyper: Td3Hyper,
    rng: np.random.Generator,
) -> np.ndarray:
    """Smoothed twin-minimum targets for a batch."""
    mu = np.tanh(mlp_forward(actor_target, next_obs))
    eps = np.clip(
        hyper.target_noise * rng.standard_normal(mu.shape),
        -hyper.target_clip,
        hyper.target_clip,
    )
    a_next = np.clip(mu + eps, -1.0, 1.0)
    qin = np.concatenate([next_obs, a_next], axis=1)
    q1 = mlp_forward(q1_target, qin)[:, 0]
    q2 = mlp_forward(q2_target, qin)[:, 0]
    return rewards + hyper.gamma * (1.0 - dones) * np.minimum(q1, q2)


def polyak_update(target: MlpParams, main: MlpParams, rho: float) -> MlpParams:
    """targ <- rho * targ + (1 - rho) * main, array by array."""
    mixed = [
        rho * t + (1.0 - rho) * m
        for t, m in zip(target.flat(), main.flat())
    ]
    return params_from_flat(mixed)


class Td3Agent:
    """Deterministic actor with twin critics and target networks."""

    algo = "td3"

    def __init__(self, env_spec, hyper: Td3Hyper, seed: int):
        if env_spec.action_mode != "box":
            raise ValueError("this method needs a continuous action space")
        self.spec = env_spec
        self.hyper = hyper
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        obs_dim = len(env_spec.obs_low)
        act_dim = env_spec.action_dim
        self.actor = mlp_init((obs_dim,) + HIDDEN + (act_dim,), self.rng)
        q_sizes = (obs_dim + act_dim,) + HIDDEN + (1,)
        self.q1 = mlp_init(q_sizes, self.rng)
        self.q2 = mlp_init(q_sizes, self.rng)
        self.actor_target = self.actor
        self.q1_target = self.q1
        self.q2_target = self.q2
        self.opt_actor = adam_init(self.actor.flat())
        self.opt_q1 = adam_init(self.q1.flat())
        self.opt_q2 = adam_init(self.q2.flat())
        if hyper.noise_type == NOISE_OU:
            self.noise = OUNoise(sigma=hyper.noise_std, dim=act_dim)
        else:
            self.noise = None
        self.buffer = ReplayBuffer(hyper.buffer_size, obs_dim, act_dim)
        self.reward_scale: float | None = None
        self.env_steps = 0

    # ---------------------------------------------------------------- act
    def act(self, obs: np.ndarray, deterministic: bool = True) -> np.ndarray:
        """Normalized action; tanh keeps the noiseless policy in the box."""
        o = np.asarray(obs, dtype=np.float64)
        a = np.tanh(mlp_forward(self.actor, o))
        if deterministic:
            return a
        if self.noise is not None:
            eps = self.noise.sample(self.rng)
        else:
            eps = self.hyper.noise_std * self.rng.standard_normal(a.shape)
        return np.clip(a + eps, -1.0, 1.0)

    # ------------------------------------------------------------- update
    def update(self) -> tuple[float, float]:
        """``gradient_steps`` iterations; returns last (critic, actor) loss."""
        h = self.hyper
        critic_loss = actor_loss = 0.0
        for j in range(h.gradient_steps):
            obs, acts, rews, nxt, dones = self.buffer.sample(
                h.batch_size, self.rng
            )
            y = td3_target(
                rews, dones, nxt,
                self.actor_target, self.q1_target, self.q2_target,
                h, self.rng,
            )
            qin = np.concatenate([obs, acts], axis=1)
            b = h.batch_size
            for which in ("q1", "q2"):
                net = getattr(self, which)
                opt = getattr(self, "opt_" + which)
                out, cache = mlp_forward_cache(net, qin)
                err = out[:, 0] - y
                loss = float(np.mean(err * err))
                grads, _ = mlp_grad(net, qin, (2.0 * err / b)[:, None], cache)
                setattr(
                    self,
                    which,
                    params_from_flat(
                        adam_step(net.flat(), grads, opt, h.learning_rate)
                    ),
                )
                critic_loss = loss
            if not np.isfinite(critic_loss):
                raise NumericalError(f"non-finite critic loss {critic_loss}")

            if j % h.policy_delay == 0:
                actor_loss = self._actor_step(obs)
                self.q1_target = polyak_update(self.q1_target, self.q1, h.polyak)
                self.q2_target = polyak_update(self.q2_target, self.q2, h.polyak)
                self.actor_target = polyak_update(
                    self.actor_target, self.actor, h.polyak
                )
        return critic_loss, actor_loss

    def _actor_step(self, obs: np.ndarray) -> float:
        """One ascent step on mean Q1(s, mu(s))."""
        h = self.hyper
        b = obs.shape[0]
        pre, cache = mlp_forward_cache(self.actor, obs)
        mu = np.tanh(pre)
        qin = np.concatenate([obs, mu], axis=1)
        q = mlp_forward(self.q1, qin)
        actor_loss = -float(np.mean(q))
        if not np.isfinite(actor_loss):
            raise NumericalError(f"non-finite actor loss {actor_loss}")
        # descent on -Q: upstream -1/b through the critic, take d/d(action)
        _, d_qin = mlp_grad(self.q1, qin, np.full((b, 1), -1.0 / b))
        d_mu = d_qin[:, obs.shape[1] :]
        d_pre = d_mu * (1.0 - mu * mu)  # through the output tanh
        grads, _ = mlp_grad(self.actor, obs, d_pre, cache)
        self.actor = params_from_flat(
            adam_step(self.actor.flat(), grads, self.opt_actor, h.learning_rate)
        )
        return actor_loss

    # -------------------------------------------------------------- train
    def train(
        self,
        env: MesEnv,
        total_steps: int,
        env_seed: int = 0,
        callback=None,
    ) -> list[tuple[float, float]]:
        """Interact and update until ``total_steps`` env steps have passed.

        The first ``learning_starts`` actions are uniform random; updates
        run every ``train_freq`` steps once a batch fits in the buffer.
        ``callback(steps_done, agent)`` fires after every update block.
        """
        h = self.hyper
        if self.reward_scale is None:
            self.reward_scale = measure_reward_scale(
                env, self.seed + WARMUP_SEED_OFFSET
            )
        obs = env.reset(seed=env_seed)
        if self.noise is not None:
            self.noise.reset()
        history: list[tuple[float, float]] = []
        while self.env_steps < total_steps:
            if self.env_steps < h.learning_starts:
                a = self.rng.uniform(-1.0, 1.0, self.spec.action_dim)
            else:
                a = self.act(obs, deterministic=False)
            nxt, r, done = env.step(a)
            self.buffer.add(obs, a, r * self.reward_scale, nxt, done)
            self.env_steps += 1
            if done:
                obs = env.reset()
                if self.noise is not None:
                    self.noise.reset()
            else:
                obs = nxt
            if (
                self.env_steps % h.train_freq == 0
                and len(self.buffer) >= h.batch_size
            ):
                history.append(self.update())
                if callback is not None:
                    callback(self.env_steps, self)
        return history
