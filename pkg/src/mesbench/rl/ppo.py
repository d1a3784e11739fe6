"""Clipped-surrogate policy optimization.

One update cycle collects ``n_steps`` of experience (continuing episodes
across cycles, resetting when one ends), computes advantages with GAE,
then runs ``noptepochs`` passes of ``nminibatches`` shuffled minibatches.
Per minibatch the policy ascends

    mean min(ratio * A, clip(ratio, 1-eps, 1+eps) * A) + ent_coef * H

with advantages normalized to mean 0 / std 1 inside the minibatch, while
the value net descends mean (V - R)^2.  Both use Adam at the same learning
rate.  Rewards are scaled by a constant fixed at train start (measured
from one random-action warmup episode) so the Appendix-style learning
rates work at this plant's raw cost magnitudes; the scale is part of the
agent and travels with checkpoints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mesbench.rl.buffers import RolloutBuffer, gae
from mesbench.rl.env import MesEnv, levels_to_norm
from mesbench.rl.nets import (
    AdamState,
    MlpParams,
    adam_init,
    adam_step,
    mlp_forward,
    mlp_forward_cache,
    mlp_grad,
    mlp_init,
    params_from_flat,
)
from mesbench.rl.policies import GaussianHead, MultiDiscreteHead

HIDDEN = (64, 64)  # two hidden layers; tanh activations
ADV_EPS = 1e-8  # guard for the advantage std
WARMUP_SEED_OFFSET = 99991  # reward-scale rollout gets its own stream


class NumericalError(RuntimeError):
    """A training loss went non-finite."""


@dataclass(frozen=True)
class PpoHyper:
    """The eight knobs of the clipped-surrogate method."""

    gamma: float = 0.95
    learning_rate: float = 7.410e-4
    nminibatches: int = 2
    n_steps: int = 672
    ent_coef: float = 3.141e-3
    cliprange: float = 0.3
    noptepochs: int = 5
    lam: float = 0.95

    def __post_init__(self):
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError("gamma must be in (0, 1]")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("lambda must be in [0, 1]")
        if self.cliprange <= 0.0:
            raise ValueError("cliprange must be > 0")
        if self.learning_rate <= 0.0:
            raise ValueError("learning_rate must be > 0")
        if min(self.nminibatches, self.n_steps, self.noptepochs) < 1:
            raise ValueError("counts must be >= 1")
        if self.n_steps % self.nminibatches:
            raise ValueError("n_steps must divide into nminibatches")


#: tuned settings, one per benchmark case
PPO_SIMPLE = PpoHyper()
PPO_COMPLEX = PpoHyper(
    gamma=0.9,
    learning_rate=3.843e-4,
    nminibatches=2,
    n_steps=256,
    ent_coef=1.226e-6,
    cliprange=0.3,
    noptepochs=10,
    lam=0.8,
)


@dataclass
class PpoStats:
    """Diagnostics of one update cycle."""

    policy_loss: float
    value_loss: float
    entropy: float
    clip_fraction: float


class PpoAgent:
    """Actor-critic with a clipped surrogate; continuous or multi-discrete.

    The action head follows the env spec: a diagonal Gaussian with learned
    state-independent log-std for "box" mode, independent categoricals
    over tau levels per dimension for "multidiscrete".
    """

    algo = "ppo"

    def __init__(self, env_spec, hyper: PpoHyper, seed: int):
        self.spec = env_spec
        self.hyper = hyper
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        obs_dim = len(env_spec.obs_low)
        act_dim = env_spec.action_dim
        self.discrete = env_spec.action_mode == "multidiscrete"
        if self.discrete:
            self.head = MultiDiscreteHead(n_dims=act_dim, tau=env_spec.tau)
            out_dim = self.head.n_logits
        else:
            self.head = GaussianHead(log_std=np.zeros(act_dim))
            out_dim = act_dim
        self.policy = mlp_init((obs_dim,) + HIDDEN + (out_dim,), self.rng)
        self.value = mlp_init((obs_dim,) + HIDDEN + (1,), self.rng)
        pol_arrays = self.policy.flat()
        if not self.discrete:
            pol_arrays = pol_arrays + [self.head.log_std]
        self.opt_policy = adam_init(pol_arrays)
        self.opt_value = adam_init(self.value.flat())
        self.reward_scale: float | None = None
        self.env_steps = 0

    # ---------------------------------------------------------------- act
    def act(
        self, obs: np.ndarray, deterministic: bool = False
    ) -> tuple[np.ndarray, np.ndarray, float, float]:
        """(env action, stored action, logprob, value) for one observation.

        The env action is the normalized vector the environment consumes;
        the stored action is what the update needs (the raw Gaussian
        sample, or the level indices).
        """
        o = np.asarray(obs, dtype=np.float64)
        out = mlp_forward(self.policy, o)
        v = float(mlp_forward(self.value, o)[0])
        if self.discrete:
            logits = out[None, :]
            if deterministic:
                z = logits.reshape(1, self.head.n_dims, self.head.tau)
                levels = np.argmax(z, axis=-1)[0]
            else:
                levels = self.head.sample(logits, self.rng)[0]
            logp = float(self.head.log_prob(logits, levels[None, :])[0])
            return levels_to_norm(self.spec, levels), levels.astype(float), logp, v
        mean = out
        a = mean if deterministic else self.head.sample(mean, self.rng)
        logp = float(self.head.log_prob(mean[None, :], a[None, :])[0])
        return np.clip(a, -1.0, 1.0), a, logp, v

    # ------------------------------------------------------------- update
    def update(self, buf: RolloutBuffer, bootstrap: float) -> PpoStats:
        """One full pass of epochs x minibatches over a filled rollout."""
        if not buf.full:
            raise ValueError("rollout buffer is not full")
        h = self.hyper
        adv, returns = gae(
            buf.rewards, buf.values, buf.dones, bootstrap, h.gamma, h.lam
        )
        n = buf.capacity
        mb_size = n // h.nminibatches
        stats = PpoStats(0.0, 0.0, 0.0, 0.0)
        batches = 0
        for _ in range(h.noptepochs):
            order = self.rng.permutation(n)
            for start in range(0, n, mb_size):
                mb = order[start : start + mb_size]
                stats = self._minibatch_step(buf, adv, returns, mb)
                batches += 1
        return stats

    def _minibatch_step(
        self,
        buf: RolloutBuffer,
        adv: np.ndarray,
        returns: np.ndarray,
        mb: np.ndarray,
    ) -> PpoStats:
        h = self.hyper
        obs = buf.obs[mb]
        acts = buf.actions[mb]
        logp_old = buf.logprobs[mb]
        b = mb.size
        a_hat = adv[mb]
        a_hat = (a_hat - a_hat.mean()) / (a_hat.std() + ADV_EPS)

        out, cache = mlp_forward_cache(self.policy, obs)
        if self.discrete:
            levels = acts.astype(int)
            logp_new = self.head.log_prob(out, levels)
            entropy = float(np.mean(self.head.entropy(out)))
        else:
            logp_new = self.head.log_prob(out, acts)
            entropy = self.head.entropy()
        ratio = np.exp(logp_new - logp_old)
        unclipped = ratio * a_hat
        clipped = np.clip(ratio, 1.0 - h.cliprange, 1.0 + h.cliprange) * a_hat
        surrogate = float(np.mean(np.minimum(unclipped, clipped)))
        policy_loss = -(surrogate + h.ent_coef * entropy)

        # descent gradient: d(policy_loss)/d(logp_i), zero where the
        # pessimistic clip is active
        live = unclipped <= clipped
        d_logp = -(a_hat * ratio * live) / b

        if self.discrete:
            d_out = self.head.backward(out, levels, d_logp, -h.ent_coef / b)
            grads, _ = mlp_grad(self.policy, obs, d_out, cache)
            new = adam_step(
                self.policy.flat(), grads, self.opt_policy, h.learning_rate
            )
            self.policy = params_from_flat(new)
        else:
            d_mean, d_ls = self.head.backward(out, acts, d_logp, -h.ent_coef)
            grads, _ = mlp_grad(self.policy, obs, d_mean, cache)
            new = adam_step(
                self.policy.flat() + [self.head.log_std],
                grads + [d_ls],
                self.opt_policy,
                h.learning_rate,
            )
            self.policy = params_from_flat(new[:-1])
            self.head = GaussianHead(log_std=new[-1])

        v_out, v_cache = mlp_forward_cache(self.value, obs)
        v = v_out[:, 0]
        err = v - returns[mb]
        value_loss = float(np.mean(err * err))
        v_grads, _ = mlp_grad(
            self.value, obs, (2.0 * err / b)[:, None], v_cache
        )
        self.value = params_from_flat(
            adam_step(self.value.flat(), v_grads, self.opt_value, h.learning_rate)
        )

        if not (np.isfinite(policy_loss) and np.isfinite(value_loss)):
            raise NumericalError(
                f"non-finite loss (policy {policy_loss}, value {value_loss})"
            )
        clip_frac = float(np.mean(~live))
        return PpoStats(policy_loss, value_loss, entropy, clip_frac)

    # -------------------------------------------------------------- train
    def train(
        self,
        env: MesEnv,
        total_steps: int,
        env_seed: int = 0,
        callback=None,
    ) -> list[PpoStats]:
        """Run update cycles until at least ``total_steps`` env steps.

        ``callback(steps_done, agent)`` fires after every cycle.  The env
        is reseeded with ``env_seed``, so a (seed, hyper, env_seed) triple
        fixes the run exactly.
        """
        h = self.hyper
        if self.reward_scale is None:
            self.reward_scale = measure_reward_scale(
                env, self.seed + WARMUP_SEED_OFFSET
            )
        obs_dim = len(self.spec.obs_low)
        act_dim = self.spec.action_dim
        buf = RolloutBuffer(h.n_steps, obs_dim, act_dim)
        obs = env.reset(seed=env_seed)
        history: list[PpoStats] = []
        while self.env_steps < total_steps:
            buf.clear()
            while not buf.full:
                a_env, a_store, logp, v = self.act(obs)
                nxt, r, done = env.step(a_env)
                buf.add(obs, a_store, logp, r * self.reward_scale, v, done)
                self.env_steps += 1
                obs = env.reset() if done else nxt
            bootstrap = float(mlp_forward(self.value, obs)[0])
            history.append(self.update(buf, bootstrap))
            if callback is not None:
                callback(self.env_steps, self)
        return history


def measure_reward_scale(env: MesEnv, seed: int) -> float:
    """1 / mean |reward| over one random-action episode (seeded)."""
    rng = np.random.default_rng(seed)
    env.reset(seed=seed)
    total = 0.0
    n = env.spec.episode_len
    for _ in range(n):
        a = rng.uniform(-1.0, 1.0, env.spec.action_dim)
        _, r, done = env.step(a)
        total += abs(r)
        if done:
            break
    mean_abs = total / max(1, n)
    return 1.0 / max(mean_abs, 1e-12)
