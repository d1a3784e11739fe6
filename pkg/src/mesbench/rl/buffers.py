"""Experience containers: on-policy rollouts and an off-policy ring buffer."""

from __future__ import annotations

import numpy as np


class RolloutBuffer:
    """Fixed-capacity on-policy storage, filled once per update.

    Stores (obs, action, logprob, reward, value, done) per step.  Actions
    are whatever the policy samples (floats for the Gaussian head, level
    indices for the multi-discrete one).
    """

    def __init__(self, n_steps: int, obs_dim: int, act_dim: int):
        self.capacity = n_steps
        self.obs = np.zeros((n_steps, obs_dim))
        self.actions = np.zeros((n_steps, act_dim))
        self.logprobs = np.zeros(n_steps)
        self.rewards = np.zeros(n_steps)
        self.values = np.zeros(n_steps)
        self.dones = np.zeros(n_steps)
        self.ptr = 0

    @property
    def full(self) -> bool:
        return self.ptr >= self.capacity

    def add(self, obs, action, logprob, reward, value, done) -> None:
        if self.full:
            raise IndexError("rollout buffer is full")
        i = self.ptr
        self.obs[i] = obs
        self.actions[i] = action
        self.logprobs[i] = logprob
        self.rewards[i] = reward
        self.values[i] = value
        self.dones[i] = float(done)
        self.ptr += 1

    def clear(self) -> None:
        self.ptr = 0


class ReplayBuffer:
    """Ring buffer of (s, a, r, s', d) with uniform sampling.

    Once past capacity, the oldest entries are overwritten first.
    """

    def __init__(self, capacity: int, obs_dim: int, act_dim: int):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self.obs = np.zeros((capacity, obs_dim))
        self.actions = np.zeros((capacity, act_dim))
        self.rewards = np.zeros(capacity)
        self.next_obs = np.zeros((capacity, obs_dim))
        self.dones = np.zeros(capacity)
        self._next = 0
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def add(self, obs, action, reward, next_obs, done) -> None:
        i = self._next
        self.obs[i] = obs
        self.actions[i] = action
        self.rewards[i] = reward
        self.next_obs[i] = next_obs
        self.dones[i] = float(done)
        self._next = (i + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def sample(self, batch_size: int, rng: np.random.Generator):
        """Uniform with replacement over the stored entries."""
        if self._size == 0:
            raise IndexError("cannot sample from an empty buffer")
        idx = rng.integers(0, self._size, size=batch_size)
        return (
            self.obs[idx],
            self.actions[idx],
            self.rewards[idx],
            self.next_obs[idx],
            self.dones[idx],
        )


def gae(
    rewards: np.ndarray,
    values: np.ndarray,
    dones: np.ndarray,
    bootstrap: float,
    gamma: float,
    lam: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Generalized advantage estimation over one rollout.

    delta_t = r_t + gamma * V_{t+1} * (1 - d_t) - V_t, with V after the
    last step given by ``bootstrap``; advantages are the (gamma*lam)
    discounted sums of the deltas, cut at episode ends; returns are
    advantages + values.  With gamma = lam = 1 and zero values this is
    plain reward-to-go.
    """
    r = np.asarray(rewards, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    d = np.asarray(dones, dtype=np.float64)
    if not (r.shape == v.shape == d.shape):
        raise ValueError("rewards, values, dones must have equal length")
    n = r.size
    adv = np.zeros(n)
    next_v = float(bootstrap)
    running = 0.0
    for t in range(n - 1, -1, -1):
        cont = 1.0 - d[t]
        delta = r[t] + gamma * next_v * cont - v[t]
        running = delta + gamma * lam * cont * running
        adv[t] = running
        next_v = v[t]
    return adv, adv + v
