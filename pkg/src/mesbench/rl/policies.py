"""Stochastic policy heads and exploration noise.

Three ways of turning a network output into an action:

* GaussianPolicy -- diagonal Gaussian over a continuous box, mean from the
  network, state-independent learned log-std.  Used by the continuous PPO.
* MultiDiscretePolicy -- one categorical per action dimension over tau
  evenly spaced levels, logits from a single network.  Used by the
  discrete PPO.
* OUNoise / normal noise -- additive exploration for the deterministic
  TD3 actor.

Each head knows its own log-probability, entropy, and the backward pass
from d(loss)/d(logprob) and d(loss)/d(entropy) to gradients on the network
output (and, for the Gaussian, on the log-std vector).  Keeping calculus
local to the head is what lets the agents stay short.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

LOG_2PI = float(np.log(2.0 * np.pi))

# learned log-std is clamped to keep the ratio/entropy arithmetic finite
LOG_STD_MIN = -8.0
LOG_STD_MAX = 3.0


@dataclass(frozen=True)
class GaussianHead:
    """State-independent log-std vector alongside a mean network."""

    log_std: np.ndarray  # shape (act_dim,)

    def clamped(self) -> np.ndarray:
        return np.clip(self.log_std, LOG_STD_MIN, LOG_STD_MAX)

    def sample(self, mean: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        return mean + np.exp(self.clamped()) * rng.standard_normal(mean.shape)

    def log_prob(self, mean: np.ndarray, a: np.ndarray) -> np.ndarray:
        """Row-wise log N(a; mean, diag(exp(2*log_std)))."""
        ls = self.clamped()
        z = (a - mean) / np.exp(ls)
        return -0.5 * np.sum(z * z + 2.0 * ls + LOG_2PI, axis=-1)

    def entropy(self) -> float:
        """Differential entropy, same for every state."""
        return float(np.sum(self.clamped() + 0.5 * (1.0 + LOG_2PI)))

    def backward(
        self,
        mean: np.ndarray,
        a: np.ndarray,
        d_logp: np.ndarray,
        d_entropy: float,
    ) -> tuple[np.ndarray, np.ndarray]:
        """Gradients (d_mean, d_log_std) of sum(d_logp*logp) + d_entropy*H."""
        ls = self.clamped()
        inv_var = np.exp(-2.0 * ls)
        diff = a - mean
        d_mean = d_logp[:, None] * diff * inv_var
        d_ls = np.sum(
            d_logp[:, None] * (diff * diff * inv_var - 1.0), axis=0
        )
        d_ls = d_ls + d_entropy  # dH/d log_std_j = 1
        # gradient vanishes where the clamp is active
        live = (self.log_std > LOG_STD_MIN) & (self.log_std < LOG_STD_MAX)
        return d_mean, np.where(live, d_ls, 0.0)


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - np.max(z, axis=-1, keepdims=True)
    e = np.exp(z)
    return e / np.sum(e, axis=-1, keepdims=True)


@dataclass(frozen=True)
class MultiDiscreteHead:
    """n_dims independent categoricals over tau levels each.

    The network emits n_dims*tau logits, laid out dimension-major.
    """

    n_dims: int
    tau: int

    @property
    def n_logits(self) -> int:
        return self.n_dims * self.tau

    def _split(self, logits: np.ndarray) -> np.ndarray:
        b = logits.shape[0]
        if logits.shape[-1] != self.n_logits:
            raise ValueError(
                f"expected {self.n_logits} logits, got {logits.shape[-1]}"
            )
        return logits.reshape(b, self.n_dims, self.tau)

    def sample(
        self, logits: np.ndarray, rng: np.random.Generator
    ) -> np.ndarray:
        """Level indices, shape (batch, n_dims)."""
        p = softmax(self._split(logits))
        cdf = np.cumsum(p, axis=-1)
        u = rng.random(p.shape[:-1])[..., None]
        return np.sum(u > cdf, axis=-1)

    def log_prob(self, logits: np.ndarray, levels: np.ndarray) -> np.ndarray:
        z = self._split(logits)
        logp = z - np.log(
            np.sum(np.exp(z - np.max(z, -1, keepdims=True)), -1, keepdims=True)
        ) - np.max(z, -1, keepdims=True)
        idx = np.asarray(levels, dtype=int)
        picked = np.take_along_axis(logp, idx[..., None], axis=-1)[..., 0]
        return np.sum(picked, axis=-1)

    def entropy(self, logits: np.ndarray) -> np.ndarray:
        p = softmax(self._split(logits))
        logp = np.log(np.maximum(p, 1e-300))
        return -np.sum(p * logp, axis=(-2, -1))

    def backward(
        self,
        logits: np.ndarray,
        levels: np.ndarray,
        d_logp: np.ndarray,
        d_entropy: np.ndarray | float,
    ) -> np.ndarray:
        """Gradient on the logits of sum(d_logp*logp + d_entropy*H)."""
        z = self._split(logits)
        p = softmax(z)
        idx = np.asarray(levels, dtype=int)
        onehot = np.zeros_like(p)
        np.put_along_axis(onehot, idx[..., None], 1.0, axis=-1)
        g = (onehot - p) * np.asarray(d_logp)[:, None, None]
        logp = np.log(np.maximum(p, 1e-300))
        h_dim = -np.sum(p * logp, axis=-1, keepdims=True)
        dH = -p * (logp + h_dim)
        g = g + dH * np.broadcast_to(
            np.asarray(d_entropy, dtype=float).reshape(-1, 1, 1), p.shape
        )
        return g.reshape(logits.shape)


@dataclass
class OUNoise:
    """Ornstein-Uhlenbeck process x' = x + theta*(mu - x)*dt + sigma*sqrt(dt)*N.

    Temporally correlated exploration; theta=0.15, mu=0, dt=1 with sigma
    from the agent's hyperparameters.
    """

    sigma: float
    dim: int
    theta: float = 0.15
    mu: float = 0.0
    dt: float = 1.0
    x: np.ndarray = field(init=False)

    def __post_init__(self):
        self.x = np.full(self.dim, self.mu, dtype=np.float64)

    def reset(self) -> None:
        self.x = np.full(self.dim, self.mu, dtype=np.float64)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        self.x = (
            self.x
            + self.theta * (self.mu - self.x) * self.dt
            + self.sigma * np.sqrt(self.dt) * rng.standard_normal(self.dim)
        )
        return self.x.copy()
