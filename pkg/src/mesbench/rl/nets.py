"""Tiny feed-forward networks with exact reverse-mode gradients.

Everything an agent needs and nothing more: dense layers, tanh hidden
activations, a linear output, and Adam.  Parameters live in an immutable
``MlpParams`` snapshot; every update returns a new snapshot, so a frozen
policy can be handed to an evaluator while training continues.

Gradients are hand-derived (the backward pass mirrors the forward cache),
which keeps the package free of autodiff dependencies and makes the
finite-difference tests in the suite meaningful rather than circular.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ShapeError(ValueError):
    """Input or upstream gradient does not match the network's layout."""


@dataclass(frozen=True)
class MlpParams:
    """Weights of a dense tanh network (linear final layer).

    ``weights[k]`` has shape (n_in_k, n_out_k); ``biases[k]`` has shape
    (n_out_k,).  Hidden layers apply tanh, the last layer is affine.
    """

    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.weights) != len(self.biases) or not self.weights:
            raise ShapeError("need one bias vector per weight matrix")
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.ndim != 1 or w.shape[1] != b.size:
                raise ShapeError(f"layer {k}: W {w.shape} vs b {b.shape}")
            if k and self.weights[k - 1].shape[1] != w.shape[0]:
                raise ShapeError(f"layer {k - 1}->{k}: size mismatch")
        if not all(
            np.all(np.isfinite(a)) for a in (*self.weights, *self.biases)
        ):
            raise ValueError("non-finite parameter")

    @property
    def sizes(self) -> tuple[int, ...]:
        return (self.weights[0].shape[0],) + tuple(
            w.shape[1] for w in self.weights
        )

    def flat(self) -> list[np.ndarray]:
        """Parameter arrays in a fixed order (weights then bias per layer)."""
        out: list[np.ndarray] = []
        for w, b in zip(self.weights, self.biases):
            out.append(w)
            out.append(b)
        return out


def params_from_flat(arrays: list[np.ndarray]) -> MlpParams:
    """Inverse of :meth:`MlpParams.flat`."""
    return MlpParams(
        weights=tuple(arrays[0::2]), biases=tuple(arrays[1::2])
    )


def mlp_init(sizes: tuple[int, ...], rng: np.random.Generator) -> MlpParams:
    """Orthogonal-ish init: scaled Gaussians, zero biases.

    Scale 1/sqrt(n_in) keeps tanh pre-activations O(1) at any width.
    """
    if len(sizes) < 2 or any(s < 1 for s in sizes):
        raise ShapeError(f"bad layer sizes {sizes}")
    ws, bs = [], []
    for n_in, n_out in zip(sizes[:-1], sizes[1:]):
        ws.append(rng.standard_normal((n_in, n_out)) / np.sqrt(n_in))
        bs.append(np.zeros(n_out))
    return MlpParams(weights=tuple(ws), biases=tuple(bs))


def _as_batch(x: np.ndarray, n_in: int) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        if x.size != n_in:
            raise ShapeError(f"input size {x.size}, expected {n_in}")
        return x[None, :], True
    if x.ndim != 2 or x.shape[1] != n_in:
        raise ShapeError(f"input shape {x.shape}, expected (*, {n_in})")
    return x, False


def mlp_forward(p: MlpParams, x: np.ndarray) -> np.ndarray:
    """y = W_L(tanh(... tanh(W_0 x + b_0) ...)) + b_L.

    Accepts a single input vector or a (batch, n_in) matrix and returns
    the matching shape.
    """
    h, squeeze = _as_batch(x, p.weights[0].shape[0])
    last = len(p.weights) - 1
    for k, (w, b) in enumerate(zip(p.weights, p.biases)):
        h = h @ w + b
        if k != last:
            h = np.tanh(h)
    return h[0] if squeeze else h


def mlp_forward_cache(
    p: MlpParams, x: np.ndarray
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Forward pass keeping each layer's *input* for the backward pass."""
    h, _ = _as_batch(x, p.weights[0].shape[0])
    cache = [h]
    last = len(p.weights) - 1
    for k, (w, b) in enumerate(zip(p.weights, p.biases)):
        h = h @ w + b
        if k != last:
            h = np.tanh(h)
        cache.append(h)
    return h, cache


def mlp_grad(
    p: MlpParams,
    x: np.ndarray,
    upstream: np.ndarray,
    cache: list[np.ndarray] | None = None,
) -> tuple[list[np.ndarray], np.ndarray]:
    """Reverse-mode gradients of sum(upstream * y) w.r.t. params and x.

    Returns (grads, dx) with ``grads`` ordered like :meth:`MlpParams.flat`.
    ``upstream`` is dL/dy, one row per batch row; gradients are summed over
    the batch (callers divide by the batch size when they mean an average).
    """
    xb, _ = _as_batch(x, p.weights[0].shape[0])
    g, _ = _as_batch(upstream, p.weights[-1].shape[1])
    if g.shape[0] != xb.shape[0]:
        raise ShapeError(
            f"upstream batch {g.shape[0]} != input batch {xb.shape[0]}"
        )
    if cache is None:
        _, cache = mlp_forward_cache(p, xb)
    n = len(p.weights)
    grads: list[np.ndarray] = [np.empty(0)] * (2 * n)
    for k in range(n - 1, -1, -1):
        a_in = cache[k]  # input to layer k (post-tanh of k-1)
        grads[2 * k] = a_in.T @ g
        grads[2 * k + 1] = g.sum(axis=0)
        g = g @ p.weights[k].T
        if k:
            g = g * (1.0 - a_in * a_in)  # through the tanh of layer k-1
    return grads, g


@dataclass
class AdamState:
    """First/second moment accumulators, one pair per parameter array."""

    m: list[np.ndarray]
    v: list[np.ndarray]
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


def adam_init(params: list[np.ndarray]) -> AdamState:
    return AdamState(
        m=[np.zeros_like(a) for a in params],
        v=[np.zeros_like(a) for a in params],
    )


def adam_step(
    params: list[np.ndarray],
    grads: list[np.ndarray],
    state: AdamState,
    lr: float,
) -> list[np.ndarray]:
    """One Adam descent step; returns new arrays, mutates only ``state``."""
    if len(params) != len(grads):
        raise ShapeError("params/grads length mismatch")
    state.t += 1
    b1, b2 = state.beta1, state.beta2
    # bias-corrected step size, the usual reformulation
    a_t = lr * np.sqrt(1.0 - b2**state.t) / (1.0 - b1**state.t)
    out = []
    for i, (p_arr, g) in enumerate(zip(params, grads)):
        state.m[i] = b1 * state.m[i] + (1.0 - b1) * g
        state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g
        out.append(p_arr - a_t * state.m[i] / (np.sqrt(state.v[i]) + state.eps))
    return out
