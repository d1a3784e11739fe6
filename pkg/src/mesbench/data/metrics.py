"""Forecast accuracy metrics.

R² = 1 − Σ(y−ŷ)² / Σ(y−ȳ)²  and  MAPE = mean(|y−ŷ| / max(eps, |y|)).

For quantities that are frequently exactly zero (irradiance at night, calm
wind), relative errors at near-zero truth are meaningless; those points are
dropped via ``mape_excluding_zeros``, which is why reported wind/irradiance
MAPEs look large.
"""

from __future__ import annotations

import numpy as np


class DegenerateError(ValueError):
    """R² is undefined for a constant reference series."""


def _pair(y, y_hat, min_len: int):
    a = np.asarray(y, dtype=np.float64)
    b = np.asarray(y_hat, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.size < min_len:
        raise ValueError(f"need at least {min_len} points, got {a.size}")
    return a, b


def r2_score(y, y_hat) -> float:
    """Coefficient of determination of ŷ against y."""
    a, b = _pair(y, y_hat, 2)
    ss_tot = float(np.sum((a - a.mean()) ** 2))
    if ss_tot == 0.0:
        raise DegenerateError("reference series is constant; R² undefined")
    ss_res = float(np.sum((a - b) ** 2))
    return 1.0 - ss_res / ss_tot


def mape(y, y_hat, eps: float = 1e-9) -> float:
    """Mean absolute percentage error with an eps-guarded denominator."""
    a, b = _pair(y, y_hat, 1)
    denom = np.maximum(eps, np.abs(a))
    return float(np.mean(np.abs(a - b) / denom))


def mape_excluding_zeros(
    y, y_hat, threshold_frac: float = 0.01, eps: float = 1e-9
) -> float:
    """MAPE over the points where |y| exceeds threshold_frac * max|y|."""
    a, b = _pair(y, y_hat, 1)
    cut = threshold_frac * float(np.max(np.abs(a)))
    keep = np.abs(a) > cut
    if not np.any(keep):
        raise ValueError("no points above the near-zero threshold")
    return mape(a[keep], b[keep], eps=eps)
