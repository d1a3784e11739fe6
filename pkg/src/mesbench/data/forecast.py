"""Forecast-error injection with calibrated Gaussian noise.

A forecast for step t is the realized value plus i.i.d. Gaussian noise
whose amplitude is ``sigma * mean(|series|)``, clipped at zero for
quantities that cannot go negative.  ``sigma`` is calibrated by bisection
until the year-long MAPE between series and noisy series hits the target
accuracy; wind and irradiance MAPEs exclude near-zero truth points (a
relative error against a value of ~0 is noise, not signal).

Calibration measures the same transform the live forecaster applies
(including the clip at zero), so the targets hold for the forecasts the
controller actually sees.  The per-draw noise is keyed by (seed, series
stream, window start), making every forecast reproducible.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from mesbench.data.metrics import mape, mape_excluding_zeros
from mesbench.data.timeseries import TimeSeries
from mesbench.model.types import TimeGrid

#: stable stream ids so different series never share a noise draw
_STREAMS = {
    "e_th_demand": 11,
    "e_el_demand": 12,
    "wind_speed": 13,
    "irradiance": 14,
    "x_el": 15,
}

#: (mape_target, r2_target, exclude_zeros) per series and case;
#: R² is a logged diagnostic -- one noise scale cannot pin both metrics.
_TARGETS = {
    "simple": {
        "e_el_demand": (0.04, 0.95, False),
        "e_th_demand": (0.09, 0.94, False),
        "x_el": (0.06, 0.86, False),
        "irradiance": (0.37, 0.69, True),
        "wind_speed": (0.25, 0.78, True),
    },
    "complex": {
        "e_el_demand": (0.12, 0.95, False),
        "e_th_demand": (0.08, 0.95, False),
        "x_el": (0.08, 0.85, False),
        "irradiance": (0.37, 0.70, True),
        "wind_speed": (0.36, 0.70, True),
    },
}

#: quantities that are physically non-negative (forecasts clipped at 0)
_NON_NEGATIVE = frozenset(
    {"e_th_demand", "e_el_demand", "wind_speed", "irradiance", "x_el"}
)

CALIBRATION_DRAWS = 16
CALIBRATION_BAND = 0.005
MAX_BISECT_STEPS = 64


class NoConvergenceError(RuntimeError):
    """Bisection could not hit the MAPE target within the step budget."""


class RangeError(IndexError):
    """Requested forecast window is outside the available data."""


@dataclass(frozen=True)
class ForecastSpec:
    """Calibrated noise model for one exogenous series."""

    name: str
    mape_target: float
    r2_target: float  # diagnostic only
    sigma: float  # noise amplitude as a fraction of mean |series|
    seed: int
    exclude_zeros: bool = False
    clip_at_zero: bool = True

    def __post_init__(self):
        if self.mape_target < 0:
            raise ValueError("mape_target must be >= 0")
        if not 0.0 < self.r2_target <= 1.0:
            raise ValueError("r2_target must be in (0, 1]")


def forecast_targets(case_label: str) -> dict[str, tuple[float, float, bool]]:
    """(mape_target, r2_target, exclude_zeros) per series for a case."""
    try:
        return dict(_TARGETS[case_label])
    except KeyError:
        raise ValueError(f"unknown case label {case_label!r}") from None


def _noisy(values: np.ndarray, amp: float, noise: np.ndarray, clip: bool):
    out = values + amp * noise
    if clip:
        np.maximum(out, 0.0, out=out)
    return out


def _achieved_mape(
    values: np.ndarray,
    sigma: float,
    draws: np.ndarray,
    clip: bool,
    exclude_zeros: bool,
) -> float:
    amp = sigma * float(np.mean(np.abs(values)))
    measure = mape_excluding_zeros if exclude_zeros else mape
    total = 0.0
    for z in draws:
        total += measure(values, _noisy(values, amp, z, clip))
    return total / len(draws)


def calibrate_noise_sigma(
    series: TimeSeries,
    mape_target: float,
    seed: int,
    exclude_zeros: bool = False,
    clip_at_zero: bool = True,
) -> float:
    """Find sigma so the average MAPE over 16 seeded draws hits the target.

    The same 16 unit-normal draws are reused at every trial sigma, which
    makes the achieved MAPE exactly monotone in sigma and the bisection
    well-posed.  Raises NoConvergenceError if the +-0.005 band cannot be
    reached within 64 bisection steps.
    """
    if mape_target == 0.0:
        return 0.0
    values = series.values
    if float(np.mean(np.abs(values))) == 0.0:
        raise ValueError("cannot calibrate noise against an all-zero series")
    draws = np.stack(
        [
            np.random.default_rng([int(seed), 1000 + k]).standard_normal(values.size)
            for k in range(CALIBRATION_DRAWS)
        ]
    )

    def achieved(s: float) -> float:
        return _achieved_mape(values, s, draws, clip_at_zero, exclude_zeros)

    lo, hi = 0.0, 0.25
    for _ in range(40):
        if achieved(hi) >= mape_target:
            break
        hi *= 2.0
    else:
        raise NoConvergenceError(
            f"MAPE target {mape_target} unreachable (clipping saturates the error)"
        )
    for _ in range(MAX_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        got = achieved(mid)
        if abs(got - mape_target) <= CALIBRATION_BAND:
            return mid
        if got < mape_target:
            lo = mid
        else:
            hi = mid
    raise NoConvergenceError(
        f"no sigma within +-{CALIBRATION_BAND} of MAPE {mape_target} "
        f"after {MAX_BISECT_STEPS} bisection steps"
    )


def case_forecast_specs(
    case_label: str, series: dict[str, TimeSeries], seed: int
) -> dict[str, ForecastSpec]:
    """Calibrate one ForecastSpec per exogenous series of a case."""
    specs = {}
    for name, (mape_t, r2_t, excl) in forecast_targets(case_label).items():
        clip = name in _NON_NEGATIVE
        sigma = calibrate_noise_sigma(
            series[name], mape_t, seed, exclude_zeros=excl, clip_at_zero=clip
        )
        specs[name] = ForecastSpec(
            name=name,
            mape_target=mape_t,
            r2_target=r2_t,
            sigma=sigma,
            seed=seed,
            exclude_zeros=excl,
            clip_at_zero=clip,
        )
    return specs


def perfect_spec(name: str) -> ForecastSpec:
    """A sigma=0 spec: forecasts equal the realization."""
    return ForecastSpec(
        name=name, mape_target=0.0, r2_target=1.0, sigma=0.0, seed=0
    )


def make_forecast(
    series: TimeSeries, spec: ForecastSpec, t0: int, horizon: int
) -> TimeSeries:
    """Forecast ``horizon`` steps of ``series`` starting at index ``t0``.

    sigma == 0 returns the exact slice (perfect foresight).  Otherwise the
    window gets i.i.d. Gaussian noise seeded by (spec.seed, stream, t0) --
    calling twice with the same arguments returns the identical forecast.
    """
    if t0 < 0 or horizon < 0 or t0 + horizon > series.grid.n_steps:
        raise RangeError(
            f"window [{t0}, {t0 + horizon}) outside series of "
            f"{series.grid.n_steps} steps"
        )
    window = series.values[t0 : t0 + horizon].copy()
    if spec.sigma > 0.0:
        stream = _STREAMS.get(spec.name, 99)
        rng = np.random.default_rng([int(spec.seed), stream, int(t0)])
        amp = spec.sigma * float(np.mean(np.abs(series.values)))
        window = _noisy(window, amp, rng.standard_normal(horizon), spec.clip_at_zero)
    grid = TimeGrid(
        start_epoch=series.grid.timestamp(t0),
        n_steps=horizon,
        step_s=series.grid.step_s,
    )
    return TimeSeries(grid=grid, values=window, unit=series.unit)
