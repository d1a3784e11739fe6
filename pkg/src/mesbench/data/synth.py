"""Deterministic synthetic year: demands, weather and day-ahead prices.

The generator exists so the repository runs without any external data
drop.  Shapes are built from seasonal/weekly/daily sinusoids plus seeded
AR(1) noise:

* demands      -- seasonal swing, double-peaked day, weekend dip; scaled so
                  the annual peak hits 60% of the case's converter capacity
                  for that carrier.
* price        -- morning/evening double peak, weekend dip, AR(1) jitter.
* irradiance   -- season-dependent day length and amplitude, sin^2 daily
                  arc, slow cloud process; exactly 0 outside daylight.
* wind speed   -- seasonal + slight diurnal modulation with persistent
                  gust noise, floored at 0.

Every stream is seeded as default_rng([seed, stream_id]), so one seed pins
the whole scenario byte-for-byte.
"""

from __future__ import annotations

import numpy as np

from mesbench.data.timeseries import TimeSeries
from mesbench.model.presets import case_config
from mesbench.model.types import CONVERTER_KINDS, RENEWABLE_KINDS, Carrier, TimeGrid

_STREAMS = {"e_th": 1, "e_el": 2, "wind": 3, "irr": 4, "price": 5}

#: price construction constants, currency/Wh
_PRICE_BASE = 6.0e-5
_PRICE_FLOOR = 5.0e-6
_PRICE_CAP = 1.5e-4


def _ar1(rng: np.random.Generator, n: int, rho: float, std: float) -> np.ndarray:
    """Stationary AR(1) noise with the given marginal standard deviation."""
    innov_std = std * np.sqrt(1.0 - rho * rho)
    eps = rng.standard_normal(n)
    x = np.empty(n)
    x[0] = std * eps[0]
    for i in range(1, n):
        x[i] = rho * x[i - 1] + innov_std * eps[i]
    return x


def _carrier_capacity(case_label: str, carrier: Carrier) -> float:
    cfg = case_config(case_label)
    total = 0.0
    for a in cfg.assets:
        if a.kind in CONVERTER_KINDS or a.kind in RENEWABLE_KINDS:
            for c, p in a.outputs:
                if c is carrier:
                    total += p
    return total


def _time_axes(grid: TimeGrid):
    idx = np.arange(grid.n_steps)
    t = grid.start_epoch + idx * grid.step_s
    hour = (t / 3600.0) % 24.0
    doy = (t / 86400.0) % 365.0
    weekfrac = (t / (7 * 86400.0)) % 1.0
    return hour, doy, weekfrac


def synth_profiles(seed: int, grid: TimeGrid, case_label: str) -> dict[str, TimeSeries]:
    """Generate the five exogenous series for one case on one grid."""
    hour, doy, weekfrac = _time_axes(grid)
    n = grid.n_steps
    two_pi = 2.0 * np.pi

    def rng(name: str) -> np.random.Generator:
        return np.random.default_rng([int(seed), _STREAMS[name]])

    # --- thermal demand -------------------------------------------------
    seasonal = 1.0 + 0.75 * np.cos(two_pi * (doy - 20.0) / 365.0)
    daily = (
        1.0
        + 0.10 * np.sin(two_pi * (hour - 1.0) / 24.0)
        + 0.10 * np.sin(2 * two_pi * (hour - 4.5) / 24.0)
    )
    weekly = 1.0 + 0.03 * np.cos(two_pi * (weekfrac - 2.5 / 7.0))
    shape = seasonal * daily * weekly * (1.0 + _ar1(rng("e_th"), n, 0.97, 0.06))
    shape = np.maximum(shape, 0.05 * shape.max())
    e_th = shape * (0.6 * _carrier_capacity(case_label, Carrier.HEAT) / shape.max())

    # --- electrical demand ----------------------------------------------
    seasonal = 1.0 + 0.12 * np.cos(two_pi * (doy - 10.0) / 365.0)
    daily = (
        1.0
        + 0.20 * np.sin(two_pi * (hour - 9.5) / 24.0)
        + 0.13 * np.sin(2 * two_pi * (hour - 8.5) / 24.0)
    )
    weekly = 1.0 + 0.07 * np.cos(two_pi * (weekfrac - 2.5 / 7.0))
    shape = seasonal * daily * weekly * (1.0 + _ar1(rng("e_el"), n, 0.95, 0.05))
    shape = np.maximum(shape, 0.05 * shape.max())
    e_el = shape * (
        0.6 * _carrier_capacity(case_label, Carrier.ELECTRICITY) / shape.max()
    )

    # --- day-ahead price -------------------------------------------------
    seasonal = 1.0 + 0.10 * np.cos(two_pi * (doy - 5.0) / 365.0)
    daily = (
        1.0
        + 0.28 * np.sin(two_pi * (hour - 9.0) / 24.0)
        + 0.22 * np.sin(2 * two_pi * (hour - 7.75) / 24.0)
    )
    weekly = 1.0 + 0.06 * np.cos(two_pi * (weekfrac - 2.5 / 7.0))
    x_el = _PRICE_BASE * seasonal * daily * weekly + _ar1(
        rng("price"), n, 0.90, 0.8e-5
    )
    x_el = np.clip(x_el, _PRICE_FLOOR, _PRICE_CAP)

    # --- solar irradiance -------------------------------------------------
    season_angle = np.sin(two_pi * (doy - 81.0) / 365.0)
    day_len = 12.0 + 4.2 * season_angle  # h of daylight
    rise = 12.0 - 0.5 * day_len
    arc = np.sin(np.pi * np.clip((hour - rise) / day_len, 0.0, 1.0)) ** 2
    amp = 600.0 + 400.0 * season_angle  # clear-sky peak W/m²
    clouds = np.clip(0.65 + _ar1(rng("irr"), n, 0.985, 0.30), 0.15, 1.0)
    irr = np.maximum(arc * amp * clouds, 0.0)

    # --- wind speed --------------------------------------------------------
    level = 7.2 * (1.0 + 0.18 * np.cos(two_pi * doy / 365.0))
    diurnal = 1.0 + 0.08 * np.sin(two_pi * (hour - 14.0) / 24.0)
    wind = np.maximum(level * diurnal + _ar1(rng("wind"), n, 0.97, 2.4), 0.0)

    return {
        "e_th_demand": TimeSeries(grid, e_th, "W"),
        "e_el_demand": TimeSeries(grid, e_el, "W"),
        "wind_speed": TimeSeries(grid, wind, "m/s"),
        "irradiance": TimeSeries(grid, irr, "W/m2"),
        "x_el": TimeSeries(grid, x_el, "currency/Wh"),
    }
