"""Time-series container and CSV ingestion.

File format (documented in docs/formats.md): two columns, header
``timestamp,value[<unit>]``, ISO-8601 UTC timestamps, e.g.::

    timestamp,value[W]
    2018-01-01T00:00:00Z,413000.0
    2018-01-01T01:00:00Z,397250.0

Values are resampled onto the target grid by linear interpolation.  Gaps
larger than twice the typical source spacing abort the load rather than
silently bridging missing data.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from mesbench.model.types import TimeGrid


class ParseError(ValueError):
    """Malformed CSV: bad header, bad timestamp/value, too few rows."""


class GapError(ValueError):
    """Source data has a hole too large to interpolate across."""


class UnitError(ValueError):
    """The file declares a different unit than the caller expects."""


@dataclass(frozen=True)
class TimeSeries:
    """Values sampled on a uniform TimeGrid."""

    grid: TimeGrid
    values: np.ndarray  # float64, length grid.n_steps
    unit: str

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", v)
        if v.shape != (self.grid.n_steps,):
            raise ValueError(
                f"series length {v.shape} does not match grid ({self.grid.n_steps},)"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("series contains non-finite values")

    def slice(self, start: int, n: int) -> np.ndarray:
        """Raw value window [start, start+n) as an array view."""
        if start < 0 or start + n > self.grid.n_steps:
            raise IndexError(
                f"window [{start}, {start + n}) outside grid of {self.grid.n_steps}"
            )
        return self.values[start : start + n]


_HEADER_RE = re.compile(r"^value\[(?P<unit>[^\]]*)\]$")


def _parse_iso_utc(text: str) -> float:
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        stamp = datetime.fromisoformat(raw)
    except ValueError as exc:
        raise ParseError(f"bad ISO-8601 timestamp {text!r}") from exc
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return stamp.timestamp()


def load_timeseries_csv(path, expected_unit: str, grid: TimeGrid) -> TimeSeries:
    """Load a two-column CSV and resample it onto ``grid``.

    Raises ParseError on malformed content, UnitError when the header unit
    differs from ``expected_unit``, and GapError when the file has holes
    wider than two source intervals or does not cover the grid.
    """
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if not rows:
        raise ParseError(f"{path}: empty file")
    header = [c.strip() for c in rows[0]]
    if len(header) != 2 or header[0] != "timestamp":
        raise ParseError(f"{path}: expected header 'timestamp,value[<unit>]'")
    m = _HEADER_RE.match(header[1])
    if not m:
        raise ParseError(f"{path}: second column must be 'value[<unit>]'")
    unit = m.group("unit")
    if unit != expected_unit:
        raise UnitError(f"{path}: unit {unit!r} where {expected_unit!r} was expected")
    if len(rows) < 3:
        raise ParseError(f"{path}: need at least two data rows")

    times = np.empty(len(rows) - 1)
    vals = np.empty(len(rows) - 1)
    for i, row in enumerate(rows[1:]):
        if len(row) != 2:
            raise ParseError(f"{path}: row {i + 2} has {len(row)} columns")
        times[i] = _parse_iso_utc(row[0])
        try:
            vals[i] = float(row[1])
        except ValueError as exc:
            raise ParseError(f"{path}: row {i + 2}: bad value {row[1]!r}") from exc
    if not np.all(np.isfinite(vals)):
        raise ParseError(f"{path}: non-finite values")
    diffs = np.diff(times)
    if np.any(diffs <= 0):
        raise ParseError(f"{path}: timestamps must be strictly increasing")

    typical = float(np.median(diffs))
    worst = float(np.max(diffs))
    if worst > 2.0 * typical * (1.0 + 1e-9):
        hours = worst / 3600.0
        raise GapError(f"{path}: {hours:.2f} h gap exceeds 2 source intervals")

    targets = grid.start_epoch + grid.step_s * np.arange(grid.n_steps)
    if targets[0] < times[0] - 1e-6 or targets[-1] > times[-1] + 1e-6:
        raise GapError(
            f"{path}: file covers [{times[0]:.0f}, {times[-1]:.0f}] s but the grid "
            f"needs [{targets[0]:.0f}, {targets[-1]:.0f}] s"
        )
    resampled = np.interp(targets, times, vals)
    return TimeSeries(grid=grid, values=resampled, unit=expected_unit)


def write_timeseries_csv(path, series: TimeSeries) -> None:
    """Inverse of the loader; emits the grid's own sampling."""
    with open(path, "w", newline="") as fh:
        fh.write(f"timestamp,value[{series.unit}]\n")
        for i in range(series.grid.n_steps):
            stamp = datetime.fromtimestamp(series.grid.timestamp(i), tz=timezone.utc)
            fh.write(f"{stamp.isoformat().replace('+00:00', 'Z')},"
                     f"{format_float(series.values[i])}\n")


def format_float(x: float) -> str:
    """Shortest round-tripping decimal; keeps CSV output reproducible."""
    if x == math.floor(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(float(x))


def iso_utc(epoch: float) -> str:
    """ISO-8601 Zulu timestamp for CSV output."""
    stamp = datetime.fromtimestamp(epoch, tz=timezone.utc)
    return stamp.isoformat().replace("+00:00", "Z")
