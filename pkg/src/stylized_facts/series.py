"""Price and return containers, LOCF resampling, log returns and moments."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import ConfigError, DegenerateSeries, EmptyInput, InputError, InvalidPrice


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TickSeries:
    """Irregular trades, strictly increasing in time, all prices positive.

    Build it with :meth:`from_observations` when the raw feed may contain
    repeated timestamps or out-of-order rows.
    """

    timestamps: np.ndarray
    prices: np.ndarray
    volumes: np.ndarray | None = None
    source_label: str = ""

    def __post_init__(self):
        t = _frozen(self.timestamps)
        p = _frozen(self.prices)
        if t.ndim != 1 or t.shape != p.shape:
            raise InputError("timestamps and prices must be 1-D arrays of equal length")
        if t.size == 0:
            raise EmptyInput("tick series is empty")
        if np.any(np.diff(t) <= 0):
            raise InputError("tick timestamps must be strictly increasing")
        bad = np.flatnonzero(~(p > 0))
        if bad.size:
            raise InvalidPrice(f"non-positive price {p[bad[0]]!r} at index {bad[0]}")
        object.__setattr__(self, "timestamps", t)
        object.__setattr__(self, "prices", p)
        if self.volumes is not None:
            v = _frozen(self.volumes)
            if v.shape != t.shape:
                raise InputError("volumes must match timestamps in length")
            object.__setattr__(self, "volumes", v)

    @classmethod
    def from_observations(cls, timestamps, prices, volumes=None, source_label=""):
        """Sort by time (stable) and collapse duplicate timestamps to the last trade."""
        t = np.asarray(timestamps, dtype=float)
        p = np.asarray(prices, dtype=float)
        v = None if volumes is None else np.asarray(volumes, dtype=float)
        if t.size == 0:
            raise EmptyInput("tick series is empty")
        order = np.argsort(t, kind="stable")
        t, p = t[order], p[order]
        if v is not None:
            v = v[order]
        # last occurrence of each timestamp survives
        keep = np.ones(t.size, dtype=bool)
        keep[:-1] = t[1:] != t[:-1]
        if v is not None:
            v = v[keep]
        return cls(t[keep], p[keep], v, source_label)

    def __len__(self):
        return self.timestamps.size


@dataclass(frozen=True)
class PriceGrid:
    """Prices sampled on the regular grid ``times[0] + i * delta_t``."""

    times: np.ndarray
    prices: np.ndarray
    delta_t: float
    gap_count: int = 0
    max_gap: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "times", _frozen(self.times))
        object.__setattr__(self, "prices", _frozen(self.prices))

    def __len__(self):
        return self.times.size

    def __iter__(self):
        return iter(zip(self.times.tolist(), self.prices.tolist()))


@dataclass(frozen=True)
class ReturnSeries:
    """Log returns on a regular grid.

    ``start_time`` is the timestamp of the first return, i.e. the end of the
    first sampling interval.
    """

    values: np.ndarray
    delta_t: float = 1.0
    start_time: float = 0.0

    def __post_init__(self):
        v = _frozen(self.values)
        if v.ndim != 1:
            raise InputError("returns must be one-dimensional")
        if not np.all(np.isfinite(v)):
            raise InputError("returns must be finite")
        if not self.delta_t > 0:
            raise ConfigError(f"delta_t must be positive, got {self.delta_t!r}")
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size

    @property
    def times(self):
        return self.start_time + self.delta_t * np.arange(self.values.size)

    def slice(self, start, stop):
        return ReturnSeries(self.values[start:stop], self.delta_t,
                            self.start_time + start * self.delta_t)


@dataclass(frozen=True)
class NormalizedReturnSeries:
    values: np.ndarray
    mean_used: float
    sigma_used: float

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class MomentSummary:
    count: int
    mean: float
    std_dev: float
    skewness: float
    kurtosis: float
    excess: bool = True
    bias: bool = True

    @property
    def raw_kurtosis(self):
        return self.kurtosis + 3.0 if self.excess else self.kurtosis

    @property
    def excess_kurtosis(self):
        return self.kurtosis if self.excess else self.kurtosis - 3.0


def _values(x):
    if isinstance(x, (ReturnSeries, NormalizedReturnSeries)):
        return x.values
    return np.asarray(x, dtype=float)


def resample_locf(ticks, delta_t, origin=None, end=None, n_points=None):
    """Sample ticks on a regular grid, carrying the last trade price forward.

    The grid is ``origin + j * delta_t``. Grid instants before the first tick
    are dropped. Without ``end`` or ``n_points`` the grid stops at the first
    instant at or after the last tick. ``origin`` defaults to the first
    timestamp rounded up to a whole multiple of ``delta_t``.
    """
    if not isinstance(ticks, TickSeries):
        ticks = TickSeries.from_observations(*zip(*ticks)) if len(ticks) else None
    if ticks is None:
        raise EmptyInput("tick series is empty")
    if not delta_t > 0:
        raise ConfigError(f"delta_t must be positive, got {delta_t!r}")
    t, p = ticks.timestamps, ticks.prices
    t0, t1 = t[0], t[-1]
    if origin is None:
        origin = math.ceil(t0 / delta_t) * delta_t
    if origin > t0 + delta_t:
        raise ConfigError("origin must not be later than first tick + delta_t")

    j0 = max(0, math.ceil((t0 - origin) / delta_t))
    if n_points is not None:
        j1 = j0 + int(n_points) - 1
    elif end is not None:
        j1 = math.floor((end - origin) / delta_t)
    else:
        j1 = max(j0, math.ceil((t1 - origin) / delta_t))
    if j1 < j0:
        raise EmptyInput("resampling grid contains no points")
    grid = origin + delta_t * np.arange(j0, j1 + 1, dtype=float)
    idx = np.searchsorted(t, grid, side="right") - 1
    gaps = np.diff(t)
    return PriceGrid(
        times=grid,
        prices=p[idx],
        delta_t=float(delta_t),
        gap_count=int(np.count_nonzero(gaps > delta_t)),
        max_gap=float(gaps.max()) if gaps.size else 0.0,
    )


def log_returns(prices, delta_t=None, start_time=None):
    """``r[i] = ln p[i+1] - ln p[i]`` on a regular price grid.

    ``prices`` is a :class:`PriceGrid`, an ``(n, 2)`` array of
    ``(timestamp, price)`` rows, or a plain 1-D array of prices (then
    ``delta_t`` defaults to 1 and the first price sits at ``t = 0``).
    """
    if isinstance(prices, PriceGrid):
        times, p, delta_t = prices.times, prices.prices, prices.delta_t
    else:
        arr = np.asarray(prices, dtype=float)
        if arr.ndim == 2 and arr.shape[1] == 2:
            times, p = arr[:, 0], arr[:, 1]
            if times.size >= 2:
                steps = np.diff(times)
                if delta_t is None:
                    delta_t = float(steps[0])
                if not np.allclose(steps, delta_t, rtol=1e-9, atol=1e-9 * abs(delta_t)):
                    raise InputError("price grid is not regularly spaced")
        elif arr.ndim == 1:
            p = arr
            if delta_t is None:
                delta_t = 1.0
            times = delta_t * np.arange(p.size, dtype=float)
        else:
            raise InputError("prices must be 1-D or (n, 2) timestamp/price rows")
    if p.size < 2:
        raise EmptyInput("need at least two prices for a return")
    bad = np.flatnonzero(~(p > 0))
    if bad.size:
        raise InvalidPrice(f"non-positive price {p[bad[0]]!r} at index {bad[0]}")
    if start_time is None:
        start_time = float(times[1])
    return ReturnSeries(np.log(p[1:] / p[:-1]), float(delta_t), start_time)


def _sigma_or_raise(x):
    sigma = float(np.std(x))
    scale = float(np.max(np.abs(x))) if x.size else 0.0
    if not sigma > 1e-12 * scale or sigma == 0.0:
        raise DegenerateSeries("series has zero variance")
    return sigma


def normalize(returns):
    """Subtract the mean and divide by the population standard deviation."""
    x = _values(returns)
    if x.size < 2:
        raise EmptyInput("need at least two returns to normalize")
    mean = float(np.mean(x))
    sigma = _sigma_or_raise(x)
    return NormalizedReturnSeries((x - mean) / sigma, mean, sigma)


def moments(returns, excess=True, bias=True):
    """Mean, standard deviation, skewness and kurtosis.

    ``bias=True`` uses the 1/n population estimators throughout;
    ``bias=False`` switches to the ddof=1 standard deviation and the
    bias-corrected skewness and kurtosis. ``excess`` selects excess (normal = 0)
    versus raw (normal = 3) kurtosis.
    """
    x = _values(returns)
    if x.size < 4:
        raise EmptyInput("need at least four observations for moments")
    _sigma_or_raise(x)
    return MomentSummary(
        count=int(x.size),
        mean=float(np.mean(x)),
        std_dev=float(np.std(x, ddof=0 if bias else 1)),
        skewness=float(stats.skew(x, bias=bias)),
        kurtosis=float(stats.kurtosis(x, fisher=excess, bias=bias)),
        excess=excess,
        bias=bias,
    )
