"""Return/volatility cross-correlation and the critical leverage time tau0."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dependence import lagged_corr, permutation_bands
from .errors import InputError, InsufficientData


@dataclass(frozen=True)
class DetectionConfig:
    """How "clearly negative" and the scan range are decided.

    ``threshold`` is a positive magnitude (scalar, or one value per lag of
    ``0..lead_window``): the leverage effect needs ``L(tau) < -threshold``
    somewhere in the lead window. ``None`` means derive it from the
    ``percentile`` of the permutation null of the series.
    """

    lead_window: int = 3
    max_lag: int = 50
    threshold: object = None
    n_shuffles: int = 1000
    percentile: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.lead_window < 0:
            raise InputError("lead_window must be non-negative")
        if self.max_lag < 2:
            raise InputError("max_lag must be at least 2")
        if self.lead_window >= self.max_lag:
            raise InputError("lead_window must be smaller than max_lag")


class Tau0Estimate(NamedTuple):
    tau0: int
    present: bool
    diagnostic: str


@dataclass(frozen=True)
class LeverageProfile:
    lags: np.ndarray
    L: np.ndarray
    L_cum: np.ndarray
    tau0: int
    present: bool
    threshold_used: np.ndarray
    lead_window: int
    diagnostic: str = "ok"

    def summary(self):
        return {
            "tau0": int(self.tau0),
            "present": bool(self.present),
            "threshold_used": [float(v) for v in np.atleast_1d(self.threshold_used)],
            "lead_window": int(self.lead_window),
            "max_lag": int(self.lags[-1]),
            "diagnostic": self.diagnostic,
        }


def leverage_corr(x, lag_range=(-50, 50)):
    """``L(tau) = corr(x(t), x(t + tau)**2)`` for every tau in ``lag_range``.

    Negative tau pairs each return with squared returns from the past.
    """
    x = np.asarray(getattr(x, "values", x), dtype=float)
    tau_min, tau_max = (int(v) for v in lag_range)
    if tau_min > tau_max:
        raise InputError(f"invalid lag range {lag_range!r}")
    if x.size < abs(tau_min) + max(tau_max, 0) + 2:
        raise InsufficientData(f"series of length {x.size} too short for lags {lag_range!r}")
    lags = np.arange(tau_min, tau_max + 1)
    return lags, lagged_corr(x, x * x, lags)


def cumulative_leverage(L):
    """Running sum ``L_c(tau) = sum_{i <= tau} L(i)`` for L indexed from tau = 0."""
    return np.cumsum(np.asarray(L, dtype=float))


def estimate_tau0(L, detection=None, threshold=None):
    """Critical time of the leverage effect from ``L(0..tau_max)``.

    Present iff some ``L(tau)`` with ``tau <= lead_window`` is below
    ``-threshold`` and the first minimum of ``L_c`` is strictly inside
    ``(0, tau_max)``. Strict convexity of ``L_c`` is not required: pointwise
    noise breaks it even when the effect is plain. A minimum at ``tau_max``
    means the scan is too short and is reported as not detected.
    """
    L = np.asarray(L, dtype=float)
    tau_max = L.size - 1
    if tau_max < 2:
        raise InsufficientData("need L at lags 0..2 at least")
    detection = detection or DetectionConfig(lead_window=min(3, tau_max - 1), max_lag=tau_max)
    if threshold is None:
        threshold = detection.threshold if detection.threshold is not None else 0.0
    lead = L[: detection.lead_window + 1]
    thr = np.broadcast_to(np.asarray(threshold, dtype=float), lead.shape)
    negative = bool(np.any(lead < -thr))
    argmin = int(np.argmin(cumulative_leverage(L)))

    if not negative:
        return Tau0Estimate(0, False, "no_anticorrelation")
    if argmin == 0:
        return Tau0Estimate(0, False, "minimum_at_origin")
    if argmin == tau_max:
        return Tau0Estimate(0, False, "range_too_short")
    return Tau0Estimate(argmin, True, "ok")


def leverage_threshold(x, detection):
    """Per-lag magnitude ``-band_low`` of the permutation null over the lead window."""
    low, _ = permutation_bands(x, detection.lead_window, detection.n_shuffles,
                               (detection.percentile, 100.0 - detection.percentile),
                               detection.seed, statistic="leverage", min_lag=0)
    return -low


def leverage_profile(x, detection=None, min_lag=None):
    """L over ``min_lag..max_lag`` (default symmetric), L_c for lags >= 0, and tau0."""
    detection = detection or DetectionConfig()
    x = np.asarray(getattr(x, "values", x), dtype=float)
    tau_max = detection.max_lag
    if min_lag is None:
        min_lag = -tau_max
    lags, L = leverage_corr(x, (min(min_lag, 0), tau_max))
    forward = L[lags >= 0]
    if detection.threshold is None:
        thr = leverage_threshold(x, detection)
    else:
        thr = np.broadcast_to(np.asarray(detection.threshold, dtype=float),
                              (detection.lead_window + 1,)).copy()
    est = estimate_tau0(forward, detection, threshold=thr)
    keep = lags >= min_lag
    return LeverageProfile(
        lags=lags[keep],
        L=L[keep],
        L_cum=cumulative_leverage(forward),
        tau0=est.tau0,
        present=est.present,
        threshold_used=thr,
        lead_window=detection.lead_window,
        diagnostic=est.diagnostic,
    )
