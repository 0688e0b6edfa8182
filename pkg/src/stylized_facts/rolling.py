"""Sliding-window indicators: moments, decay exponents and tau0 per window."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dependence import abs_power_autocorr, fit_decay
from .errors import DegenerateSeries, InputError, InsufficientData
from .leverage import DetectionConfig, leverage_profile
from .series import ReturnSeries, moments


@dataclass(frozen=True)
class WindowSpec:
    window_len: int = 1600
    step: int = 200

    def __post_init__(self):
        if not 0 < self.step <= self.window_len:
            raise InputError(f"need 0 < step <= window_len, got {self.step}, {self.window_len}")

    def count(self, n):
        return (n - self.window_len) // self.step + 1 if n >= self.window_len else 0


@dataclass(frozen=True)
class AnalysisConfig:
    fit_range: tuple = (1, 30)
    alphas: tuple = (1.0, 2.0)
    detection: DetectionConfig = field(default_factory=lambda: DetectionConfig(max_lag=30))
    excess_kurtosis: bool = True
    bias: bool = True


@dataclass(frozen=True)
class WindowReport:
    start_time: float
    std_dev: float
    skewness: float
    kurtosis: float
    beta_alpha1: float | None
    beta_alpha2: float | None
    tau0: int
    present: bool = False
    flags: tuple = ()

    def as_dict(self):
        return {
            "start_time": self.start_time,
            "std": self.std_dev,
            "skew": self.skewness,
            "kurt": self.kurtosis,
            "beta1": self.beta_alpha1,
            "beta2": self.beta_alpha2,
            "tau0": self.tau0,
            "flags": ";".join(self.flags),
        }


def _beta(x, alpha, fit_range):
    try:
        corr = abs_power_autocorr(x, alpha, fit_range[1])
    except DegenerateSeries:
        return None, "fit_failed"
    try:
        return fit_decay(corr, fit_range).beta, None
    except InsufficientData:
        return None, "nonpositive_correlations"


def analyze_window(returns, config=None):
    """The single-window pipeline; :func:`run_windows` calls this per window."""
    config = config or AnalysisConfig()
    x = returns.values
    m = moments(x, excess=config.excess_kurtosis, bias=config.bias)
    betas, flags = {}, []
    for alpha in config.alphas:
        beta, reason = _beta(x, alpha, config.fit_range)
        betas[alpha] = beta
        if reason:
            flags.append(f"beta{alpha:g}:{reason}")
    prof = leverage_profile(x, config.detection, min_lag=0)
    if prof.diagnostic != "ok":
        flags.append(f"tau0:{prof.diagnostic}")
    return WindowReport(
        start_time=float(returns.start_time),
        std_dev=m.std_dev,
        skewness=m.skewness,
        kurtosis=m.kurtosis,
        beta_alpha1=betas.get(1.0),
        beta_alpha2=betas.get(2.0),
        tau0=prof.tau0,
        present=prof.present,
        flags=tuple(flags),
    )


def run_windows(returns, spec=None, config=None, n_jobs=1):
    """One report per full window at offsets 0, step, 2*step, ...

    The trailing partial window is dropped. Output order follows window
    position whatever ``n_jobs`` is.
    """
    spec = spec or WindowSpec()
    config = config or AnalysisConfig()
    if not isinstance(returns, ReturnSeries):
        returns = ReturnSeries(np.asarray(returns, dtype=float))
    n = len(returns)
    if n < spec.window_len:
        raise InsufficientData(f"series of length {n} shorter than one window ({spec.window_len})")
    starts = [i * spec.step for i in range(spec.count(n))]

    def one(s):
        return analyze_window(returns.slice(s, s + spec.window_len), config)

    if n_jobs == 1:
        return [one(s) for s in starts]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(one, starts))


_INDICATORS = ("std", "skew", "kurt", "beta1", "beta2", "tau0")


def regime_summary(reports, event_markers=()):
    """Indicator table plus before/after deltas around each event marker.

    A marker is matched to the last window starting at or before it and the
    first window starting after it. Markers outside the span of window
    starts are reported as out of range.
    """
    if not reports:
        raise InsufficientData("no window reports")
    rows = [r.as_dict() for r in reports]
    out = {"windows": rows}
    if not event_markers:
        return out
    starts = np.array([r.start_time for r in reports])
    events = []
    for ts, label in event_markers:
        ts = float(ts)
        entry = {"timestamp": ts, "label": label}
        if ts < starts[0] or ts >= starts[-1]:
            entry["status"] = "out_of_range"
            events.append(entry)
            continue
        i = int(np.searchsorted(starts, ts, side="right")) - 1
        before, after = rows[i], rows[i + 1]
        deltas = {}
        for key in _INDICATORS:
            a, b = before[key], after[key]
            deltas[key] = None if a is None or b is None else b - a
        entry.update(status="ok",
                     before={"index": i, "start_time": before["start_time"]},
                     after={"index": i + 1, "start_time": after["start_time"]},
                     deltas=deltas)
        events.append(entry)
    out["events"] = events
    return out


def _fmt(v):
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.4g}"
    return str(v)


def format_regime_summary(summary):
    cols = ("start_time",) + _INDICATORS
    lines = ["\t".join(cols)]
    for row in summary["windows"]:
        lines.append("\t".join(_fmt(row[c]) for c in cols))
    for ev in summary.get("events", ()):
        lines.append("")
        lines.append(f"event {ev['label']} at {ev['timestamp']:.0f}: {ev['status']}")
        if ev["status"] == "ok":
            lines.append("  " + "  ".join(f"d{k}={_fmt(v)}" for k, v in ev["deltas"].items()))
    return "\n".join(lines) + "\n"
