"""Lagged linear and rank autocorrelations, permutation bands, decay fits.

Every lag is an exact sample Pearson correlation between the two overlapping
slices ``x[:n - tau]`` and ``x[tau:]``, each with its own mean and variance.
The textbook ACF (one global mean, variance at lag 0) differs by O(tau / n)
and is not what is computed here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import fft, stats

from .errors import DegenerateSeries, InputError, InsufficientData


@dataclass(frozen=True)
class CorrelogramBundle:
    lags: np.ndarray
    values: np.ndarray
    band_low: np.ndarray | None = None
    band_high: np.ndarray | None = None
    p_values: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)

    def with_bands(self, band_low, band_high, **metadata):
        return CorrelogramBundle(self.lags, self.values, np.asarray(band_low),
                                 np.asarray(band_high), self.p_values,
                                 {**self.metadata, **metadata})

    def significant(self, level=0.05):
        """Boolean mask of significant lags.

        Uses the p-values when present, otherwise the permutation band.
        """
        if self.p_values is not None:
            return self.p_values < level
        if self.band_low is None:
            raise ValueError("correlogram has neither p-values nor bands")
        return (self.values < self.band_low) | (self.values > self.band_high)

    def at(self, lag):
        i = np.searchsorted(self.lags, lag)
        if i >= self.lags.size or self.lags[i] != lag:
            raise KeyError(lag)
        return float(self.values[i])


@dataclass(frozen=True)
class DecayFit:
    alpha: float
    beta: float
    beta_std_err: float
    fit_range: tuple
    amplitude: float = float("nan")
    excluded_lags: tuple = ()

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "beta_std_err": self.beta_std_err,
            "tau_lo": self.fit_range[0],
            "tau_hi": self.fit_range[1],
            "excluded_lags": list(self.excluded_lags),
        }


def _series(x, max_lag):
    x = np.asarray(getattr(x, "values", x), dtype=float)
    if x.ndim != 1:
        raise InputError("series must be one-dimensional")
    max_lag = int(max_lag)
    if max_lag < 1:
        raise InputError(f"max_lag must be at least 1, got {max_lag}")
    if x.size < max_lag + 2:
        raise InsufficientData(f"series of length {x.size} too short for max_lag={max_lag}")
    return x, max_lag


def _corr(a, b):
    a = a - a.mean()
    b = b - b.mean()
    saa = np.dot(a, a)
    sbb = np.dot(b, b)
    if saa == 0.0 or sbb == 0.0:
        raise DegenerateSeries("constant slice in lagged correlation")
    return float(np.clip(np.dot(a, b) / np.sqrt(saa * sbb), -1.0, 1.0))


def lagged_corr(x, y, lags):
    """``corr(x[t], y[t + tau])`` for each tau (negative tau allowed)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    out = np.empty(len(lags))
    for i, tau in enumerate(lags):
        tau = int(tau)
        if tau >= 0:
            out[i] = _corr(x[: n - tau], y[tau:])
        else:
            out[i] = _corr(x[-tau:], y[: n + tau])
    return out


def pearson_autocorr(x, max_lag):
    x, max_lag = _series(x, max_lag)
    lags = np.arange(1, max_lag + 1)
    return CorrelogramBundle(lags, lagged_corr(x, x, lags))


def abs_power_autocorr(x, alpha, max_lag):
    """Pearson autocorrelation of ``|x| ** alpha``."""
    if not alpha > 0:
        raise InputError(f"alpha must be positive, got {alpha!r}")
    x, max_lag = _series(x, max_lag)
    bundle = pearson_autocorr(np.abs(x) ** alpha, max_lag)
    return CorrelogramBundle(bundle.lags, bundle.values, metadata={"alpha": float(alpha)})


def spearman_autocorr(x, max_lag):
    """Lagged Spearman correlation with large-sample t-test p-values.

    Each slice is ranked separately with midranks for ties.
    """
    x, max_lag = _series(x, max_lag)
    n = x.size
    lags = np.arange(1, max_lag + 1)
    rho = np.empty(max_lag)
    for i, tau in enumerate(lags):
        rho[i] = _corr(stats.rankdata(x[: n - tau]), stats.rankdata(x[tau:]))
    df = n - lags - 2
    with np.errstate(divide="ignore"):
        t = rho * np.sqrt(df / np.maximum(1.0 - rho**2, 0.0))
    p = 2.0 * stats.t.sf(np.abs(t), df)
    return CorrelogramBundle(lags, rho, p_values=p)


# ---------------------------------------------------------------------------
# permutation null


# below this many lags, direct dot products beat one FFT cross-correlation
_DIRECT_MAX_LAGS = 16


def _batch_lagged_corr(X, Y, lags):
    """Row-wise ``corr(X[:, t], Y[:, t + tau])`` through FFT cross-sums.

    Agrees with :func:`lagged_corr` to rounding for well-scaled rows; callers
    standardize the rows first.
    """
    r, n = X.shape
    lags = np.asarray(lags, dtype=int)
    direct = lags.size <= _DIRECT_MAX_LAGS
    if not direct:
        nfft = fft.next_fast_len(2 * n - 1, real=True)
        cross = fft.irfft(np.conj(fft.rfft(X, nfft, axis=1)) * fft.rfft(Y, nfft, axis=1),
                          nfft, axis=1)
    XX, YY = X * X, Y * Y
    totals = [a.sum(axis=1) for a in (X, XX, Y, YY)]

    def window_sum(total, a, lo, hi):
        # rows of a summed over [lo, hi); only the short edges are touched
        return total - a[:, :lo].sum(axis=1) - a[:, hi:].sum(axis=1)

    out = np.empty((r, lags.size))
    for i, tau in enumerate(lags):
        m = n - abs(tau)
        if tau >= 0:
            xs = (0, m)
            ys = (tau, n)
        else:
            xs = (-tau, n)
            ys = (0, m)
        if direct:
            sxy = np.einsum("ij,ij->i", X[:, xs[0]:xs[1]], Y[:, ys[0]:ys[1]])
        else:
            sxy = cross[:, tau if tau >= 0 else nfft + tau]
        sx = window_sum(totals[0], X, *xs)
        sxx = window_sum(totals[1], XX, *xs)
        sy = window_sum(totals[2], Y, *ys)
        syy = window_sum(totals[3], YY, *ys)
        cov = sxy - sx * sy / m
        vx = sxx - sx * sx / m
        vy = syy - sy * sy / m
        with np.errstate(invalid="ignore", divide="ignore"):
            out[:, i] = cov / np.sqrt(vx * vy)
    return np.clip(out, -1.0, 1.0)


_STATISTICS = {
    "autocorr": lambda X: X,
    "leverage": lambda X: X * X,
}


def permutation_null(x, lags, n_shuffles=1000, seed=0, statistic="autocorr", chunk=100):
    """Lagged correlations of ``n_shuffles`` uniform random permutations of ``x``.

    ``statistic="autocorr"`` correlates the permuted series with itself,
    ``"leverage"`` correlates it with its own square. Realization ``i`` is
    drawn from the ``i``-th child of ``SeedSequence(seed)``, so the ensemble
    does not depend on chunking or execution order. Returns an array of
    shape ``(n_shuffles, len(lags))``.
    """
    x = np.asarray(getattr(x, "values", x), dtype=float)
    if statistic not in _STATISTICS:
        raise ValueError(f"unknown statistic {statistic!r}")
    n_shuffles = int(n_shuffles)
    if n_shuffles < 1:
        raise InputError("n_shuffles must be positive")
    sd = np.std(x)
    if sd == 0:
        raise DegenerateSeries("cannot build a permutation null for a constant series")
    if statistic == "autocorr":
        base = (x - x.mean()) / sd
    else:
        # scale only: the square must see the original origin
        base = x / sd
    children = np.random.SeedSequence(seed).spawn(n_shuffles)
    out = np.empty((n_shuffles, len(lags)))
    for lo in range(0, n_shuffles, chunk):
        hi = min(lo + chunk, n_shuffles)
        X = np.stack([np.random.Generator(np.random.PCG64(c)).permutation(base)
                      for c in children[lo:hi]])
        out[lo:hi] = _batch_lagged_corr(X, _STATISTICS[statistic](X), lags)
    return out


def permutation_bands(x, max_lag, n_shuffles=1000, percentiles=(1.0, 99.0), seed=0,
                      statistic="autocorr", min_lag=1):
    """Per-lag low/high percentiles of the permutation-null correlations."""
    if n_shuffles < 100:
        raise InputError(f"n_shuffles must be at least 100, got {n_shuffles}")
    lo_p, hi_p = percentiles
    if not 0 <= lo_p < hi_p <= 100:
        raise InputError(f"invalid percentiles {percentiles!r}")
    lags = np.arange(int(min_lag), int(max_lag) + 1)
    null = permutation_null(x, lags, n_shuffles, seed, statistic)
    return np.percentile(null, lo_p, axis=0), np.percentile(null, hi_p, axis=0)


def with_permutation_bands(bundle, x, n_shuffles=1000, percentiles=(1.0, 99.0), seed=0):
    """Attach permutation bands computed on ``x`` (the series the bundle came from)."""
    low, high = permutation_bands(x, int(bundle.lags[-1]), n_shuffles, percentiles, seed,
                                  min_lag=int(bundle.lags[0]))
    return bundle.with_bands(low, high, n_shuffles=int(n_shuffles), seed=seed,
                             percentiles=list(percentiles))


# ---------------------------------------------------------------------------
# power-law decay


def fit_decay(correlogram, fit_range=(1, 100), truncate=True):
    """OLS fit of ``ln A(tau) = c - beta ln tau`` over lags in ``fit_range``.

    Non-positive correlations cannot be logged and are excluded. With
    ``truncate`` the range also ends just before the first non-positive
    value, so a noisy tail crossing zero does not drag the slope.
    """
    tau_lo, tau_hi = fit_range
    if not 1 <= tau_lo < tau_hi:
        raise InputError(f"invalid fit range {fit_range!r}")
    lags = np.asarray(correlogram.lags)
    vals = np.asarray(correlogram.values, dtype=float)
    in_range = (lags >= tau_lo) & (lags <= tau_hi)
    lags, vals = lags[in_range], vals[in_range]
    bad = ~(vals > 0)
    usable = ~bad
    if truncate and bad.any():
        usable[np.argmax(bad):] = False
    excluded = tuple(int(t) for t in lags[~usable])
    lags, vals = lags[usable], vals[usable]
    if lags.size < 3:
        raise InsufficientData(f"only {lags.size} positive correlations in range {fit_range!r}")
    res = stats.linregress(np.log(lags), np.log(vals))
    return DecayFit(
        alpha=float(correlogram.metadata.get("alpha", float("nan"))),
        beta=float(-res.slope),
        beta_std_err=float(res.stderr),
        fit_range=(int(lags[0]), int(lags[-1])),
        amplitude=float(np.exp(res.intercept)),
        excluded_lags=excluded,
    )
