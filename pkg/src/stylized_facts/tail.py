"""Power-law tail of |normalized returns|: Hill/continuous MLE and x_min by KS.

The reported index ``k`` is the exponent of the complementary CDF,
``P(X > x) = (x / x_min) ** -k``; the density exponent is ``k + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput, InputError, InsufficientTail


@dataclass(frozen=True)
class EmpiricalCCDF:
    sorted_values: np.ndarray
    ccdf: np.ndarray


@dataclass(frozen=True)
class TailFit:
    k: float
    x_min: float
    n_tail: int
    k_std_err: float
    ks_distance: float

    def to_dict(self):
        return {
            "k": self.k,
            "x_min": self.x_min,
            "n_tail": self.n_tail,
            "ks_distance": self.ks_distance,
            "k_std_err": self.k_std_err,
        }


def _positive(values):
    x = np.asarray(values, dtype=float).ravel()
    if x.size == 0:
        raise EmptyInput("no values given")
    if not np.all(x > 0) or not np.all(np.isfinite(x)):
        raise InputError("tail values must be finite and strictly positive")
    return x


def ccdf(values):
    """Fraction of observations strictly above each sorted value."""
    x = np.sort(_positive(values))
    n = x.size
    above = n - np.searchsorted(x, x, side="right")
    return EmpiricalCCDF(x, above / n)


def mle_tail_index(values, x_min):
    """Continuous power-law MLE (Hill form) for the CCDF index above ``x_min``.

    Returns ``(k, k_std_err)`` with ``k = n / sum(ln(x / x_min))`` over
    ``x >= x_min`` and the asymptotic error ``k / sqrt(n)``.
    """
    if not x_min > 0:
        raise InputError(f"x_min must be positive, got {x_min!r}")
    x = _positive(values)
    tail = x[x >= x_min]
    n = tail.size
    if n < 2:
        raise InsufficientTail(f"only {n} value(s) at or above x_min={x_min!r}")
    s = float(np.sum(np.log(tail / x_min)))
    if not s > 0:
        raise InsufficientTail("all tail values equal x_min")
    k = n / s
    return k, k / np.sqrt(n)


def _ks_power_law(log_ratio, k):
    # log_ratio = ln(x / x_min) sorted ascending; exact sup-norm between the
    # empirical CDF (including its left limits) and the fitted CDF
    m = log_ratio.size
    model = -np.expm1(-k * log_ratio)
    i = np.arange(m)
    return max(np.max((i + 1) / m - model), np.max(model - i / m))


def select_xmin(values, n_tail_min=10, min_count=50):
    """Choose x_min by minimising the KS distance of the fitted tail.

    Every unique data value that leaves at least ``n_tail_min`` points at or
    above it is tried. Ties go to the smallest candidate.
    """
    x = np.sort(_positive(values))
    n = x.size
    if n < min_count:
        raise InsufficientTail(f"need at least {min_count} values, got {n}")
    n_tail_min = max(int(n_tail_min), 2)

    starts = np.flatnonzero(np.concatenate([[True], x[1:] != x[:-1]]))
    starts = starts[n - starts >= n_tail_min]
    if starts.size == 0:
        raise InsufficientTail(f"no candidate leaves {n_tail_min} tail points")

    best_d, best_j = np.inf, -1
    for j in starts:
        lr = np.log(x[j:] / x[j])
        s = lr.sum()
        if not s > 0:
            continue
        d = _ks_power_law(lr, lr.size / s)
        if d < best_d:
            best_d, best_j = d, j
    if best_j < 0:
        raise InsufficientTail("tail is degenerate at every candidate x_min")
    k, se = mle_tail_index(x[best_j:], x[best_j])
    return TailFit(k=float(k), x_min=float(x[best_j]), n_tail=int(n - best_j),
                   k_std_err=float(se), ks_distance=float(np.clip(best_d, 0.0, 1.0)))


def ks_distance(values, x_min):
    """KS distance between the data above ``x_min`` and its MLE power law."""
    x = np.sort(_positive(values))
    k, _ = mle_tail_index(x, x_min)
    return float(_ks_power_law(np.log(x[x >= x_min] / x_min), k))


def fit_normalized_tail(normalized, side="abs", **kwargs):
    """Tail fit of normalized returns.

    ``side`` is ``"abs"`` (pool both signs through ``|r_N|``), ``"positive"``
    or ``"negative"`` (magnitudes of that sign only).
    """
    v = np.asarray(getattr(normalized, "values", normalized), dtype=float)
    if side == "abs":
        mags = np.abs(v)
    elif side == "positive":
        mags = v[v > 0]
    elif side == "negative":
        mags = -v[v < 0]
    else:
        raise ValueError(f"unknown side {side!r}")
    return select_xmin(mags[mags > 0], **kwargs)
