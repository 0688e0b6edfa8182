import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import naive_autocorr, naive_spearman

from stylized_facts import (
    CorrelogramBundle,
    DegenerateSeries,
    InsufficientData,
    abs_power_autocorr,
    fit_decay,
    pearson_autocorr,
    permutation_bands,
    spearman_autocorr,
    with_permutation_bands,
)
from stylized_facts.dependence import _batch_lagged_corr, lagged_corr, permutation_null
from stylized_facts.errors import InputError
from stylized_facts.synth import GeneratorSpec, generate


def series(seed, n):
    return np.random.default_rng(seed).standard_t(4, n)


def test_pearson_matches_naive_oracle():
    x = series(0, 400)
    np.testing.assert_allclose(pearson_autocorr(x, 20).values, naive_autocorr(x, 20),
                               rtol=0, atol=1e-12)


def test_abs_power_matches_naive_oracle():
    x = series(1, 300)
    for alpha in (0.5, 1.0, 2.0):
        b = abs_power_autocorr(x, alpha, 15)
        np.testing.assert_allclose(b.values, naive_autocorr(np.abs(x) ** alpha, 15),
                                   rtol=0, atol=1e-12)
        assert b.metadata["alpha"] == alpha


def test_alternating_series_lag1_is_minus_one():
    x = np.tile([1.0, -1.0], 50)
    b = pearson_autocorr(x, 2)
    assert b.at(1) == -1.0
    assert b.at(2) == 1.0
    with pytest.raises(KeyError):
        b.at(3)


def test_ar1_autocorrelation():
    x = generate(GeneratorSpec("ar1", 50_000, seed=4, params={"phi": 0.5})).values
    b = pearson_autocorr(x, 5)
    np.testing.assert_allclose(b.values, 0.5 ** np.arange(1, 6), atol=0.02)


def test_input_errors():
    with pytest.raises(InsufficientData):
        pearson_autocorr(np.arange(5.0), 4)
    with pytest.raises(InputError):
        pearson_autocorr(np.arange(5.0), 0)
    with pytest.raises(DegenerateSeries):
        pearson_autocorr(np.ones(50), 3)
    with pytest.raises(InputError):
        abs_power_autocorr(np.arange(50.0), 0.0, 3)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.floats(0.01, 100), st.floats(-100, 100), st.booleans())
def test_pearson_affine_invariance(seed, a, b, flip):
    x = series(seed, 120)
    a = -a if flip else a
    np.testing.assert_allclose(pearson_autocorr(a * x + b, 10).values,
                               pearson_autocorr(x, 10).values, rtol=0, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_values_bounded(seed):
    x = series(seed, 60)
    for bundle in (pearson_autocorr(x, 10), spearman_autocorr(x, 10),
                   abs_power_autocorr(x, 2.0, 10)):
        assert np.all(np.abs(bundle.values) <= 1.0)


def test_spearman_matches_oracle_with_ties():
    x = np.round(series(2, 200), 1)
    np.testing.assert_allclose(spearman_autocorr(x, 8).values, naive_spearman(x, 8),
                               rtol=0, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_spearman_rank_invariance(seed):
    x = series(seed, 150)
    a = spearman_autocorr(x, 6)
    b = spearman_autocorr(np.exp(x / 3.0) + x**3, 6)
    np.testing.assert_array_equal(a.values, b.values)
    assert np.all((a.p_values >= 0) & (a.p_values <= 1))


def test_spearman_gaussian_ar1_value():
    # Gaussian pair with Pearson rho has Spearman (6 / pi) arcsin(rho / 2)
    expected = 6 / math.pi * math.asin(0.25)
    x = generate(GeneratorSpec("ar1", 50_000, seed=9, params={"phi": 0.5})).values
    assert spearman_autocorr(x, 1).at(1) == pytest.approx(expected, abs=0.02)


def test_spearman_p_values_flag_dependence():
    x = generate(GeneratorSpec("ar1", 5000, seed=1, params={"phi": 0.5})).values
    b = spearman_autocorr(x, 3)
    assert b.significant(0.01)[0]
    z = generate(GeneratorSpec("iid-gaussian", 5000, seed=1)).values
    assert spearman_autocorr(z, 20).significant(0.001).sum() <= 1


def test_batch_correlation_matches_per_lag():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((3, 500))
    for lags in (np.arange(1, 5), np.arange(-30, 31)):
        got = _batch_lagged_corr(X, X * X, lags)
        for row, x in zip(got, X):
            np.testing.assert_allclose(row, lagged_corr(x, x * x, lags), rtol=0, atol=1e-12)


def test_permutation_null_independent_of_chunking():
    x = series(3, 300)
    a = permutation_null(x, np.arange(1, 4), 120, seed=5, chunk=7)
    b = permutation_null(x, np.arange(1, 4), 120, seed=5, chunk=120)
    np.testing.assert_array_equal(a, b)
    # the first realizations do not depend on how many are drawn
    np.testing.assert_array_equal(permutation_null(x, [1], 10, seed=5), a[:10, :1])


def test_permutation_bands_deterministic_and_ordered():
    x = series(4, 1000)
    lo1, hi1 = permutation_bands(x, 10, 200, seed=2)
    lo2, hi2 = permutation_bands(x, 10, 200, seed=2)
    np.testing.assert_array_equal(lo1, lo2)
    np.testing.assert_array_equal(hi1, hi2)
    assert np.all(lo1 < 0) and np.all(hi1 > 0)
    lo3, _ = permutation_bands(x, 10, 200, seed=3)
    assert not np.array_equal(lo1, lo3)
    with pytest.raises(InputError):
        permutation_bands(x, 10, 50)
    with pytest.raises(InputError):
        permutation_bands(x, 10, 200, percentiles=(99, 1))


def test_with_bands_and_significance():
    x = generate(GeneratorSpec("ar1", 2000, seed=0, params={"phi": 0.5})).values
    b = with_permutation_bands(pearson_autocorr(x, 5), x, 200, seed=1)
    assert b.band_low.shape == (5,)
    assert b.metadata["n_shuffles"] == 200
    assert b.significant()[0]
    with pytest.raises(ValueError):
        CorrelogramBundle(np.arange(1, 3), np.zeros(2)).significant()


def test_fit_decay_exact_power_law():
    lags = np.arange(1, 101)
    fit = fit_decay(CorrelogramBundle(lags, lags ** -0.3, metadata={"alpha": 1.0}))
    assert fit.beta == pytest.approx(0.3, abs=1e-12)
    assert fit.amplitude == pytest.approx(1.0, abs=1e-12)
    assert fit.beta_std_err < 1e-8
    assert fit.to_dict()["tau_hi"] == 100


def test_fit_decay_truncates_at_first_nonpositive():
    lags = np.arange(1, 21)
    vals = 0.5 * lags ** -0.7
    vals[9] = -0.01
    fit = fit_decay(CorrelogramBundle(lags, vals), (1, 20))
    assert fit.fit_range == (1, 9)
    assert fit.excluded_lags == tuple(range(10, 21))
    assert fit.beta == pytest.approx(0.7, abs=1e-12)
    kept = fit_decay(CorrelogramBundle(lags, vals), (1, 20), truncate=False)
    assert kept.excluded_lags == (10,)
    assert kept.beta == pytest.approx(0.7, abs=1e-12)


def test_fit_decay_errors():
    lags = np.arange(1, 6)
    with pytest.raises(InsufficientData):
        fit_decay(CorrelogramBundle(lags, np.array([0.1, 0.05, -0.1, 0.1, 0.1])))
    with pytest.raises(InputError):
        fit_decay(CorrelogramBundle(lags, np.ones(5)), (3, 2))
