"""Stylized-facts statistics for financial return series."""

from .dependence import (
    CorrelogramBundle,
    DecayFit,
    abs_power_autocorr,
    fit_decay,
    pearson_autocorr,
    permutation_bands,
    spearman_autocorr,
    with_permutation_bands,
)
from .errors import (
    ConfigError,
    DegenerateSeries,
    EmptyInput,
    InputError,
    InsufficientData,
    InsufficientTail,
    InvalidPrice,
    InvalidSpec,
    StylizedFactsError,
)
from .leverage import (
    DetectionConfig,
    LeverageProfile,
    cumulative_leverage,
    estimate_tau0,
    leverage_corr,
    leverage_profile,
)
from .rolling import AnalysisConfig, WindowReport, WindowSpec, regime_summary, run_windows
from .series import (
    MomentSummary,
    NormalizedReturnSeries,
    PriceGrid,
    ReturnSeries,
    TickSeries,
    log_returns,
    moments,
    normalize,
    resample_locf,
)
from .synth import GeneratorSpec, generate
from .tail import EmpiricalCCDF, TailFit, ccdf, fit_normalized_tail, mle_tail_index, select_xmin

__version__ = "0.1.0"
