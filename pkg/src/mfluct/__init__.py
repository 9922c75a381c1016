"""Multiscale non-Gaussian fluctuation analysis of daily price series.

The toolkit measures how fat-tailed the distribution of detrended log-return
increments is, scale by scale and window by window, through the intermittency
parameter lambda2 of a log-normal variance-mixture (Castaing) model. It also
provides structure-function multifractality tests, descriptive statistics
around a split point, and seeded surrogate generators used to validate every
estimator against known ground truth.
"""

from mfluct.series import (
    DataError,
    PriceSeries,
    ReturnsSeries,
    load_prices,
    log_prices,
    log_returns,
    write_prices,
)
from mfluct.detrend import (
    DetrendConfig,
    IncrementSet,
    WindowFit,
    detrended_increments,
    piecewise_linear_residuals,
)
from mfluct.castaing import (
    CastaingFit,
    CastaingParams,
    FitError,
    castaing_pdf,
    fit_lambda2_pdf,
    lambda2_from_kurtosis,
)
from mfluct.multiscale import (
    DEFAULT_SCAN_SCALES,
    CrossoverFit,
    FitOptions,
    ScaleScan,
    WindowedLambda,
    fit_crossover,
    lag_covariance,
    scan_scales,
    sliding_lambda2,
)
from mfluct.structure import (
    DEFAULT_Q_VALUES,
    StructureFunctionScan,
    classify_fractality,
    structure_functions,
)
from mfluct.surrogates import (
    SurrogateSpec,
    TwoRegimeSurrogate,
    gen_castaing_increments,
    gen_gaussian_walk,
    gen_two_regime,
)
from mfluct.stats import (
    EmpiricalPdf,
    SplitReport,
    SummaryStats,
    empirical_pdf,
    split_compare,
    summary_stats,
)

__version__ = "0.1.0"

__all__ = [
    "DataError",
    "PriceSeries",
    "ReturnsSeries",
    "load_prices",
    "write_prices",
    "log_prices",
    "log_returns",
    "DetrendConfig",
    "IncrementSet",
    "WindowFit",
    "piecewise_linear_residuals",
    "detrended_increments",
    "CastaingParams",
    "CastaingFit",
    "FitError",
    "castaing_pdf",
    "fit_lambda2_pdf",
    "lambda2_from_kurtosis",
    "DEFAULT_SCAN_SCALES",
    "FitOptions",
    "ScaleScan",
    "WindowedLambda",
    "CrossoverFit",
    "scan_scales",
    "fit_crossover",
    "sliding_lambda2",
    "lag_covariance",
    "DEFAULT_Q_VALUES",
    "StructureFunctionScan",
    "structure_functions",
    "classify_fractality",
    "SurrogateSpec",
    "TwoRegimeSurrogate",
    "gen_castaing_increments",
    "gen_gaussian_walk",
    "gen_two_regime",
    "SummaryStats",
    "EmpiricalPdf",
    "SplitReport",
    "summary_stats",
    "empirical_pdf",
    "split_compare",
]
