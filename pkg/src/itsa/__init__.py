"""Interrupted time series analysis toolkit.

Measures the impact of a time-delimited intervention on an equally
spaced outcome series: segmented regression with confounder control,
autocorrelation diagnostics, ARX intervention models with
likelihood-ratio testing, and counterfactual effect estimation.
"""

from .arx import (
    ArxFit,
    ArxSpec,
    LrtResult,
    SelectionResult,
    arx_deviance,
    fit_arx,
    likelihood_ratio_test,
    predict_arx,
    select_baseline,
)
from .dataset import (
    ObservationRecord,
    SegmentSummary,
    TimeSeriesDataset,
    load_case_study,
    parse_csv,
    summarize,
)
from .design import (
    DesignMatrix,
    InterventionSpec,
    TimeCodingConvention,
    build_design,
    recode_time,
)
from .diagnostics import (
    AcfResult,
    DwResult,
    LjungBoxResult,
    acf,
    durbin_watson,
    dw_p_value,
    ljung_box,
)
from .effect import EffectEstimate, EffectSeries, counterfactual_series, effect_at, effect_series
from .errors import DataError, DesignError, FitError, ItsaError
from .ols import OlsFit, fit_ols, gaussian_deviance, predict

__version__ = "0.1.0"

__all__ = [
    "AcfResult",
    "ArxFit",
    "ArxSpec",
    "DataError",
    "DesignError",
    "DesignMatrix",
    "DwResult",
    "EffectEstimate",
    "EffectSeries",
    "FitError",
    "InterventionSpec",
    "ItsaError",
    "LjungBoxResult",
    "LrtResult",
    "ObservationRecord",
    "OlsFit",
    "SegmentSummary",
    "SelectionResult",
    "TimeCodingConvention",
    "TimeSeriesDataset",
    "acf",
    "arx_deviance",
    "build_design",
    "counterfactual_series",
    "durbin_watson",
    "dw_p_value",
    "effect_at",
    "effect_series",
    "fit_arx",
    "fit_ols",
    "gaussian_deviance",
    "likelihood_ratio_test",
    "ljung_box",
    "load_case_study",
    "parse_csv",
    "predict",
    "predict_arx",
    "recode_time",
    "select_baseline",
    "summarize",
]
