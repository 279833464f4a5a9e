"""Serial-correlation diagnostics for residuals and outcome series.

Provides the Durbin-Watson statistic with a design-specific
moment-based normal approximation for its p-value, the sample
autocorrelation function with white-noise bands, and the Ljung-Box
portmanteau test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .design import DesignMatrix
from .distributions import chi_square_sf, normal_cdf, normal_quantile
from .errors import FitError


@dataclass(frozen=True)
class DwResult:
    statistic: float
    p_value: float  # one-sided, against positive autocorrelation
    null_mean: float
    null_variance: float
    method: str = "moment-normal-approximation"


@dataclass(frozen=True)
class AcfResult:
    lags: tuple[int, ...]
    correlations: tuple[float, ...]
    band: float  # +-band is the white-noise bound at `level`
    level: float


@dataclass(frozen=True)
class LjungBoxResult:
    statistic: float
    df: int
    p_value: float


def durbin_watson(residuals) -> float:
    """d = sum of squared first differences over the residual sum of squares."""
    e = np.asarray(residuals, dtype=float)
    if len(e) < 2:
        raise FitError(f"need at least 2 residuals, got {len(e)}")
    denom = float(e @ e)
    if denom == 0.0:
        raise FitError("Durbin-Watson is undefined for all-zero residuals")
    return float(np.sum(np.diff(e) ** 2) / denom)


def _difference_matrix(n: int) -> np.ndarray:
    a = 2.0 * np.eye(n)
    a[0, 0] = a[-1, -1] = 1.0
    idx = np.arange(n - 1)
    a[idx, idx + 1] = -1.0
    a[idx + 1, idx] = -1.0
    return a


def dw_p_value(d: float, design: DesignMatrix) -> DwResult:
    """Left-tail p-value for d under the no-autocorrelation null.

    The null mean and variance of d depend only on the design: they are
    computed from traces of the first-difference quadratic form weighted
    by the residual projector, then referred to a normal approximation.
    Small d means positive serial correlation, hence the left tail.
    """
    x = design.matrix
    n, k = x.shape
    if n - k < 2:
        raise FitError(f"design too small for the moment formulas: n - k = {n - k}")
    a = _difference_matrix(n)
    q, _ = np.linalg.qr(x)
    m = np.eye(n) - q @ q.T
    am = a @ m
    nk = n - k
    tr1 = float(np.trace(am))
    tr2 = float(np.trace(am @ am))
    mean = tr1 / nk
    second_moment = (tr1**2 + 2.0 * tr2) / (nk * (nk + 2))
    variance = second_moment - mean**2
    if variance <= 0:
        raise FitError("degenerate null variance for the Durbin-Watson statistic")
    p = normal_cdf((d - mean) / variance**0.5)
    return DwResult(statistic=d, p_value=p, null_mean=mean, null_variance=variance)


def acf(series, max_lag: int) -> AcfResult:
    """Sample autocorrelations at lags 1..max_lag (biased 1/n denominator)."""
    y = np.asarray(series, dtype=float)
    n = len(y)
    if not 1 <= max_lag < n:
        raise FitError(f"max_lag must lie in [1, {n - 1}], got {max_lag}")
    yc = y - y.mean()
    denom = float(yc @ yc)
    if denom == 0.0:
        raise FitError("autocorrelation is undefined for a constant series")
    corr = tuple(float(yc[h:] @ yc[:-h]) / denom for h in range(1, max_lag + 1))
    level = 0.95
    band = normal_quantile(0.5 + level / 2.0) / n**0.5
    return AcfResult(
        lags=tuple(range(1, max_lag + 1)),
        correlations=corr,
        band=band,
        level=level,
    )


def ljung_box(residuals, lags: int, fitted_params: int = 0) -> LjungBoxResult:
    """Ljung-Box whiteness test with df = lags - fitted_params."""
    e = np.asarray(residuals, dtype=float)
    n = len(e)
    if fitted_params < 0:
        raise FitError(f"fitted_params must be non-negative, got {fitted_params}")
    if lags <= fitted_params:
        raise FitError(f"need lags > fitted_params, got lags={lags}, fitted_params={fitted_params}")
    if lags >= n / 2:
        raise FitError(f"need lags < n/2, got lags={lags} with n={n}")
    r = np.array(acf(e, lags).correlations)
    h = np.arange(1, lags + 1)
    q = float(n * (n + 2) * np.sum(r**2 / (n - h)))
    df = lags - fitted_params
    return LjungBoxResult(statistic=q, df=df, p_value=chi_square_sf(q, df))
