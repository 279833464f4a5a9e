"""Autoregressive intervention models with exogenous regressors.

An ARX(p) model regresses the outcome on exogenous columns and feeds
the last p regression errors back into the prediction:

    y_t = x_t'b + sum_j phi_j * (y_{t-j} - x_{t-j}'b) + e_t

Estimation maximizes the Gaussian likelihood conditional on the first
p observations, with the innovation variance profiled out analytically.
Intervention significance is assessed by a likelihood-ratio test
between a baseline model (no intervention columns) and the full model.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .design import DesignMatrix
from .diagnostics import ljung_box
from .distributions import chi_square_quantile, chi_square_sf
from .errors import FitError

# convergence: sup-norm of the gradient, relative to the objective magnitude
GRADIENT_TOLERANCE = 1e-8
WHITENESS_LAGS = 10
WHITENESS_ALPHA = 0.05


@dataclass(frozen=True)
class ArxSpec:
    """Model order and exogenous column names (intercept included explicitly)."""

    order: int
    exogenous_columns: tuple[str, ...]
    label: str = ""

    def __post_init__(self) -> None:
        if self.order < 0:
            raise FitError(f"autoregressive order must be non-negative, got {self.order}")
        if not self.exogenous_columns:
            raise FitError("at least one exogenous column (the intercept) is required")


@dataclass(frozen=True)
class ArxFit:
    """Conditional-ML estimate of an ARX(p) model."""

    order: int
    exogenous_columns: tuple[str, ...]
    phi: tuple[float, ...]
    beta: dict[str, float]
    standard_errors: dict[str, float]  # keys: exogenous names and "phi1".."phip"
    covariance: np.ndarray  # inverse observed information, order (exogenous..., phi...)
    sigma2: float
    log_likelihood: float
    deviance: float
    residuals: np.ndarray  # one-step conditional residuals, length n - conditioning
    converged: bool
    gradient_norm: float
    n: int
    n_effective: int
    conditioning: int  # initial observations held fixed (>= order)
    param_count: int  # order + exogenous + innovation variance
    stationary: bool
    label: str = ""
    method: str = "conditional-gaussian-ml"

    def to_json_dict(self) -> dict:
        return {
            "order": self.order,
            "phi": list(self.phi),
            "beta": dict(self.beta),
            "se": dict(self.standard_errors),
            "sigma2": self.sigma2,
            "deviance": self.deviance,
            "n_effective": self.n_effective,
            "converged": self.converged,
        }


@dataclass(frozen=True)
class LrtResult:
    """Likelihood-ratio comparison of nested ARX fits."""

    lambda_: float
    deviance_baseline: float
    deviance_full: float
    df: int
    critical_value: float
    p_value: float
    significant: bool
    alpha: float

    def to_json_dict(self) -> dict:
        return {
            "lambda": self.lambda_,
            "df": self.df,
            "critical": self.critical_value,
            "p": self.p_value,
            "significant": self.significant,
        }


@dataclass(frozen=True)
class CandidateRecord:
    """One entry of the baseline-selection trace."""

    label: str
    order: int
    exogenous_columns: tuple[str, ...]
    deviance: float
    bic: float
    whiteness_p: float
    converged: bool
    admissible: bool


@dataclass(frozen=True)
class SelectionResult:
    """Best admissible baseline fit plus the full ranked candidate trace."""

    best: ArxFit | None
    trace: tuple[CandidateRecord, ...]
    message: str = ""


def _split_columns(design: DesignMatrix, spec: ArxSpec) -> np.ndarray:
    return np.column_stack([design.column(name) for name in spec.exogenous_columns])


def _conditional_residuals(y, x, beta, phi, cond):
    """One-step residuals for t = cond..n-1 (0-based), given parameters."""
    u = y - x @ beta
    e = u[cond:].copy()
    n = len(y)
    for j, ph in enumerate(phi, start=1):
        e -= ph * u[cond - j : n - j]
    return e


def fit_arx(design: DesignMatrix, spec: ArxSpec, conditioning: int | None = None) -> ArxFit:
    """Maximize the conditional Gaussian likelihood over (beta, phi).

    The first `conditioning` observations (default: the model order) are
    held fixed and the innovation variance is profiled out, leaving a
    smooth objective in beta and phi that is minimized by BFGS from the
    plain-OLS starting point. Nonconvergence is reported through the
    `converged` flag and `gradient_norm`, not silently ignored.
    """
    p = spec.order
    cond = p if conditioning is None else conditioning
    if cond < p:
        raise FitError(f"conditioning window {cond} is smaller than the order {p}")
    x = _split_columns(design, spec)
    y = design.outcome
    n, k = x.shape
    if n <= 2 * (p + k):
        raise FitError(f"need n > 2(p + k) observations: n={n}, p={p}, k={k}")
    ne = n - cond

    def residuals_and_jacobian(theta):
        beta, phi = theta[:k], theta[k:]
        e = _conditional_residuals(y, x, beta, phi, cond)
        de_dbeta = -x[cond:].copy()
        for j, ph in enumerate(phi, start=1):
            de_dbeta += ph * x[cond - j : n - j]
        if p:
            u = y - x @ beta
            de_dphi = np.column_stack([-u[cond - j : n - j] for j in range(1, p + 1)])
            jac = np.hstack([de_dbeta, de_dphi])
        else:
            jac = de_dbeta
        return e, jac

    def negll(theta):
        e, _ = residuals_and_jacobian(theta)
        return 0.5 * ne * (math.log(2.0 * math.pi * float(np.mean(e**2))) + 1.0)

    def gradient(theta):
        e, jac = residuals_and_jacobian(theta)
        return (e @ jac) / float(np.mean(e**2))

    beta0 = np.linalg.lstsq(x, y, rcond=None)[0]
    theta0 = np.concatenate([beta0, np.zeros(p)])
    result = scipy.optimize.minimize(
        negll,
        theta0,
        jac=gradient,
        method="BFGS",
        options={"gtol": 1e-10, "maxiter": 2000},
    )
    theta = result.x
    objective = float(negll(theta))
    grad_norm = float(np.max(np.abs(gradient(theta))))
    converged = grad_norm <= GRADIENT_TOLERANCE * max(1.0, abs(objective))

    beta, phi = theta[:k], theta[k:]
    e = _conditional_residuals(y, x, beta, phi, cond)
    sigma2 = float(np.mean(e**2))
    log_likelihood = -objective

    covariance = _inverse_information(negll, theta)
    se = np.sqrt(np.diag(covariance)) if np.all(np.isfinite(covariance)) else np.full(len(theta), math.nan)
    se_names = list(spec.exogenous_columns) + [f"phi{j}" for j in range(1, p + 1)]

    stationary = _is_stationary(phi)
    if not stationary:
        warnings.warn(
            f"ARX({p}) fit {spec.label or spec.exogenous_columns} has an autoregressive "
            "root at or inside the unit circle; estimates may be unstable",
            stacklevel=2,
        )

    return ArxFit(
        order=p,
        exogenous_columns=spec.exogenous_columns,
        phi=tuple(phi.tolist()),
        beta=dict(zip(spec.exogenous_columns, beta.tolist())),
        standard_errors=dict(zip(se_names, se.tolist())),
        covariance=covariance,
        sigma2=sigma2,
        log_likelihood=log_likelihood,
        deviance=-2.0 * log_likelihood,
        residuals=e,
        converged=converged,
        gradient_norm=grad_norm,
        n=n,
        n_effective=ne,
        conditioning=cond,
        param_count=p + k + 1,
        stationary=stationary,
        label=spec.label,
    )


def _inverse_information(objective, theta) -> np.ndarray:
    """Inverse observed information at the optimum (central differences)."""
    m = len(theta)
    h = 1e-5 * np.maximum(np.abs(theta), 1.0)
    hess = np.empty((m, m))
    for i in range(m):
        for j in range(i, m):
            ei = np.zeros(m)
            ej = np.zeros(m)
            ei[i] = h[i]
            ej[j] = h[j]
            hess[i, j] = hess[j, i] = (
                objective(theta + ei + ej)
                - objective(theta + ei - ej)
                - objective(theta - ei + ej)
                + objective(theta - ei - ej)
            ) / (4.0 * h[i] * h[j])
    try:
        info_inv = np.linalg.inv(hess)
        if np.any(np.diag(info_inv) <= 0):
            raise np.linalg.LinAlgError
        return info_inv
    except np.linalg.LinAlgError:
        return np.full((m, m), math.nan)


def _is_stationary(phi: np.ndarray) -> bool:
    if len(phi) == 0 or not np.any(phi):
        return True
    # roots of 1 - phi1 z - ... - phip z^p must lie outside the unit circle
    roots = np.roots(np.concatenate([[1.0], -np.asarray(phi)])[::-1])
    return bool(np.all(np.abs(roots) > 1.0 + 1e-8))


def arx_deviance(fit: ArxFit) -> float:
    """-2 x conditional log-likelihood at the optimum."""
    if not fit.converged:
        raise FitError(
            f"fit did not converge (gradient norm {fit.gradient_norm:.2e}); "
            "deviance would be unreliable"
        )
    return fit.deviance


def predict_arx(fit: ArxFit, design: DesignMatrix) -> np.ndarray:
    """One-step-ahead in-sample predictions; leading values are NaN.

    The first `conditioning` entries have no lagged errors available and
    are returned as NaN rather than extrapolated.
    """
    for name in fit.exogenous_columns:
        design.column_index(name)  # raises on mismatch
    x = np.column_stack([design.column(name) for name in fit.exogenous_columns])
    y = design.outcome
    beta = np.array([fit.beta[c] for c in fit.exogenous_columns])
    u = y - x @ beta
    n = len(y)
    cond = fit.conditioning
    yhat = x[cond:] @ beta
    for j, ph in enumerate(fit.phi, start=1):
        yhat = yhat + ph * u[cond - j : n - j]
    out = np.full(n, np.nan)
    out[cond:] = yhat
    return out


def select_baseline(
    design: DesignMatrix,
    max_order: int,
    candidate_exogenous: list[tuple[str, ...]] | list[list[str]],
    whiteness_lags: int = WHITENESS_LAGS,
    whiteness_alpha: float = WHITENESS_ALPHA,
) -> SelectionResult:
    """Grid-search orders 0..max_order x exogenous sets for the baseline model.

    Intervention columns are excluded from candidates by construction.
    All candidates are scored on a common estimation window (the first
    `max_order` observations held fixed) so their likelihoods are
    comparable, then ranked by BIC among fits whose residuals pass a
    Ljung-Box whiteness check. The winner is refit on its own natural
    window before being returned.
    """
    if max_order < 0:
        raise FitError(f"max_order must be non-negative, got {max_order}")
    for columns in candidate_exogenous:
        for name in columns:
            if name in design.intervention_columns:
                raise FitError(
                    f"candidate exogenous set {tuple(columns)} contains the "
                    f"intervention column {name!r}"
                )

    n_common = design.n - max_order
    trace: list[CandidateRecord] = []
    fits: dict[int, ArxSpec] = {}
    for columns in candidate_exogenous:
        columns = tuple(columns)
        for order in range(max_order + 1):
            label = f"ARX({order}) {'+'.join(columns)}"
            spec = ArxSpec(order=order, exogenous_columns=columns, label=label)
            fit = fit_arx(design, spec, conditioning=max_order)
            bic = fit.deviance + fit.param_count * math.log(n_common)
            if whiteness_lags > order:
                lb = ljung_box(fit.residuals, whiteness_lags, fitted_params=order)
                whiteness_p = lb.p_value
            else:
                whiteness_p = math.nan
            admissible = fit.converged and whiteness_p > whiteness_alpha
            trace.append(
                CandidateRecord(
                    label=label,
                    order=order,
                    exogenous_columns=columns,
                    deviance=fit.deviance,
                    bic=bic,
                    whiteness_p=whiteness_p,
                    converged=fit.converged,
                    admissible=admissible,
                )
            )
            fits[len(trace) - 1] = spec

    order_by_bic = sorted(range(len(trace)), key=lambda i: trace[i].bic)
    ranked = tuple(trace[i] for i in order_by_bic)
    admissible = [i for i in order_by_bic if trace[i].admissible]
    if not admissible:
        return SelectionResult(
            best=None,
            trace=ranked,
            message="no candidate passed the residual whiteness check",
        )
    winner = fits[admissible[0]]
    best = fit_arx(design, winner)  # natural conditioning window for reporting
    return SelectionResult(best=best, trace=ranked, message=f"selected {winner.label}")


def likelihood_ratio_test(baseline: ArxFit, full: ArxFit, alpha: float = 0.05) -> LrtResult:
    """Deviance-difference test of nested ARX fits against chi-square."""
    if not baseline.converged:
        raise FitError("baseline fit did not converge")
    if not full.converged:
        raise FitError("full fit did not converge")
    if not set(baseline.exogenous_columns) <= set(full.exogenous_columns):
        raise FitError(
            "models are not nested: baseline columns "
            f"{list(baseline.exogenous_columns)} are not a subset of "
            f"{list(full.exogenous_columns)}"
        )
    if baseline.order > full.order:
        raise FitError(
            f"models are not nested: baseline order {baseline.order} exceeds "
            f"full order {full.order}"
        )
    if baseline.n != full.n or baseline.conditioning != full.conditioning:
        raise FitError(
            "fits use different data rows: "
            f"n={baseline.n}/{full.n}, conditioning={baseline.conditioning}/{full.conditioning}"
        )
    lam = baseline.deviance - full.deviance
    if lam < -1e-6:
        raise FitError(
            f"negative likelihood-ratio statistic ({lam:.6g}): the full-model "
            "optimizer found a worse optimum than the nested baseline"
        )
    df = full.param_count - baseline.param_count
    if df == 0:
        return LrtResult(
            lambda_=lam,
            deviance_baseline=baseline.deviance,
            deviance_full=full.deviance,
            df=0,
            critical_value=0.0,
            p_value=1.0,
            significant=False,
            alpha=alpha,
        )
    critical = chi_square_quantile(1.0 - alpha, df)
    p = chi_square_sf(max(lam, 0.0), df)
    return LrtResult(
        lambda_=lam,
        deviance_baseline=baseline.deviance,
        deviance_full=full.deviance,
        df=df,
        critical_value=critical,
        p_value=p,
        significant=lam > critical,
        alpha=alpha,
    )
