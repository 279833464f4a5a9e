"""Intervention impact: counterfactuals, effect sizes, confidence intervals.

The counterfactual series is the model's projection with the
intervention columns zeroed everywhere; the effect at a week is the
difference between the fitted and counterfactual values, reported in
absolute terms and as a percentage of the counterfactual. Confidence
intervals on the percentage come from a first-order delta method over
the joint coefficient covariance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arx import ArxFit
from .design import DesignMatrix
from .distributions import normal_quantile
from .errors import DesignError, FitError
from .ols import OlsFit

# rolling window (weeks) and spread (percentage points) for "sustained"
STABILIZATION_WINDOW = 8
STABILIZATION_SPREAD = 5.0


@dataclass(frozen=True)
class EffectEstimate:
    """Fitted-vs-counterfactual comparison at one week."""

    week: int
    observed: float
    fitted: float
    counterfactual: float
    absolute_change: float
    relative_change: float | None  # percent; None when the counterfactual is <= 0
    ci_level: float
    ci_lower: float | None
    ci_upper: float | None
    method: str

    def to_json_dict(self) -> dict:
        return {
            "week": self.week,
            "observed": self.observed,
            "fitted": self.fitted,
            "counterfactual": self.counterfactual,
            "absolute_change": self.absolute_change,
            "relative_change": self.relative_change,
            "ci_level": self.ci_level,
            "ci": [self.ci_lower, self.ci_upper],
            "method": self.method,
        }


@dataclass(frozen=True)
class EffectSeries:
    """Per-week post-intervention effects plus summary measures."""

    estimates: tuple[EffectEstimate, ...]
    mean_relative_change: float | None
    stabilization_week: int | None  # first week from which the rolling mean stays put
    weeks_to_stabilization: int | None

    def to_json_dict(self) -> dict:
        return {
            "estimates": [e.to_json_dict() for e in self.estimates],
            "mean_relative_change": self.mean_relative_change,
            "stabilization_week": self.stabilization_week,
            "weeks_to_stabilization": self.weeks_to_stabilization,
        }


def _model_vector_and_covariance(fit, design: DesignMatrix):
    """Coefficient vector, covariance, design columns, and method tag for a fit."""
    if isinstance(fit, OlsFit):
        names = fit.column_names
        beta = fit.beta
        cov = fit.covariance
        method = "ols"
    elif isinstance(fit, ArxFit):
        names = fit.exogenous_columns
        beta = np.array([fit.beta[c] for c in names])
        k = len(names)
        cov = fit.covariance[:k, :k]
        method = "arx"
    else:
        raise FitError(f"unsupported fit type {type(fit).__name__}")
    matrix = np.column_stack([design.column(name) for name in names])
    return names, beta, cov, matrix, method


def counterfactual_series(fit, design: DesignMatrix) -> np.ndarray:
    """Linear predictions with the intervention columns zeroed everywhere."""
    if not design.intervention_columns:
        raise DesignError("design does not declare its intervention columns")
    names, beta, _, _, _ = _model_vector_and_covariance(fit, design)
    cf_design = design.zero_intervention()
    matrix = np.column_stack([cf_design.column(name) for name in names])
    return matrix @ beta


def effect_at(fit, design: DesignMatrix, week: int, ci_level: float = 0.95) -> EffectEstimate:
    """Effect estimate at one week, with a delta-method CI on the percentage."""
    if not 0.0 < ci_level < 1.0:
        raise FitError(f"ci_level must lie in (0, 1), got {ci_level}")
    weeks = design.weeks
    if not weeks[0] <= week <= weeks[-1]:
        raise DesignError(f"week {week} outside design range [{weeks[0]:g}, {weeks[-1]:g}]")
    idx = int(week - weeks[0])

    names, beta, cov, matrix, method = _model_vector_and_covariance(fit, design)
    cf_design = design.zero_intervention()
    cf_matrix = np.column_stack([cf_design.column(name) for name in names])

    row = matrix[idx]
    cf_row = cf_matrix[idx]
    intervention_part = row - cf_row

    observed = float(design.outcome[idx])
    fitted = float(row @ beta)
    counterfactual = float(cf_row @ beta)

    if not np.any(intervention_part):
        # pre-intervention week: zero effect by construction
        return EffectEstimate(
            week=week,
            observed=observed,
            fitted=fitted,
            counterfactual=counterfactual,
            absolute_change=0.0,
            relative_change=0.0,
            ci_level=ci_level,
            ci_lower=0.0,
            ci_upper=0.0,
            method=method,
        )

    absolute = float(intervention_part @ beta)
    if counterfactual <= 0:
        return EffectEstimate(
            week=week,
            observed=observed,
            fitted=fitted,
            counterfactual=counterfactual,
            absolute_change=absolute,
            relative_change=None,
            ci_level=ci_level,
            ci_lower=None,
            ci_upper=None,
            method=method + ":relative-undefined",
        )

    relative = 100.0 * absolute / counterfactual
    # delta method: d/dbeta of 100 * (a'b) / (c'b)
    gradient = 100.0 * (intervention_part * counterfactual - absolute * cf_row) / counterfactual**2
    se = float(np.sqrt(gradient @ cov @ gradient))
    z = normal_quantile(0.5 + ci_level / 2.0)
    return EffectEstimate(
        week=week,
        observed=observed,
        fitted=fitted,
        counterfactual=counterfactual,
        absolute_change=absolute,
        relative_change=relative,
        ci_level=ci_level,
        ci_lower=relative - z * se,
        ci_upper=relative + z * se,
        method=method + ":delta",
    )


def effect_series(fit, design: DesignMatrix, ci_level: float = 0.95) -> EffectSeries:
    """One effect estimate per post-intervention week, with summary measures.

    The summary reports the mean relative change over the post period
    and the first week from which the 8-week rolling mean of relative
    change stays within a 5-point band (the operational reading of a
    "sustained" effect).
    """
    post_weeks = [int(w) for w in design.weeks if w >= design.changepoint]
    if not post_weeks:
        return EffectSeries(
            estimates=(),
            mean_relative_change=None,
            stabilization_week=None,
            weeks_to_stabilization=None,
        )
    estimates = tuple(effect_at(fit, design, w, ci_level) for w in post_weeks)
    relatives = [e.relative_change for e in estimates]
    defined = [r for r in relatives if r is not None]
    mean_rel = sum(defined) / len(defined) if defined else None

    stabilization_week = None
    if all(r is not None for r in relatives) and len(relatives) >= STABILIZATION_WINDOW:
        rel = np.array(relatives)
        rolling = np.convolve(rel, np.ones(STABILIZATION_WINDOW) / STABILIZATION_WINDOW, "valid")
        for i in range(len(rolling)):
            tail = rolling[i:]
            if tail.max() - tail.min() < STABILIZATION_SPREAD:
                stabilization_week = post_weeks[i]
                break
    return EffectSeries(
        estimates=estimates,
        mean_relative_change=mean_rel,
        stabilization_week=stabilization_week,
        weeks_to_stabilization=(
            None if stabilization_week is None else stabilization_week - design.changepoint + 1
        ),
    )
