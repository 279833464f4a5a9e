import numpy as np
import pytest

import itsa
from itsa.arx import ArxSpec, fit_arx
from itsa.design import DesignMatrix
from itsa.effect import counterfactual_series, effect_at, effect_series
from itsa.errors import DesignError, FitError
from itsa.ols import fit_ols


def step_design(y, changepoint, extra=None, extra_names=()):
    """intercept + intervention indicator (+ optional extra columns)."""
    n = len(y)
    weeks = np.arange(1, n + 1, dtype=float)
    indicator = (weeks >= changepoint).astype(float)
    cols = [np.ones(n), indicator]
    names = ["intercept", "intervention", *extra_names]
    if extra is not None:
        cols.append(np.asarray(extra, dtype=float))
    return DesignMatrix(
        matrix=np.column_stack(cols),
        column_names=tuple(names),
        outcome=np.asarray(y, dtype=float),
        weeks=weeks,
        changepoint=changepoint,
        intervention_columns=("intervention",),
    )


@pytest.fixture(scope="module")
def reduced_case_study():
    """Case-study design and fit: intercept, time, level change, occupancy."""
    data = itsa.load_case_study()
    design = itsa.build_design(data, itsa.InterventionSpec(53), []).subset(
        ["intercept", "time", "intervention"]
    )
    return design, fit_ols(design)


class TestCounterfactualSeries:
    def test_matches_fitted_before_changepoint(self, reduced_case_study):
        design, fit = reduced_case_study
        cf = counterfactual_series(fit, design)
        assert np.array_equal(cf[:52], fit.fitted[:52])
        assert not np.allclose(cf[52:], fit.fitted[52:])

    def test_zero_intervention_coefficient_means_no_effect(self, rng):
        y = 10.0 + rng.normal(size=60)
        design = step_design(y, changepoint=31)
        fit = fit_ols(design)
        nulled = fit_ols(
            DesignMatrix(
                matrix=design.matrix,
                column_names=design.column_names,
                outcome=design.matrix[:, 0] * 7.0,  # outcome ignores the indicator
                weeks=design.weeks,
                changepoint=design.changepoint,
                intervention_columns=design.intervention_columns,
            )
        )
        cf = counterfactual_series(nulled, design)
        assert np.allclose(cf, nulled.fitted, atol=1e-9)

    def test_requires_declared_intervention_columns(self, rng):
        y = rng.normal(size=30)
        design = DesignMatrix(
            matrix=np.ones((30, 1)),
            column_names=("intercept",),
            outcome=y,
            weeks=np.arange(1, 31, dtype=float),
            changepoint=15,
            intervention_columns=(),
        )
        with pytest.raises(DesignError, match="intervention columns"):
            counterfactual_series(fit_ols(design), design)


class TestEffectAt:
    def test_pre_intervention_week_is_exact_zero(self, reduced_case_study):
        design, fit = reduced_case_study
        est = effect_at(fit, design, 20)
        assert est.absolute_change == 0.0
        assert est.relative_change == 0.0
        assert (est.ci_lower, est.ci_upper) == (0.0, 0.0)
        assert est.counterfactual == est.fitted

    def test_pure_level_shift_recovers_step_size(self, rng):
        n = 80
        weeks = np.arange(1, n + 1)
        y = 30.0 - 12.0 * (weeks >= 41) + 0.5 * rng.normal(size=n)
        design = step_design(y, changepoint=41)
        fit = fit_ols(design)
        for week in (41, 60, 80):
            est = effect_at(fit, design, week)
            assert est.absolute_change == pytest.approx(
                fit.coefficients["intervention"], abs=1e-10
            )
            assert est.absolute_change == pytest.approx(-12.0, abs=0.5)
            assert est.method == "ols:delta"

    def test_delta_ci_matches_monte_carlo(self, rng):
        n = 200
        weeks = np.arange(1, n + 1)
        y = 50.0 - 20.0 * (weeks >= 101) + 2.0 * rng.normal(size=n)
        design = step_design(y, changepoint=101)
        fit = fit_ols(design)
        est = effect_at(fit, design, 150)

        draws = rng.multivariate_normal(fit.beta, fit.covariance, size=100_000)
        ratio = 100.0 * draws[:, 1] / draws[:, 0]
        lo, hi = np.percentile(ratio, [2.5, 97.5])
        assert est.ci_lower == pytest.approx(lo, abs=1.0)
        assert est.ci_upper == pytest.approx(hi, abs=1.0)
        assert est.relative_change == pytest.approx(np.mean(ratio), abs=1.0)

    def test_wider_interval_at_lower_confidence_is_nested(self, reduced_case_study):
        design, fit = reduced_case_study
        wide = effect_at(fit, design, 80, ci_level=0.99)
        narrow = effect_at(fit, design, 80, ci_level=0.80)
        assert wide.ci_lower < narrow.ci_lower < narrow.ci_upper < wide.ci_upper

    def test_nonpositive_counterfactual_flagged(self, rng):
        n = 60
        weeks = np.arange(1, n + 1)
        y = -5.0 + 3.0 * (weeks >= 31) + 0.2 * rng.normal(size=n)
        design = step_design(y, changepoint=31)
        fit = fit_ols(design)
        est = effect_at(fit, design, 40)
        assert est.counterfactual < 0
        assert est.relative_change is None
        assert est.ci_lower is None and est.ci_upper is None
        assert est.method.endswith("relative-undefined")

    def test_week_outside_range(self, reduced_case_study):
        design, fit = reduced_case_study
        with pytest.raises(DesignError, match="outside"):
            effect_at(fit, design, 200)

    def test_invalid_ci_level(self, reduced_case_study):
        design, fit = reduced_case_study
        with pytest.raises(FitError, match="ci_level"):
            effect_at(fit, design, 60, ci_level=1.5)


class TestCaseStudyEffect:
    def test_week_after_intervention(self, reduced_case_study):
        design, fit = reduced_case_study
        est = effect_at(fit, design, 54)
        assert -70.0 < est.relative_change < -50.0
        assert est.ci_lower < -54.0
        assert est.ci_upper > -70.0

    def test_counterfactual_near_pre_period_level(self, case_study):
        design = itsa.build_design(case_study, itsa.InterventionSpec(53), [])
        fit = fit_ols(design)
        est = effect_at(fit, design, 54)
        assert est.counterfactual == pytest.approx(28.7, abs=1.0)
        assert est.fitted == pytest.approx(12.1, abs=1.0)

    def test_mean_post_period_effect(self, reduced_case_study):
        design, fit = reduced_case_study
        series = effect_series(fit, design)
        assert -65.0 < series.mean_relative_change < -50.0
        assert len(series.estimates) == 62
        assert series.estimates[0].week == 53

    def test_effect_is_sustained(self, reduced_case_study):
        design, fit = reduced_case_study
        series = effect_series(fit, design)
        assert series.stabilization_week is not None
        assert series.weeks_to_stabilization == series.stabilization_week - 53 + 1

    def test_arx_fit_effect(self, case_study):
        design = itsa.build_design(case_study, itsa.InterventionSpec(53), ["occupancy"])
        fit = fit_arx(design, ArxSpec(2, ("intercept", "occupancy", "intervention")))
        est = effect_at(fit, design, 60)
        assert est.method == "arx:delta"
        assert est.absolute_change == pytest.approx(fit.beta["intervention"], abs=1e-9)
        assert est.ci_lower < est.relative_change < est.ci_upper < 0


class TestEffectSeries:
    def test_no_post_period(self, rng):
        n = 60
        weeks = np.arange(1, n + 1)
        y = 40.0 - 10.0 * (weeks >= 31) + rng.normal(size=n)
        full = step_design(y, changepoint=31)
        fit = fit_ols(full)
        # evaluate on the pre-intervention rows only
        pre = DesignMatrix(
            matrix=full.matrix[:25],
            column_names=full.column_names,
            outcome=full.outcome[:25],
            weeks=full.weeks[:25],
            changepoint=31,
            intervention_columns=full.intervention_columns,
        )
        series = effect_series(fit, pre)
        assert series.estimates == ()
        assert series.mean_relative_change is None
        assert series.stabilization_week is None

    def test_constant_effect_stabilizes_immediately(self, rng):
        n = 60
        weeks = np.arange(1, n + 1)
        y = 40.0 - 10.0 * (weeks >= 31) + 0.1 * rng.normal(size=n)
        design = step_design(y, changepoint=31)
        series = effect_series(fit_ols(design), design)
        assert series.stabilization_week == 31
        assert series.weeks_to_stabilization == 1
