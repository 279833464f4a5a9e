"""Segmented-regression design matrices.

Builds the regressor matrix for an interrupted time series: intercept,
time, a 0/1 intervention indicator, a post-intervention trend counter,
and any confounders, in a fixed column order so coefficient tables are
reproducible. Alternative time origins are supported; recoding time by
a constant shift changes only the intercept's interpretation.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace

import numpy as np

from .dataset import TimeSeriesDataset
from .errors import DesignError

INTERCEPT = "intercept"
TIME = "time"
INTERVENTION = "intervention"
TIME_AFTER = "time_after"


@dataclass(frozen=True)
class InterventionSpec:
    """Change-point definition: first affected week plus an optional lag."""

    changepoint_week: int
    lag_weeks: int = 0

    def __post_init__(self) -> None:
        if self.changepoint_week < 1:
            raise DesignError(f"changepoint week must be positive, got {self.changepoint_week}")
        if self.lag_weeks < 0:
            raise DesignError(f"lag must be non-negative, got {self.lag_weeks}")

    @property
    def effective_week(self) -> int:
        return self.changepoint_week + self.lag_weeks


@dataclass(frozen=True)
class TimeCodingConvention:
    """Origin of the time axis: series start, intervention week, or a fixed offset."""

    kind: str
    offset: int = 0

    @classmethod
    def series_start(cls) -> "TimeCodingConvention":
        return cls(kind="series_start")

    @classmethod
    def at_intervention(cls) -> "TimeCodingConvention":
        return cls(kind="at_intervention")

    @classmethod
    def origin_offset(cls, k: int) -> "TimeCodingConvention":
        return cls(kind="offset", offset=k)

    def __post_init__(self) -> None:
        if self.kind not in ("series_start", "at_intervention", "offset"):
            raise DesignError(f"unknown time coding {self.kind!r}")

    def shift_for(self, changepoint: int) -> int:
        """Amount subtracted from the raw week index under this coding."""
        if self.kind == "series_start":
            return 0
        if self.kind == "at_intervention":
            # intervention start is coded as week 1
            return changepoint - 1
        return self.offset


@dataclass(frozen=True)
class DesignMatrix:
    """Named regressor matrix plus the outcome it models."""

    matrix: np.ndarray
    column_names: tuple[str, ...]
    outcome: np.ndarray
    weeks: np.ndarray
    changepoint: int
    intervention_columns: tuple[str, ...] = (INTERVENTION, TIME_AFTER)

    def __post_init__(self) -> None:
        n, k = self.matrix.shape
        if len(self.column_names) != k:
            raise DesignError(f"{k} columns but {len(self.column_names)} names")
        if len(self.outcome) != n or len(self.weeks) != n:
            raise DesignError("outcome/week length does not match the matrix")
        if INTERCEPT in self.column_names:
            ones = self.column(INTERCEPT)
            if not np.all(ones == 1.0):
                raise DesignError("intercept column must be all ones")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def k(self) -> int:
        return self.matrix.shape[1]

    def column(self, name: str) -> np.ndarray:
        try:
            idx = self.column_names.index(name)
        except ValueError:
            raise DesignError(f"no column named {name!r}") from None
        return self.matrix[:, idx]

    def column_index(self, name: str) -> int:
        try:
            return self.column_names.index(name)
        except ValueError:
            raise DesignError(f"no column named {name!r}") from None

    def subset(self, names: tuple[str, ...] | list[str]) -> "DesignMatrix":
        """New design keeping only the named columns, in the given order."""
        idx = [self.column_index(n) for n in names]
        return replace(
            self,
            matrix=self.matrix[:, idx].copy(),
            column_names=tuple(names),
            intervention_columns=tuple(c for c in self.intervention_columns if c in names),
        )

    def zero_intervention(self) -> "DesignMatrix":
        """Copy with the intervention columns set to zero (counterfactual design)."""
        out = self.matrix.copy()
        for name in self.intervention_columns:
            if name in self.column_names:
                out[:, self.column_names.index(name)] = 0.0
        return replace(self, matrix=out)

    def to_csv(self, sink) -> None:
        writer = csv.writer(sink, lineterminator="\n")
        writer.writerow(self.column_names)
        for row in self.matrix:
            writer.writerow([f"{v:g}" for v in row])


def build_design(
    dataset: TimeSeriesDataset,
    spec: InterventionSpec,
    confounders: list[str] | tuple[str, ...] = (),
    coding: TimeCodingConvention | None = None,
) -> DesignMatrix:
    """Construct the segmented-regression design for one change point.

    Column order is fixed: intercept, time, intervention, time_after,
    then confounders in the order given. Under the default coding the
    time column is the raw week index; the post-intervention counter is
    1 at the change-point week itself (matching the analysis-ready
    coding of the packaged case study) and increments weekly.
    """
    if coding is None:
        coding = TimeCodingConvention.series_start()
    for name in confounders:
        if name not in dataset.covariate_names:
            raise DesignError(
                f"unknown confounder {name!r}; dataset has {list(dataset.covariate_names)}"
            )
    weeks = np.array(dataset.weeks, dtype=float)
    changepoint = spec.effective_week
    if changepoint < dataset.weeks[0]:
        raise DesignError(
            f"effective changepoint {changepoint} is before the first week {dataset.weeks[0]}"
        )
    n = len(dataset)
    indicator = (weeks >= changepoint).astype(float)
    time_after = np.where(indicator > 0, weeks - changepoint + 1, 0.0)
    columns = [np.ones(n), weeks - coding.shift_for(changepoint), indicator, time_after]
    names = [INTERCEPT, TIME, INTERVENTION, TIME_AFTER]
    for name in confounders:
        columns.append(np.array(dataset.covariate(name), dtype=float))
        names.append(name)
    return DesignMatrix(
        matrix=np.column_stack(columns),
        column_names=tuple(names),
        outcome=np.array(dataset.outcome, dtype=float),
        weeks=weeks,
        changepoint=changepoint,
    )


def recode_time(design: DesignMatrix, coding: TimeCodingConvention) -> DesignMatrix:
    """Re-express the time column under a different origin.

    Only the time column changes; the indicator, post-intervention
    counter, confounders, and outcome are untouched, so fitted values
    and all non-intercept coefficients are invariant.
    """
    idx = design.column_index(TIME)
    out = design.matrix.copy()
    out[:, idx] = design.weeks - coding.shift_for(design.changepoint)
    return replace(design, matrix=out)
