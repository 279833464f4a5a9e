"""Equally spaced longitudinal datasets: parsing, validation, summaries.

The central type is :class:`TimeSeriesDataset`, an immutable sequence of
weekly observations of one outcome plus named covariates. Input series
must be complete (no gaps, no blanks) and spaced exactly one week apart.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field

from . import _case_study
from .errors import DataError

# Precomputed design columns sometimes present in analysis-ready exports.
# They are derivable from the week index and intervention week, so the
# parser drops them rather than treating them as covariates.
DERIVED_COLUMN_NAMES = frozenset({"level change", "trend change", "baseline trend"})


def _canonical(name: str) -> str:
    return name.strip().lower().replace("_", " ")


@dataclass(frozen=True)
class ObservationRecord:
    """One weekly observation: outcome value plus named covariates."""

    week: int
    outcome: float
    covariates: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.week < 1:
            raise DataError(f"week index must be positive, got {self.week}")
        if self.outcome < 0:
            raise DataError(f"week {self.week}: outcome must be non-negative, got {self.outcome}")
        occ = self.covariates.get("occupancy")
        if occ is not None and not 0.0 <= occ <= 100.0:
            raise DataError(f"week {self.week}: occupancy must lie in [0, 100], got {occ}")
        for name in ("discharges", "admissions"):
            v = self.covariates.get(name)
            if v is not None and v < 0:
                raise DataError(f"week {self.week}: {name} must be non-negative, got {v}")


@dataclass(frozen=True)
class TimeSeriesDataset:
    """Ordered, equally spaced weekly observations. Immutable after construction."""

    records: tuple[ObservationRecord, ...]
    outcome_name: str
    covariate_names: tuple[str, ...]
    interval_label: str = "week"

    def __post_init__(self) -> None:
        if len(self.records) < 3:
            raise DataError(f"dataset needs at least 3 records, got {len(self.records)}")
        expected = set(self.covariate_names)
        prev = None
        for rec in self.records:
            if prev is not None and rec.week != prev + 1:
                if rec.week == prev:
                    raise DataError(f"duplicate week {rec.week}")
                raise DataError(f"gap in week sequence: week {prev + 1} is missing")
            prev = rec.week
            if set(rec.covariates) != expected:
                raise DataError(
                    f"week {rec.week}: covariate names {sorted(rec.covariates)} "
                    f"do not match dataset columns {sorted(expected)}"
                )

    def __len__(self) -> int:
        return len(self.records)

    @property
    def weeks(self) -> tuple[int, ...]:
        return tuple(rec.week for rec in self.records)

    @property
    def outcome(self) -> tuple[float, ...]:
        return tuple(rec.outcome for rec in self.records)

    def covariate(self, name: str) -> tuple[float, ...]:
        if name not in self.covariate_names:
            raise DataError(f"unknown covariate {name!r}; have {list(self.covariate_names)}")
        return tuple(rec.covariates[name] for rec in self.records)

    def record_at(self, week: int) -> ObservationRecord:
        first = self.records[0].week
        if not first <= week <= self.records[-1].week:
            raise DataError(f"week {week} outside dataset range [{first}, {self.records[-1].week}]")
        return self.records[week - first]

    def to_csv(self, sink) -> None:
        """Write the dataset as CSV (header row, week index first)."""
        writer = csv.writer(sink, lineterminator="\n")
        writer.writerow(["week", self.outcome_name, *self.covariate_names])
        for rec in self.records:
            writer.writerow(
                [rec.week, _format_number(rec.outcome)]
                + [_format_number(rec.covariates[c]) for c in self.covariate_names]
            )


@dataclass(frozen=True)
class SegmentSummary:
    """Outcome mean/min/max overall and on either side of a split week."""

    split_week: int
    overall_mean: float
    overall_min: float
    overall_max: float
    before_mean: float
    before_min: float
    before_max: float
    after_mean: float
    after_min: float
    after_max: float
    n_before: int
    n_after: int


def _format_number(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def _parse_cell(text: str, row: int, column: str) -> float:
    stripped = text.strip()
    if not stripped:
        raise DataError(f"row {row}, column {column!r}: blank cell")
    try:
        value = float(stripped)
    except ValueError:
        raise DataError(f"row {row}, column {column!r}: non-numeric value {text!r}") from None
    if not math.isfinite(value):
        raise DataError(f"row {row}, column {column!r}: non-finite value {text!r}")
    return value


def parse_csv(source, intervention_week: int | None = None) -> TimeSeriesDataset:
    """Parse a CSV stream (or string) into a validated dataset.

    The first column is the week index and the second the outcome;
    remaining columns are covariates, in file order. Precomputed design
    columns (level change / trend change / baseline trend) are ignored
    with a warning so both raw exports and analysis-ready files load.
    When `intervention_week` is given, any precomputed columns are
    cross-checked against the values implied by that week; a mismatch
    is reported as a warning, not an error.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty input: no header row") from None
    if len(header) < 2:
        raise DataError("header must name a week column and an outcome column")

    keep: list[int] = []
    derived: dict[str, int] = {}
    for idx, name in enumerate(header[1:], start=1):
        canon = _canonical(name)
        if canon in DERIVED_COLUMN_NAMES:
            derived[canon] = idx
        else:
            keep.append(idx)
    if derived:
        warnings.warn(
            "ignoring derived design columns: "
            + ", ".join(header[i] for i in derived.values()),
            stacklevel=2,
        )
    if not keep:
        raise DataError("no outcome column remains after dropping derived columns")

    outcome_idx = keep[0]
    covariate_idx = keep[1:]
    outcome_name = header[outcome_idx].strip()
    covariate_names = tuple(header[i].strip() for i in covariate_idx)

    records: list[ObservationRecord] = []
    seen_weeks: set[int] = set()
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise DataError(f"row {row_no}: expected {len(header)} cells, got {len(row)}")
        week_val = _parse_cell(row[0], row_no, header[0])
        if week_val != int(week_val):
            raise DataError(f"row {row_no}: week index must be an integer, got {row[0]!r}")
        week = int(week_val)
        if week in seen_weeks:
            raise DataError(f"duplicate week {week}")
        seen_weeks.add(week)
        outcome = _parse_cell(row[outcome_idx], row_no, outcome_name)
        covariates = {
            header[i].strip(): _parse_cell(row[i], row_no, header[i]) for i in covariate_idx
        }
        if intervention_week is not None and derived:
            _check_derived_cells(row, row_no, header, derived, week, intervention_week)
        records.append(ObservationRecord(week=week, outcome=outcome, covariates=covariates))

    if not records:
        raise DataError("empty input: no data rows")
    return TimeSeriesDataset(
        records=tuple(records),
        outcome_name=outcome_name,
        covariate_names=covariate_names,
    )


def _check_derived_cells(row, row_no, header, derived, week, intervention_week) -> None:
    post = week >= intervention_week
    expected = {
        "level change": 1.0 if post else 0.0,
        "trend change": float(week - intervention_week + 1) if post else 0.0,
        "baseline trend": float(week),
    }
    for canon, idx in derived.items():
        value = _parse_cell(row[idx], row_no, header[idx])
        if value != expected[canon]:
            warnings.warn(
                f"row {row_no}: column {header[idx]!r} is {value:g} but "
                f"intervention week {intervention_week} implies {expected[canon]:g}",
                stacklevel=3,
            )


def load_case_study() -> TimeSeriesDataset:
    """Return the packaged 114-week OR-holds dataset."""
    records = tuple(
        ObservationRecord(
            week=week,
            outcome=float(holds),
            covariates={
                "occupancy": float(occ),
                "discharges": float(dis),
                "admissions": float(adm),
            },
        )
        for week, holds, occ, dis, adm in _case_study.CASE_STUDY_ROWS
    )
    return TimeSeriesDataset(
        records=records,
        outcome_name=_case_study.OUTCOME_NAME,
        covariate_names=_case_study.COVARIATE_NAMES,
    )


def summarize(dataset: TimeSeriesDataset, split_week: int) -> SegmentSummary:
    """Outcome summary overall and split at `split_week` (before = weeks < split)."""
    weeks = dataset.weeks
    if not weeks[0] <= split_week <= weeks[-1]:
        raise DataError(f"split week {split_week} outside dataset range [{weeks[0]}, {weeks[-1]}]")
    before = [r.outcome for r in dataset.records if r.week < split_week]
    after = [r.outcome for r in dataset.records if r.week >= split_week]
    if not before or not after:
        raise DataError(f"split week {split_week} leaves an empty segment")
    everything = [r.outcome for r in dataset.records]
    return SegmentSummary(
        split_week=split_week,
        overall_mean=sum(everything) / len(everything),
        overall_min=min(everything),
        overall_max=max(everything),
        before_mean=sum(before) / len(before),
        before_min=min(before),
        before_max=max(before),
        after_mean=sum(after) / len(after),
        after_min=min(after),
        after_max=max(after),
        n_before=len(before),
        n_after=len(after),
    )
