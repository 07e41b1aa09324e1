"""Yearly transmission series, moving averages and trend summaries."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .contingency import (
    CountRecord,
    NonePolicy,
    contingency_from_counts,
    distribution_from_table,
)
from .errors import DuplicateYear, EmptyPopulation, InvalidWindow, WindowTooLarge
from .infotheory import (
    TransmissionValue,
    Unit,
    marginal_entropies,
    pairwise_transmissions,
    transmission3_entropy_form,
)

FLAT_TOL = 1e-9


@dataclass(frozen=True)
class TransmissionSeries:
    """Transmission values by year, in a single unit.

    ``window`` is 1 for a raw series; a smoothed series carries its window
    and is labeled by the last year of each window.
    """

    years: tuple
    values: tuple
    unit: Unit = Unit.BIT
    none_policy: NonePolicy = NonePolicy.EXCLUDE
    source: str = ""
    window: int = 1

    def __post_init__(self):
        years = tuple(int(y) for y in self.years)
        values = tuple(float(v) for v in self.values)
        if len(years) != len(values):
            raise ValueError("years and values differ in length")
        if any(b <= a for a, b in zip(years, years[1:])):
            raise ValueError("years must be strictly increasing")
        object.__setattr__(self, "years", years)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "unit", Unit(self.unit))
        object.__setattr__(self, "none_policy", NonePolicy.parse(self.none_policy))

    def __len__(self):
        return len(self.years)

    def __iter__(self):
        for year, v in zip(self.years, self.values):
            yield year, TransmissionValue(v, self.unit)

    def at(self, year: int) -> float:
        return self.values[self.years.index(year)]

    def to(self, unit) -> "TransmissionSeries":
        unit = Unit(unit)
        scaled = tuple(TransmissionValue(v, self.unit).to(unit).value for v in self.values)
        return replace(self, values=scaled, unit=unit)


class Direction(str, enum.Enum):
    RISING = "rising"
    FALLING = "falling"
    FLAT = "flat"


@dataclass(frozen=True)
class TrendReport:
    early_mean: float
    late_mean: float
    direction: Direction
    k: int

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "early_mean": self.early_mean,
            "late_mean": self.late_mean,
            "direction": self.direction.value,
        }


def _sorted_unique(records: Sequence[CountRecord]) -> list:
    rows = sorted(records, key=lambda r: r.year)
    for a, b in zip(rows, rows[1:]):
        if a.year == b.year:
            raise DuplicateYear(a.year)
    return rows


def _distribution(rec: CountRecord, policy: NonePolicy):
    table = contingency_from_counts(rec)
    try:
        return distribution_from_table(table, policy)
    except EmptyPopulation as exc:
        if exc.year is None:
            raise EmptyPopulation(rec.year, str(exc)) from None
        raise


def transmission_series(records: Sequence[CountRecord], none_policy=NonePolicy.EXCLUDE,
                        unit=Unit.BIT, source: str = "") -> TransmissionSeries:
    """Trivariate transmission for each year of ``records``.

    Raises InconsistentCounts or EmptyPopulation carrying the offending year.
    """
    policy = NonePolicy.parse(none_policy)
    unit = Unit(unit)
    years, values = [], []
    for rec in _sorted_unique(records):
        t = transmission3_entropy_form(_distribution(rec, policy))
        years.append(rec.year)
        values.append(t.to(unit).value)
    return TransmissionSeries(tuple(years), tuple(values), unit, policy, source)


INDICATOR_COLUMNS = ("year", "Hu", "Hi", "Hg", "Tui", "Tug", "Tig", "Tuig")


def indicator_table(records: Sequence[CountRecord], none_policy=NonePolicy.EXCLUDE,
                    unit=Unit.BIT) -> list:
    """Per-year marginal entropies, bilateral and trilateral transmissions.

    Rows follow ``INDICATOR_COLUMNS``; all values are in ``unit``.
    """
    policy = NonePolicy.parse(none_policy)
    unit = Unit(unit)
    rows = []
    for rec in _sorted_unique(records):
        dist = _distribution(rec, policy)
        hs = marginal_entropies(dist)
        pairs = pairwise_transmissions(dist)
        t3 = transmission3_entropy_form(dist)
        vals = [*hs, pairs[(0, 1)], pairs[(0, 2)], pairs[(1, 2)], t3]
        rows.append((rec.year, *(v.to(unit).value for v in vals)))
    return rows


def moving_average(series: TransmissionSeries, window: int = 2) -> TransmissionSeries:
    """Trailing arithmetic mean over ``window`` consecutive values.

    Output point j averages inputs j .. j+window-1 and is labeled with the
    year of input j+window-1.
    """
    if int(window) != window or window < 1:
        raise InvalidWindow(f"window must be a positive integer, got {window!r}")
    n = len(series)
    if window > n:
        raise WindowTooLarge(f"window {window} exceeds series length {n}")
    vals = series.values
    means = tuple(sum(vals[j:j + window]) / window for j in range(n - window + 1))
    years = series.years[window - 1:]
    return replace(series, years=years, values=means, window=window)


def trend_summary(series: TransmissionSeries, k: int = 3) -> TrendReport:
    """Compare the mean of the first ``k`` values with the mean of the last ``k``."""
    n = len(series)
    if int(k) != k or k < 1 or k > n // 2:
        raise InvalidWindow(f"k must satisfy 1 <= k <= {n // 2}, got {k!r}")
    vals = np.asarray(series.values, dtype=float)
    early = float(vals[:k].mean())
    late = float(vals[-k:].mean())
    diff = late - early
    if abs(diff) < FLAT_TOL:
        direction = Direction.FLAT
    else:
        direction = Direction.RISING if diff > 0 else Direction.FALLING
    return TrendReport(early, late, direction, int(k))

