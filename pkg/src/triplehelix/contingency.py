"""Overlapping Boolean hit counts and the 2x2x2 tables they imply.

A search engine's AND query returns the size of an intersection, so a
year's counts (U, I, G, UI, UG, IG, UIG, total) are turned into the eight
disjoint presence/absence cells by inclusion-exclusion.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, fields
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyPopulation, InconsistentCounts
from .infotheory import JointDistribution

DEFAULT_LABELS = ("university", "industry", "government")
COUNT_FIELDS = ("u", "i", "g", "ui", "ug", "ig", "uig")

# (u, i, g) index of each disjoint cell
CELL_INDEX = {
    "only_u": (1, 0, 0),
    "only_i": (0, 1, 0),
    "only_g": (0, 0, 1),
    "ui_only": (1, 1, 0),
    "ug_only": (1, 0, 1),
    "ig_only": (0, 1, 1),
    "uig": (1, 1, 1),
    "none": (0, 0, 0),
}
CELL_ORDER = tuple(CELL_INDEX)


class NonePolicy(str, enum.Enum):
    """Whether documents matching none of the three terms form an outcome."""

    INCLUDE = "include_none"
    EXCLUDE = "exclude_none"

    @classmethod
    def parse(cls, value) -> "NonePolicy":
        if isinstance(value, cls):
            return value
        value = str(value).lower()
        for member in cls:
            if value in (member.value, member.value.split("_")[0]):
                return member
        raise ValueError(f"unknown none policy {value!r}")


@dataclass(frozen=True)
class CountRecord:
    year: int
    u: int
    i: int
    g: int
    ui: int
    ug: int
    ig: int
    uig: int
    total: int
    labels: tuple = field(default=DEFAULT_LABELS, compare=False)

    def counts(self) -> tuple:
        return tuple(getattr(self, f) for f in COUNT_FIELDS)

    @property
    def union(self) -> int:
        return self.u + self.i + self.g - self.ui - self.ug - self.ig + self.uig

    def row(self) -> tuple:
        return (self.year, *self.counts(), self.total)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate_counts(rec: CountRecord) -> ValidationReport:
    """Check a record for the constraints any real set of hit counts obeys."""
    problems = []
    for name in ("year", *COUNT_FIELDS, "total"):
        if not isinstance(getattr(rec, name), (int, np.integer)):
            problems.append(f"{name} is not an integer")
    if problems:
        return ValidationReport(tuple(problems))
    for name in (*COUNT_FIELDS, "total"):
        if getattr(rec, name) < 0:
            problems.append(f"{name} is negative")
    for pair, (a, b) in {"ui": ("u", "i"), "ug": ("u", "g"), "ig": ("i", "g")}.items():
        for single in (a, b):
            if getattr(rec, pair) > getattr(rec, single):
                problems.append(f"pairwise {pair} exceeds singleton {single}")
    for pair in ("ui", "ug", "ig"):
        if rec.uig > getattr(rec, pair):
            problems.append(f"triple uig exceeds pairwise {pair}")
    if rec.union > rec.total:
        problems.append("union of the three sets exceeds total")
    for name, value in _cells(rec).items():
        if value < 0:
            problems.append(f"derived cell {name} is negative")
    return ValidationReport(tuple(dict.fromkeys(problems)))


def _cells(rec: CountRecord) -> dict:
    return {
        "only_u": rec.u - rec.ui - rec.ug + rec.uig,
        "only_i": rec.i - rec.ui - rec.ig + rec.uig,
        "only_g": rec.g - rec.ug - rec.ig + rec.uig,
        "ui_only": rec.ui - rec.uig,
        "ug_only": rec.ug - rec.uig,
        "ig_only": rec.ig - rec.uig,
        "uig": rec.uig,
        "none": rec.total - rec.union,
    }


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """Eight disjoint cell counts indexed ``cells[u, i, g]``."""

    cells: np.ndarray
    labels: tuple = DEFAULT_LABELS
    year: int | None = None

    def __post_init__(self):
        c = np.array(self.cells, dtype=np.int64)
        if c.shape != (2, 2, 2):
            raise ValueError(f"cells must have shape (2, 2, 2), got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "cells", c)

    @property
    def total(self) -> int:
        return int(self.cells.sum())

    def cell(self, name: str) -> int:
        return int(self.cells[CELL_INDEX[name]])

    def as_tuple(self) -> tuple:
        """Cells in the order only-U, only-I, only-G, UI, UG, IG, UIG, none."""
        return tuple(self.cell(n) for n in CELL_ORDER)

    def __eq__(self, other):
        if not isinstance(other, ContingencyTable):
            return NotImplemented
        return np.array_equal(self.cells, other.cells) and self.labels == other.labels


def contingency_from_counts(rec: CountRecord) -> ContingencyTable:
    cells = np.zeros((2, 2, 2), dtype=np.int64)
    for name, value in _cells(rec).items():
        if value < 0:
            raise InconsistentCounts(name, value, rec.year)
        cells[CELL_INDEX[name]] = value
    return ContingencyTable(cells, rec.labels, rec.year)


def counts_from_table(table: ContingencyTable, year: int | None = None) -> CountRecord:
    """Re-aggregate disjoint cells into overlapping hit counts."""
    c = table.cells
    return CountRecord(
        year=table.year if year is None else year,
        u=int(c[1].sum()),
        i=int(c[:, 1].sum()),
        g=int(c[:, :, 1].sum()),
        ui=int(c[1, 1].sum()),
        ug=int(c[1, :, 1].sum()),
        ig=int(c[:, 1, 1].sum()),
        uig=int(c[1, 1, 1]),
        total=int(c.sum()),
        labels=table.labels,
    )


def distribution_from_table(table: ContingencyTable, none_policy=NonePolicy.INCLUDE) -> JointDistribution:
    """Relative cell frequencies.

    With ``exclude_none`` the none-cell is dropped and the remaining seven
    cells are normalized over the union of the three sets.
    """
    policy = NonePolicy.parse(none_policy)
    cells = table.cells.astype(float)
    if policy is NonePolicy.EXCLUDE:
        cells[0, 0, 0] = 0.0
    denom = cells.sum()
    if denom <= 0:
        detail = "union of the three sets is empty" if policy is NonePolicy.EXCLUDE else "population is empty"
        raise EmptyPopulation(table.year, detail)
    return JointDistribution(cells / denom)


@dataclass(frozen=True)
class PercentSeries:
    field: str
    years: tuple
    percents: tuple
    label: str = ""

    def __iter__(self):
        return iter(zip(self.years, self.percents))

    def __len__(self):
        return len(self.years)

    def at(self, year: int) -> float:
        return self.percents[self.years.index(year)]


def share_series(records: Sequence[CountRecord], field: str) -> PercentSeries:
    """Percentage of the yearly population carrying ``field`` (e.g. ``"u"``)."""
    if field not in COUNT_FIELDS:
        raise ValueError(f"field must be one of {COUNT_FIELDS}, got {field!r}")
    rows = sorted(records, key=lambda r: r.year)
    percents = []
    for rec in rows:
        if rec.total <= 0:
            raise EmptyPopulation(rec.year)
        percents.append(100.0 * getattr(rec, field) / rec.total)
    label = ""
    if rows and len(field) == 1:
        label = rows[0].labels["uig".index(field)]
    return PercentSeries(field, tuple(r.year for r in rows), tuple(percents), label)


def merge_records(records: Iterable[CountRecord]) -> list:
    """Sum records that share a year; result sorted by year.

    Addition is associative and commutative, so shards can be merged in any
    order.
    """
    merged = {}
    for rec in records:
        prev = merged.get(rec.year)
        if prev is None:
            merged[rec.year] = rec
            continue
        sums = {f.name: getattr(prev, f.name) + getattr(rec, f.name)
                for f in fields(CountRecord) if f.name not in ("year", "labels")}
        merged[rec.year] = CountRecord(year=rec.year, labels=prev.labels, **sums)
    return [merged[y] for y in sorted(merged)]
