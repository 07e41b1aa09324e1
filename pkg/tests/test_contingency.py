import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from goldens import PUBLISHED_TABLES, published_rows
from triplehelix.contingency import (
    CountRecord,
    NonePolicy,
    contingency_from_counts,
    counts_from_table,
    distribution_from_table,
    merge_records,
    share_series,
    validate_counts,
)
from triplehelix.errors import EmptyPopulation, InconsistentCounts
from triplehelix.infotheory import marginalize

USPTO_1993 = CountRecord(1993, 3063, 9716, 2619, 401, 588, 334, 63, 110540)


def all_fixture_records():
    return [CountRecord(*row) for name in PUBLISHED_TABLES for row in published_rows(name)]


@st.composite
def valid_records(draw):
    """Random consistent records, built from nonnegative disjoint cells."""
    cells = draw(st.lists(st.integers(0, 10**7), min_size=8, max_size=8))
    table = np.array(cells).reshape(2, 2, 2)
    return counts_from_table_like(table, draw(st.integers(1900, 2100)))


def counts_from_table_like(cells, year):
    # aggregate by explicit set membership, independent of counts_from_table
    tot = {k: 0 for k in ("u", "i", "g", "ui", "ug", "ig", "uig")}
    for (u, i, g), n in np.ndenumerate(cells):
        n = int(n)
        tot["u"] += n * u
        tot["i"] += n * i
        tot["g"] += n * g
        tot["ui"] += n * u * i
        tot["ug"] += n * u * g
        tot["ig"] += n * i * g
        tot["uig"] += n * u * i * g
    return CountRecord(year, total=int(cells.sum()), **tot)


# -- validate_counts ----------------------------------------------------------

def test_validate_table3_1993_row():
    assert validate_counts(CountRecord(1993, 721, 753, 26, 32, 16, 21, 13, 140631)).ok


def test_validate_pairwise_exceeding_singleton():
    report = validate_counts(CountRecord(0, 5, 0, 0, 10, 0, 0, 0, 100))
    assert not report.ok
    assert any("pairwise ui exceeds singleton u" in v for v in report.violations)


def test_validate_empty_population():
    assert validate_counts(CountRecord(0, 0, 0, 0, 0, 0, 0, 0, 0)).ok


def test_validate_flags_union_above_total_and_negative():
    report = validate_counts(CountRecord(0, 10, 10, 0, 0, 0, 0, 0, 15))
    assert "union of the three sets exceeds total" in report.violations
    assert not validate_counts(CountRecord(0, -1, 0, 0, 0, 0, 0, 0, 5)).ok


def test_validate_flags_triple_exceeding_pairwise():
    report = validate_counts(CountRecord(0, 10, 10, 10, 2, 5, 5, 3, 100))
    assert "triple uig exceeds pairwise ui" in report.violations


def test_every_fixture_row_validates():
    records = all_fixture_records()
    assert len(records) == 30
    for rec in records:
        assert validate_counts(rec).ok, rec


# -- contingency_from_counts --------------------------------------------------

def test_uspto_1993_cells():
    table = contingency_from_counts(USPTO_1993)
    assert table.as_tuple() == (2137, 9044, 1760, 338, 525, 271, 63, 96402)
    assert table.total == 110540


def test_zero_record_all_in_none_cell():
    table = contingency_from_counts(CountRecord(0, 0, 0, 0, 0, 0, 0, 0, 42))
    assert table.as_tuple() == (0, 0, 0, 0, 0, 0, 0, 42)


def test_full_bilateral_overlap():
    table = contingency_from_counts(CountRecord(0, 10, 10, 0, 10, 0, 0, 0, 10))
    assert table.as_tuple() == (0, 0, 0, 10, 0, 0, 0, 0)


def test_inconsistent_counts_name_the_cell():
    with pytest.raises(InconsistentCounts) as info:
        contingency_from_counts(CountRecord(1999, 5, 0, 0, 10, 0, 0, 0, 100))
    assert info.value.cell == "only_u"
    assert info.value.year == 1999


def test_fixture_round_trip():
    for rec in all_fixture_records():
        assert counts_from_table(contingency_from_counts(rec)) == rec


@given(valid_records())
@settings(max_examples=300)
def test_round_trip_random(rec):
    table = contingency_from_counts(rec)
    assert (table.cells >= 0).all()
    assert counts_from_table(table) == rec


# -- distribution_from_table --------------------------------------------------

def test_include_none_triple_cell_probability():
    d = distribution_from_table(contingency_from_counts(USPTO_1993), NonePolicy.INCLUDE)
    assert d.probabilities[1, 1, 1] == pytest.approx(63 / 110540, rel=1e-15)
    assert d.probabilities[1, 1, 1] == pytest.approx(5.6993e-4, rel=1e-4)
    assert d.probabilities.sum() == pytest.approx(1.0, abs=1e-15)


def test_exclude_none_renormalizes_over_union():
    table = contingency_from_counts(USPTO_1993)
    d = distribution_from_table(table, "exclude_none")
    union = 110540 - 96402
    assert d.probabilities[0, 0, 0] == 0.0
    assert d.probabilities[1, 1, 1] == pytest.approx(63 / union, rel=1e-15)


def test_exclude_none_empty_union():
    table = contingency_from_counts(CountRecord(0, 0, 0, 0, 0, 0, 0, 0, 50))
    with pytest.raises(EmptyPopulation):
        distribution_from_table(table, NonePolicy.EXCLUDE)


def test_include_none_empty_population():
    with pytest.raises(EmptyPopulation):
        distribution_from_table(contingency_from_counts(CountRecord(0, *[0] * 8)))


def test_include_none_marginals_equal_hit_shares():
    for rec in all_fixture_records():
        d = distribution_from_table(contingency_from_counts(rec), NonePolicy.INCLUDE)
        for axis, count in enumerate((rec.u, rec.i, rec.g)):
            assert marginalize(d, [axis]).probabilities[1] == pytest.approx(count / rec.total, rel=1e-15, abs=1e-15)


@pytest.mark.parametrize("value,expected", [
    ("include", NonePolicy.INCLUDE), ("exclude_none", NonePolicy.EXCLUDE), ("EXCLUDE", NonePolicy.EXCLUDE),
])
def test_none_policy_parse(value, expected):
    assert NonePolicy.parse(value) is expected


# -- share_series ---------------------------------------------------------------

def test_university_share_uspto():
    records = [CountRecord(*row) for row in published_rows("uspto_1993_2002")]
    series = share_series(records, "u")
    assert series.at(1993) == pytest.approx(100 * 3063 / 110540)
    assert round(series.at(1993), 2) == 2.77
    assert round(series.at(2002), 2) == 5.00
    assert series.label == "university"


def test_share_series_sorted_and_full_share():
    recs = [CountRecord(2001, 4, 0, 0, 0, 0, 0, 0, 4), CountRecord(2000, 1, 0, 0, 0, 0, 0, 0, 4)]
    series = share_series(recs, "u")
    assert series.years == (2000, 2001)
    assert series.percents == (25.0, 100.0)


def test_share_series_zero_total():
    with pytest.raises(EmptyPopulation) as info:
        share_series([CountRecord(1995, 0, 0, 0, 0, 0, 0, 0, 0)], "u")
    assert info.value.year == 1995


def test_merge_records_is_additive():
    a = CountRecord(2000, 1, 2, 3, 1, 1, 1, 1, 10)
    b = CountRecord(2000, 2, 0, 1, 0, 1, 0, 0, 5)
    c = CountRecord(1999, 1, 1, 1, 0, 0, 0, 0, 3)
    merged = merge_records([a, c, b])
    assert merged == [c, CountRecord(2000, 3, 2, 4, 1, 2, 1, 1, 15)]
    assert merge_records([b, c, a]) == merged
