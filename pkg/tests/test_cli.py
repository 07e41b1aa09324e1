import io
import json
import os
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from triplehelix.cli import main
from triplehelix.ingest import CSV_HEADER, builtin_dataset, parse_count_csv
from triplehelix.report import build_report, parse_series_csv, parse_table_csv
from triplehelix.timeseries import INDICATOR_COLUMNS, moving_average, transmission_series

DATA = Path(__file__).parent / "data"
SVG_NS = "{http://www.w3.org/2000/svg}"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


# -- compute --------------------------------------------------------------------

def test_compute_uspto():
    code, out, _ = run("compute", "--dataset", "uspto_1993_2002")
    assert code == 0
    meta, columns, rows = parse_table_csv(out)
    assert tuple(columns) == INDICATOR_COLUMNS
    assert meta["unit"] == "bit" and meta["none_policy"] == "exclude_none"
    assert len(rows) == 10
    assert all(r[-1] < 0 for r in rows)


def test_compute_millibit_is_exactly_1000x():
    _, bit_out, _ = run("compute", "--dataset", "web_links_1993_2002", "--unit", "bit")
    _, mbit_out, _ = run("--unit", "millibit", "compute", "--dataset", "web_links_1993_2002")
    _, _, bit_rows = parse_table_csv(bit_out)
    meta, _, mbit_rows = parse_table_csv(mbit_out)
    assert meta["unit"] == "millibit"
    for b, m in zip(bit_rows, mbit_rows):
        assert m[0] == b[0]
        assert m[1:] == tuple(v * 1000.0 for v in b[1:])


def test_compute_global_flag_before_subcommand():
    _, a, _ = run("--none-policy", "include", "compute", "--dataset", "uspto_1993_2002")
    _, b, _ = run("compute", "--dataset", "uspto_1993_2002", "--none-policy", "include")
    assert a == b and "include_none" in a


def test_compute_all_zero_file(tmp_path):
    path = tmp_path / "zero.csv"
    path.write_text(f"{CSV_HEADER}\n2000,0,0,0,0,0,0,0,0\n", encoding="utf-8")
    for policy in ("include", "exclude"):
        code, out, err = run("compute", "--file", str(path), "--none-policy", policy)
        assert code != 0
        assert out == ""
        assert "empty" in err and "2000" in err


def test_compute_reports_line_numbers(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(f"{CSV_HEADER}\n2000,1,1,1,0,0,0,0,5\n2001,1,x,1,0,0,0,0,5\n", encoding="utf-8")
    code, _, err = run("compute", "--file", str(path))
    assert code == 1
    assert "line 3, column 3" in err


def test_compute_inconsistent_file(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(f"{CSV_HEADER}\n2000,5,0,0,10,0,0,0,100\n", encoding="utf-8")
    code, _, err = run("compute", "--file", str(path))
    assert code == 1 and "only_u" in err


def test_compute_missing_file(tmp_path):
    code, _, err = run("compute", "--file", str(tmp_path / "nope.csv"))
    assert code == 1 and err.startswith("error:")


# -- report ---------------------------------------------------------------------

def test_report_uspto(tmp_path):
    code, out, _ = run("report", "--dataset", "uspto_1993_2002", "--out", str(tmp_path))
    assert code == 0
    names = {p.name for p in tmp_path.iterdir()}
    assert {"series.csv", "series_smoothed.csv", "trend.json", "shares.csv", "provenance.json",
            "tuig.svg", "shares.svg"} <= names
    _, columns, rows = parse_table_csv((tmp_path / "shares.csv").read_text(encoding="utf-8"))
    shares = {r[0]: r[1] for r in rows}
    assert columns[1] == "u_percent"
    assert round(shares[1993], 2) == 2.77 and round(shares[2002], 2) == 5.00
    assert 1997 in shares
    prov = json.loads((tmp_path / "provenance.json").read_text(encoding="utf-8"))
    assert prov["unit"] == "millibit" and prov["window"] == 2 and prov["dataset"] == "uspto_1993_2002"
    assert any("-0.190" in c and "NOT reproducible" in c for c in prov["caveats"])
    assert "last year" in prov["window_labeling"]


def test_report_series_files_round_trip(tmp_path):
    run("report", "--dataset", "web_text_1993_2002", "--out", str(tmp_path))
    raw = parse_series_csv((tmp_path / "series.csv").read_text(encoding="utf-8"))
    smooth = parse_series_csv((tmp_path / "series_smoothed.csv").read_text(encoding="utf-8"))
    expected = transmission_series(builtin_dataset("web_text_1993_2002").records, unit="millibit",
                                   source="web_text_1993_2002")
    assert raw == expected
    assert smooth == moving_average(expected, 2)


def test_report_trend_directions(tmp_path):
    directions = {}
    for name in ("web_text_1993_2002", "web_links_1993_2002", "uspto_1993_2002"):
        out_dir = tmp_path / name
        assert run("report", "--dataset", name, "--out", str(out_dir))[0] == 0
        trend = json.loads((out_dir / "trend.json").read_text(encoding="utf-8"))
        assert trend["k"] == 3
        directions[name] = trend["direction"]
    assert directions["web_text_1993_2002"] == "falling"
    assert directions["web_links_1993_2002"] == "rising"
    assert directions["uspto_1993_2002"] == "rising"


def test_report_byte_identical_reruns(tmp_path):
    for d in ("a", "b"):
        run("report", "--dataset", "web_links_1993_2002", "--unit", "bit", "--out", str(tmp_path / d))
    for name in os.listdir(tmp_path / "a"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_report_svg_structure(tmp_path):
    run("report", "--dataset", "uspto_1993_2002", "--out", str(tmp_path))
    tuig = ET.parse(tmp_path / "tuig.svg").getroot()
    assert tuig.tag == f"{SVG_NS}svg"
    assert len(tuig.findall(f".//{SVG_NS}polyline")) == 2
    shares = ET.parse(tmp_path / "shares.svg").getroot()
    assert len(shares.findall(f".//{SVG_NS}polyline")) == 3
    for line in tuig.findall(f".//{SVG_NS}polyline"):
        assert len(line.get("points").split()) in (9, 10)


def test_report_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, err = run("report", "--dataset", "uspto_1993_2002", "--out", str(blocker / "sub"))
    assert code == 1 and "cannot write report" in err


def test_report_window_and_k_flags(tmp_path):
    code, _, _ = run("report", "--dataset", "uspto_1993_2002", "--window", "3", "--trend-k", "2",
                     "--out", str(tmp_path))
    assert code == 0
    smooth = parse_series_csv((tmp_path / "series_smoothed.csv").read_text(encoding="utf-8"))
    assert smooth.window == 3 and smooth.years[0] == 1995
    assert json.loads((tmp_path / "trend.json").read_text())["k"] == 2


def test_report_bad_window():
    code, _, err = run("report", "--dataset", "uspto_1993_2002", "--window", "20", "--out", "/tmp/unused-th")
    assert code == 1 and "window" in err


def test_build_report_files_are_complete():
    bundle = build_report(builtin_dataset("web_links_1993_2002"))
    files = bundle.files()
    assert json.loads(files["provenance.json"])["labels"] == [".edu", ".com", ".gov"]
    assert "dataset=web_links_1993_2002" in files["series.csv"]


# -- scan -----------------------------------------------------------------------

def test_scan_text_corpus():
    code, out, err = run("scan", str(DATA / "corpus_text"))
    assert code == 0
    assert "whole document body" in err
    assert [r.row() for r in parse_count_csv(out)] == [(1997, 2, 1, 1, 1, 0, 0, 0, 3)]


def test_scan_link_corpus():
    code, out, _ = run("scan", str(DATA / "corpus_links"), "--mode", "link_domains")
    assert code == 0
    (rec,) = parse_count_csv(out)
    assert (rec.u, rec.i, rec.g, rec.total) == (1, 1, 0, 2)


def test_scan_title_corpus_custom_patterns():
    code, out, _ = run("scan", str(DATA / "corpus_titles"), "--mode", "title_words",
                       "--patterns", "patents", "relations", "industry")
    assert code == 0
    assert parse_count_csv(out)[0].row() == (2002, 1, 1, 1, 0, 1, 0, 0, 3)


def test_scan_empty_directory(tmp_path):
    code, out, _ = run("scan", str(tmp_path))
    assert code == 0 and out == CSV_HEADER + "\n"


def test_scan_missing_years_listed(tmp_path):
    (tmp_path / "a.txt").write_text("university")
    (tmp_path / "b.txt").write_text("industry")
    (tmp_path / "1999_c.txt").write_text("government")
    code, out, err = run("scan", str(tmp_path))
    assert code == 1 and out == ""
    assert "'a.txt'" in err and "'b.txt'" in err and "1999_c" not in err


def test_scan_missing_directory(tmp_path):
    code, _, err = run("scan", str(tmp_path / "none"))
    assert code == 1 and err.startswith("error:")


# -- synth ----------------------------------------------------------------------

def test_synth_uncoupled_analytic_zero():
    code, out, err = run("synth", "--regime", "uncoupled", "--pu", "0.2", "--pi", "0.3", "--pg", "0.6",
                         "--n", "1000")
    assert code == 0
    (rec,) = parse_count_csv(out)
    assert rec.total == 1000
    value = float(err.split("=")[1].split()[0])
    assert abs(value) < 1e-12


def test_synth_bilateral_xor():
    code, _, err = run("synth", "--regime", "bilateral", "--p", "0.5", "--c", "1", "--n", "100")
    assert code == 0
    assert float(err.split("=")[1].split()[0]) == pytest.approx(-1.0, abs=1e-12)
    assert err.strip().endswith("bit")


def test_synth_deterministic(tmp_path):
    args = ("synth", "--regime", "coordinated", "--p", "0.3", "--c", "0.5", "--n", "50000", "--seed", "9")
    first, second = run(*args), run(*args)
    assert first == second
    assert run(*args[:-1], "10")[1] != first[1]
    run(*args, "--out", str(tmp_path))
    assert (tmp_path / "synth.csv").read_text() == first[1]


def test_synth_infeasible():
    code, out, err = run("synth", "--regime", "bilateral", "--pu", "0.6", "--pi", "0.1", "--pg", "0.1",
                         "--c", "0.5")
    assert code == 1 and out == ""
    assert "parity" in err


def test_datasets_listing():
    code, out, _ = run("datasets")
    assert code == 0
    assert [line.split("\t")[0] for line in out.splitlines()] == [
        "uspto_1993_2002", "web_text_1993_2002", "web_links_1993_2002"]
