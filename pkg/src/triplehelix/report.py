"""Report bundle: series CSVs, trend summary, share series and SVG charts.

Every output is a pure function of its inputs (no timestamps), so reruns
with the same flags are byte-identical.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape

from . import __version__
from .contingency import NonePolicy, share_series
from .errors import FormatError, OutputError
from .infotheory import Unit
from .ingest import DatasetDescriptor
from .timeseries import TransmissionSeries, moving_average, transmission_series, trend_summary

SMOOTHING_LABEL = "trailing mean; each window labeled by its last year"


def fmt(x: float) -> str:
    """Shortest round-tripping text for a float."""
    return repr(float(x))


def render_meta(meta: dict) -> str:
    return "# " + " ".join(f"{k}={v}" for k, v in meta.items())


def render_table_csv(columns, rows, meta: dict | None = None) -> str:
    lines = [render_meta(meta)] if meta else []
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(str(row[0]) if j == 0 else fmt(v) for j, v in enumerate(row)))
    return "\n".join(lines) + "\n"


def parse_table_csv(text: str):
    """Parse a table written by :func:`render_table_csv`.

    Returns ``(meta, columns, rows)``; the first column is an integer year and
    the rest are floats.  ``# key=value`` lines before the header fill ``meta``.
    """
    meta, columns, rows = {}, None, []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            for item in line[1:].split():
                key, sep, value = item.partition("=")
                if sep:
                    meta[key] = value
            continue
        parts = line.split(",")
        if columns is None:
            columns = parts
            continue
        if len(parts) != len(columns):
            raise FormatError(f"expected {len(columns)} fields, found {len(parts)}", line=lineno)
        try:
            rows.append((int(parts[0]), *(float(p) for p in parts[1:])))
        except ValueError as exc:
            raise FormatError(str(exc), line=lineno) from None
    if columns is None:
        raise FormatError("missing header", line=1)
    return meta, columns, rows


def series_csv(series: TransmissionSeries, name: str = "tuig") -> str:
    meta = {"unit": series.unit.value, "none_policy": series.none_policy.value,
            "window": series.window}
    if series.source:
        meta["dataset"] = series.source
    column = f"{name}_{series.unit.value}"
    return render_table_csv(("year", column), zip(series.years, series.values), meta)


def parse_series_csv(text: str) -> TransmissionSeries:
    meta, columns, rows = parse_table_csv(text)
    if len(columns) != 2:
        raise FormatError("a series has exactly two columns", line=1)
    unit = Unit(meta.get("unit", columns[1].rsplit("_", 1)[-1]))
    return TransmissionSeries(
        years=tuple(r[0] for r in rows),
        values=tuple(r[1] for r in rows),
        unit=unit,
        none_policy=meta.get("none_policy", NonePolicy.EXCLUDE.value),
        source=meta.get("dataset", ""),
        window=int(meta.get("window", 1)),
    )


# -- SVG -----------------------------------------------------------------------

_PALETTE = ("#1f4e79", "#c0504d", "#4f8a3c", "#7f6084")


def svg_line_chart(title: str, series: list, y_label: str = "",
                   width: int = 640, height: int = 400) -> str:
    """Self-contained SVG line chart; one ``<polyline>`` per ``(name, xs, ys)``."""
    left, right, top, bottom = 70, 150, 40, 50
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys]
    x0, x1 = min(xs_all), max(xs_all)
    y0, y1 = min(ys_all), max(ys_all)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        pad = abs(y0) * 0.1 or 1.0
        y0, y1 = y0 - pad, y1 + pad
    pw, ph = width - left - right, height - top - bottom

    def sx(x):
        return left + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return top + (y1 - y) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<title>{escape(title)}</title>',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14">{escape(title)}</text>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    if y0 < 0 < y1:
        out.append(f'<line x1="{left}" y1="{sy(0):.2f}" x2="{left + pw}" y2="{sy(0):.2f}" '
                   f'stroke="#999999" stroke-dasharray="4 3"/>')
    for x in sorted(set(xs_all)):
        out.append(f'<text x="{sx(x):.2f}" y="{top + ph + 18}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="10">{x}</text>')
    for j in range(5):
        y = y0 + (y1 - y0) * j / 4
        out.append(f'<text x="{left - 6}" y="{sy(y) + 3:.2f}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="10">{y:.4g}</text>')
    if y_label:
        out.append(f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
                   f'font-size="11" transform="rotate(-90 16 {top + ph / 2:.1f})">{escape(y_label)}</text>')
    for k, (name, xs, ys) in enumerate(series):
        colour = _PALETTE[k % len(_PALETTE)]
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="2" points="{pts}">'
                   f'<title>{escape(name)}</title></polyline>')
        ly = top + 14 + 18 * k
        out.append(f'<line x1="{left + pw + 12}" y1="{ly}" x2="{left + pw + 32}" y2="{ly}" '
                   f'stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 36}" y="{ly + 4}" font-family="sans-serif" '
                   f'font-size="11">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- bundle --------------------------------------------------------------------

@dataclass
class ReportBundle:
    series: str
    smoothed: str
    trend: str
    shares: str
    provenance: dict
    charts: dict = field(default_factory=dict)

    def files(self) -> dict:
        out = {
            "series.csv": self.series,
            "series_smoothed.csv": self.smoothed,
            "trend.json": self.trend,
            "shares.csv": self.shares,
            "provenance.json": json.dumps(self.provenance, indent=2, sort_keys=True) + "\n",
        }
        out.update(self.charts)
        return out

    def write(self, out_dir) -> list:
        """Write every file atomically; returns the written paths."""
        out_dir = Path(out_dir)
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
            written = []
            for name, text in self.files().items():
                fd, tmp = tempfile.mkstemp(dir=out_dir, prefix=f".{name}.")
                try:
                    with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                        fh.write(text)
                    os.chmod(tmp, 0o644)
                    os.replace(tmp, out_dir / name)
                except BaseException:
                    if os.path.exists(tmp):
                        os.unlink(tmp)
                    raise
                written.append(out_dir / name)
        except OSError as exc:
            raise OutputError(f"cannot write report to {out_dir}: {exc.strerror or exc}") from exc
        return written


def build_report(dataset: DatasetDescriptor, none_policy=NonePolicy.EXCLUDE, unit=Unit.MILLIBIT,
                 window: int = 2, trend_k: int = 3) -> ReportBundle:
    policy = NonePolicy.parse(none_policy)
    unit = Unit(unit)
    raw = transmission_series(dataset.records, policy, unit, source=dataset.name)
    smooth = moving_average(raw, window)
    trend = trend_summary(raw, trend_k)

    fields_ = ("u", "i", "g")
    shares = [share_series(dataset.records, f) for f in fields_]
    share_cols = ["year"] + [f"{f}_percent" for f in fields_]
    share_rows = [(y, *(s.percents[j] for s in shares)) for j, y in enumerate(shares[0].years)]
    shares_text = render_table_csv(share_cols, share_rows,
                                   {"dataset": dataset.name, "unit": "percent"})

    trend_doc = {"dataset": dataset.name, "unit": unit.value, "none_policy": policy.value,
                 "series": "raw", **trend.as_dict()}

    provenance = {
        "tool": "triplehelix",
        "version": __version__,
        "dataset": dataset.name,
        "source": dataset.source,
        "labels": list(dataset.labels),
        "total_column": dataset.total_label,
        "none_policy": policy.value,
        "unit": unit.value,
        "window": window,
        "window_labeling": SMOOTHING_LABEL,
        "trend_k": trend_k,
        "years": [dataset.years[0], dataset.years[-1]] if dataset.years else [],
        "caveats": list(dataset.caveats),
    }

    label = f"T_uig ({unit.value})"
    charts = {
        "tuig.svg": svg_line_chart(
            f"Trivariate transmission, {dataset.name}",
            [("T_uig", raw.years, raw.values),
             (f"{window}-year moving average", smooth.years, smooth.values)],
            y_label=label),
        "shares.svg": svg_line_chart(
            f"Share of documents by term, {dataset.name}",
            [(f"{s.label or s.field} %", s.years, s.percents) for s in shares],
            y_label="percent of total"),
    }
    return ReportBundle(
        series=series_csv(raw),
        smoothed=series_csv(smooth),
        trend=json.dumps(trend_doc, indent=2) + "\n",
        shares=shares_text,
        provenance=provenance,
        charts=charts,
    )
