"""Command-line interface: ``triplehelix {compute,report,scan,synth,datasets}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .contingency import NonePolicy
from .corpus import ScanMode, ScanSpec, load_corpus, scan_corpus
from .errors import FormatError, MissingYear, TripleHelixError
from .infotheory import Unit, transmission3_entropy_form
from .ingest import DATASET_NAMES, DatasetDescriptor, builtin_dataset, parse_count_csv, render_csv
from .report import build_report, render_table_csv
from .synth import RegimeSpec, regime_distribution, sample_population
from .timeseries import INDICATOR_COLUMNS, indicator_table

DEFAULT_UNIT = {"compute": Unit.BIT, "synth": Unit.BIT, "report": Unit.MILLIBIT}


def _add_global_flags(parser, suppress: bool):
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--none-policy", choices=("include", "exclude"), default=default("exclude"),
                        help="count documents matching none of the terms as an outcome "
                             "(include) or normalize over the union only (exclude; default)")
    parser.add_argument("--unit", choices=[u.value for u in Unit], default=default(None),
                        help="output unit (default: bit, millibit for report)")
    parser.add_argument("--window", type=int, default=default(2),
                        help="moving-average window in years (default 2)")
    parser.add_argument("--trend-k", type=int, default=default(3),
                        help="years averaged at each end for the trend summary (default 3)")
    parser.add_argument("--out", default=default(None), help="output directory")
    parser.add_argument("--seed", type=int, default=default(0), help="random seed (default 0)")


def _add_input(parser):
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("--dataset", choices=DATASET_NAMES, help="built-in dataset")
    src.add_argument("--file", type=Path, help="count CSV with header year,u,i,g,ui,ug,ig,uig,total")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triplehelix",
        description="Trivariate mutual information indicators from overlapping hit counts.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="per-year entropies and transmissions")
    _add_input(p)
    _add_global_flags(p, suppress=True)

    p = sub.add_parser("report", help="write series, smoothed series, trend, shares and SVG charts")
    _add_input(p)
    _add_global_flags(p, suppress=True)

    p = sub.add_parser(
        "scan", help="count term co-occurrences in a directory of documents",
        description="Each file is one document. Its year comes from a sidecar FILE.meta "
                    "('year: 1997', optional 'title: ...') or, failing that, from a "
                    "YYYY_ filename prefix.",
    )
    p.add_argument("corpus", type=Path, help="directory of documents")
    p.add_argument("--mode", choices=[m.value for m in ScanMode], default=ScanMode.FREE_TEXT.value)
    p.add_argument("--patterns", nargs=3, metavar=("U", "I", "G"),
                   help="three terms (text modes) or domain suffixes (link_domains)")
    _add_global_flags(p, suppress=True)

    p = sub.add_parser("synth", help="sample a synthetic population from a coupling regime")
    p.add_argument("--regime", choices=("coordinated", "uncoupled", "bilateral"), required=True)
    p.add_argument("--p", type=float, default=None, help="common marginal probability for all three axes")
    p.add_argument("--pu", type=float, default=None)
    p.add_argument("--pi", type=float, default=None)
    p.add_argument("--pg", type=float, default=None)
    p.add_argument("--c", type=float, default=0.0, help="coupling strength in [0, 1]")
    p.add_argument("--n", type=int, default=10000, help="population size")
    p.add_argument("--hub", type=int, default=0, help="hub axis for the coordinated regime")
    p.add_argument("--year", type=int, default=0)
    _add_global_flags(p, suppress=True)

    sub.add_parser("datasets", help="list built-in datasets")
    return parser


def _load(args) -> DatasetDescriptor:
    if args.dataset:
        return builtin_dataset(args.dataset)
    text = args.file.read_text(encoding="utf-8")
    records = parse_count_csv(text)
    return DatasetDescriptor(args.file.stem, records[0].labels if records else (), str(args.file),
                             tuple(records))


def _unit(args) -> Unit:
    return Unit(args.unit) if args.unit else DEFAULT_UNIT.get(args.command, Unit.BIT)


def cmd_compute(args, out) -> int:
    ds = _load(args)
    unit = _unit(args)
    policy = NonePolicy.parse(args.none_policy)
    rows = indicator_table(ds.records, policy, unit)
    meta = {"dataset": ds.name, "unit": unit.value, "none_policy": policy.value}
    out.write(render_table_csv(INDICATOR_COLUMNS, rows, meta))
    return 0


def cmd_report(args, out) -> int:
    ds = _load(args)
    bundle = build_report(ds, args.none_policy, _unit(args), args.window, args.trend_k)
    out_dir = Path(args.out or "report")
    for path in bundle.write(out_dir):
        out.write(f"{path}\n")
    return 0


def cmd_scan(args, out, err) -> int:
    spec = ScanSpec(args.mode, tuple(args.patterns) if args.patterns else None)
    docs = load_corpus(args.corpus)
    missing = [d.identifier for d in docs if d.year is None]
    if missing:
        for ident in missing:
            err.write(f"error: {MissingYear(ident)}\n")
        return 1
    out.write(render_csv(scan_corpus(docs, spec)))
    scope = {ScanMode.FREE_TEXT: "whole document body", ScanMode.TITLE_WORDS: "title element",
             ScanMode.LINK_DOMAINS: "link target hostnames"}[spec.mode]
    err.write(f"# scanned {len(docs)} documents; mode={spec.mode.value}; matched against {scope}; "
              f"patterns={','.join(spec.patterns)}\n")
    return 0


def cmd_synth(args, out, err) -> int:
    base = 0.5 if args.p is None else args.p
    spec = RegimeSpec(
        regime=args.regime,
        p_u=base if args.pu is None else args.pu,
        p_i=base if args.pi is None else args.pi,
        p_g=base if args.pg is None else args.pg,
        coupling=args.c, n=args.n, seed=args.seed, hub=args.hub,
    )
    dist = regime_distribution(spec)
    rec = sample_population(dist, spec.n, spec.seed, year=args.year)
    analytic = transmission3_entropy_form(dist).to(_unit(args))
    text = render_csv([rec])
    out.write(text)
    err.write(f"analytic_tuig={analytic.value!r} {analytic.unit.value}\n")
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "synth.csv").write_text(text, encoding="utf-8")
        (out_dir / "synth_analytic.txt").write_text(
            f"regime={spec.regime.value} p_u={spec.p_u!r} p_i={spec.p_i!r} p_g={spec.p_g!r} "
            f"coupling={spec.coupling!r} n={spec.n} seed={spec.seed}\n"
            f"analytic_tuig={analytic.value!r} {analytic.unit.value}\n", encoding="utf-8")
    return 0


def cmd_datasets(args, out) -> int:
    for name in DATASET_NAMES:
        ds = builtin_dataset(name)
        out.write(f"{name}\t{ds.years[0]}-{ds.years[-1]}\t{'/'.join(ds.labels)}\t{ds.source}\n")
    return 0


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.command == "compute":
            return cmd_compute(args, out)
        if args.command == "report":
            return cmd_report(args, out)
        if args.command == "scan":
            return cmd_scan(args, out, err)
        if args.command == "synth":
            return cmd_synth(args, out, err)
        return cmd_datasets(args, out)
    except FormatError as exc:
        source = getattr(args, "file", None)
        err.write(f"error: {source}: {exc}\n" if source else f"error: {exc}\n")
    except (TripleHelixError, OSError, ValueError) as exc:
        err.write(f"error: {exc}\n")
    return 1


def _entry():
    sys.exit(main())


if __name__ == "__main__":
    _entry()

