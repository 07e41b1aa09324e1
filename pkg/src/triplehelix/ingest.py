"""Count-table CSV parsing and the built-in yearly hit-count datasets."""

from __future__ import annotations

from dataclasses import dataclass

from .contingency import DEFAULT_LABELS, CountRecord, validate_counts
from .errors import DuplicateYear, FormatError, UnknownDataset

CSV_HEADER = "year,u,i,g,ui,ug,ig,uig,total"
_COLUMNS = CSV_HEADER.split(",")


def parse_count_csv(text: str, labels=DEFAULT_LABELS) -> list:
    """Parse the count-table CSV format into records, in file order.

    The first line must be exactly ``year,u,i,g,ui,ug,ig,uig,total``; every
    following line holds nine nonnegative integers.  LF and CRLF endings are
    both accepted and trailing blank lines are ignored.
    """
    if text.startswith("\ufeff"):
        text = text[1:]
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines or lines[0].strip() != CSV_HEADER:
        found = lines[0] if lines else ""
        raise FormatError(f"expected header {CSV_HEADER!r}, found {found!r}", line=1)
    records = []
    seen = {}
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.strip().split(",")
        if len(parts) != len(_COLUMNS):
            raise FormatError(f"expected {len(_COLUMNS)} fields, found {len(parts)}", line=lineno)
        values = []
        for col, (name, raw) in enumerate(zip(_COLUMNS, parts), start=1):
            raw = raw.strip()
            if not raw.isdigit() or not raw.isascii():
                raise FormatError(f"{name} must be a nonnegative integer, found {raw!r}",
                                  line=lineno, column=col)
            values.append(int(raw))
        year = values[0]
        if year in seen:
            raise DuplicateYear(year, line=lineno)
        seen[year] = lineno
        records.append(CountRecord(*values, labels=tuple(labels)))
    return records


def render_csv(records) -> str:
    """Inverse of :func:`parse_count_csv`."""
    out = [CSV_HEADER]
    out.extend(",".join(str(v) for v in rec.row()) for rec in records)
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class DatasetDescriptor:
    name: str
    labels: tuple
    source: str
    records: tuple
    total_label: str = "total"
    caveats: tuple = ()

    @property
    def years(self) -> tuple:
        return tuple(r.year for r in self.records)


_USPTO = """\
year,u,i,g,ui,ug,ig,uig,total
1993,3063,9716,2619,401,588,334,63,110540
1994,3359,10568,2855,479,684,390,89,114564
1995,3710,10800,2828,529,771,410,93,114864
1996,4552,12147,3149,703,963,488,114,122953
1997,5406,12699,3604,814,1199,583,168,125884
1998,7623,17068,4708,1254,1658,807,266,166801
1999,8326,18553,4856,1352,1735,844,235,170265
2000,8488,19368,4831,1399,1776,865,267,176350
2001,9190,20812,5136,1591,1868,996,296,184172
2002,9228,21089,5242,1619,1928,1047,352,184531
"""

_WEB_TEXT = """\
year,u,i,g,ui,ug,ig,uig,total
1993,2205,441,1041,49,49,46,25,18437
1994,12722,2178,3579,1007,1174,719,391,135265
1995,66719,13190,21187,5140,6861,4541,2036,640967
1996,216548,45938,66839,16257,21729,15894,6945,2308162
1997,478164,110434,166550,37122,51259,35230,16224,5740624
1998,842665,243611,343066,71306,95478,78922,32318,14379504
1999,1415659,471387,669844,131979,178892,157446,61899,33053057
2000,3005285,975976,1385296,245470,342218,298731,117318,86537251
2001,5381142,2419632,3014141,523922,724722,679407,247734,186175482
2002,10408179,7779754,7301276,1216090,1646210,1567669,550263,492815972
"""

_WEB_LINKS = """\
year,u,i,g,ui,ug,ig,uig,total
1993,721,753,26,32,16,21,13,140631
1994,10653,5969,5070,1281,454,1657,264,155429
1995,58559,85344,63208,16060,4168,30666,2707,971806
1996,185571,213755,40505,52853,13816,15191,9713,4215445
1997,383999,586804,76767,118249,25447,29842,18723,8410235
1998,714592,1512795,206683,177352,49238,59734,33695,21190676
1999,1410789,3372441,341635,346610,92354,126961,63192,42521722
2000,2212642,10057844,577433,622780,194573,244278,151641,92177426
2001,3722856,30497559,1328142,1344270,373437,599161,305180,196204140
2002,8564790,81698935,4035084,3058198,1159347,1758589,757120,501734312
"""

_REGISTRY_SPEC = {
    "uspto_1993_2002": dict(
        labels=DEFAULT_LABELS,
        csv=_USPTO,
        source=("Number of U.S. patents (USPTO full-text search) containing the words "
                "'university', 'industry', 'government' and their AND-combinations, 1993-2002."),
        total_label="Total number of patents",
        caveats=(
            "The yearly counts for 1976-1992 are not available here. The published "
            "1976-1992 level of T_uig = -0.190 +/- 0.008 is therefore NOT reproducible "
            "from this dataset and is not checked.",
            "The term 'industry' retrieves only 10-20% of patents with an industrial "
            "address; the literal search term is kept as the operationalization.",
        ),
    ),
    "web_text_1993_2002": dict(
        labels=DEFAULT_LABELS,
        csv=_WEB_TEXT,
        source=("Free-text hits for 'university', 'industry', 'government' and their "
                "AND-combinations, AltaVista Advanced Search, retrieved 2003-05-15."),
        total_label='"url:*" (total)',
        caveats=(
            "The engine reported a grand total of 1,504,185,772 url:* hits, which exceeds "
            "the sum of the yearly totals; yearly totals are used as populations.",
            "Web counts are time-stamped at retrieval (2003-05-15); earlier pages may have "
            "been overwritten since.",
        ),
    ),
    "web_links_1993_2002": dict(
        labels=(".edu", ".com", ".gov"),
        csv=_WEB_LINKS,
        source=("Hits for pages linking to the .edu, .com and .gov domains and their "
                "AND-combinations, AltaVista Advanced Search, retrieved 2003-05-15."),
        total_label="Link:*(total)",
        caveats=(
            "The .edu and .gov domains are U.S.-specific proxies; .com is used worldwide.",
        ),
    ),
}


def _build(name: str) -> DatasetDescriptor:
    spec = _REGISTRY_SPEC[name]
    records = tuple(parse_count_csv(spec["csv"], labels=spec["labels"]))
    for rec in records:
        report = validate_counts(rec)
        if not report.ok:
            raise ValueError(f"fixture {name} year {rec.year}: {report.violations}")
    return DatasetDescriptor(name, spec["labels"], spec["source"], records,
                             spec["total_label"], spec["caveats"])


DATASET_NAMES = tuple(_REGISTRY_SPEC)
_CACHE: dict = {}


def builtin_dataset(name: str) -> DatasetDescriptor:
    if name not in _REGISTRY_SPEC:
        raise UnknownDataset(f"unknown dataset {name!r}; choose from {', '.join(DATASET_NAMES)}")
    if name not in _CACHE:
        _CACHE[name] = _build(name)
    return _CACHE[name]
