"""Hit counting over a local document corpus.

Mimics a Boolean search engine: a document counts once for a term when the
term occurs anywhere in the searched field, and AND-queries count documents
matching every conjunct.  Three fields can be searched: body text, the
title, or the hostnames of outbound links.
"""

from __future__ import annotations

import enum
import html
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence
from urllib.parse import urlsplit

from .contingency import DEFAULT_LABELS, CountRecord, merge_records
from .errors import MissingYear

LINK_PATTERNS = (".edu", ".com", ".gov")

_TITLE_RE = re.compile(r"<title\b[^>]*>(.*?)</title\s*>", re.IGNORECASE | re.DOTALL)
_TAG_RE = re.compile(r"<[^>]*>")
_MARKUP_RE = re.compile(r"<(?:[a-zA-Z][a-zA-Z0-9]*|!|/)")
_HREF_RE = re.compile(r"""\bhref\s*=\s*(?:"([^"]*)"|'([^']*)'|([^\s>"']+))""", re.IGNORECASE)
_BARE_URL_RE = re.compile(r"""\b[a-zA-Z][a-zA-Z0-9+.-]*://[^\s<>"']+""")
_YEAR_PREFIX_RE = re.compile(r"^(\d{4})_")


class ScanMode(str, enum.Enum):
    FREE_TEXT = "free_text"
    TITLE_WORDS = "title_words"
    LINK_DOMAINS = "link_domains"


@dataclass(frozen=True)
class Document:
    identifier: str
    year: int | None
    body: str = ""
    title: str | None = None
    links: tuple | None = None


@dataclass(frozen=True)
class ScanSpec:
    mode: ScanMode = ScanMode.FREE_TEXT
    patterns: tuple | None = None

    def __post_init__(self):
        mode = ScanMode(self.mode)
        patterns = self.patterns
        if patterns is None:
            patterns = LINK_PATTERNS if mode is ScanMode.LINK_DOMAINS else DEFAULT_LABELS
        patterns = tuple(patterns)
        if len(patterns) != 3:
            raise ValueError(f"exactly three patterns are required, got {len(patterns)}")
        if any(not str(p).strip() for p in patterns):
            raise ValueError("patterns must be nonempty")
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "patterns", tuple(str(p).strip() for p in patterns))


def is_markup(text: str) -> bool:
    return bool(_MARKUP_RE.search(text))


def _collapse(text: str) -> str:
    return " ".join(text.split())


def extract_title(doc: Document) -> str | None:
    """Title of ``doc``: the first ``<title>`` element for markup, else the sidecar title."""
    if is_markup(doc.body):
        m = _TITLE_RE.search(doc.body)
        if m is not None:
            title = _collapse(html.unescape(_TAG_RE.sub(" ", m.group(1))))
            return title or None
    if doc.title is not None:
        title = _collapse(doc.title)
        return title or None
    return None


def _link_targets(doc: Document) -> list:
    if doc.links is not None:
        return list(doc.links)
    if is_markup(doc.body):
        return [html.unescape(next(g for g in m.groups() if g is not None))
                for m in _HREF_RE.finditer(doc.body)]
    return _BARE_URL_RE.findall(doc.body)


def _hostname(target: str) -> str | None:
    target = target.strip()
    if target.startswith("//"):
        target = "http:" + target
    try:
        host = urlsplit(target).hostname
    except ValueError:
        return None
    if not host:
        return None
    return host.rstrip(".").lower()


def suffix_matches(host: str, suffix: str) -> bool:
    """True when ``host`` ends with ``suffix`` on a label boundary."""
    suffix = suffix.lower().strip(".")
    if not suffix:
        return False
    return host == suffix or host.endswith("." + suffix)


def extract_link_domains(doc: Document, patterns: Sequence[str] = LINK_PATTERNS) -> set:
    """The subset of ``patterns`` matched by the hostname of some outbound link.

    Relative and otherwise unparseable links are skipped.
    """
    hosts = {h for h in map(_hostname, _link_targets(doc)) if h}
    return {p for p in patterns if any(suffix_matches(h, p) for h in hosts)}


def _word_regex(term: str) -> re.Pattern:
    # word boundary: any non-alphanumeric character or the string edge
    return re.compile(r"(?<![^\W_])" + re.escape(term) + r"(?![^\W_])", re.IGNORECASE)


def _matcher(spec: ScanSpec):
    if spec.mode is ScanMode.LINK_DOMAINS:
        def match(doc):
            found = extract_link_domains(doc, spec.patterns)
            return tuple(p in found for p in spec.patterns)
        return match

    regexes = [_word_regex(p) for p in spec.patterns]

    def match(doc):
        text = doc.body if spec.mode is ScanMode.FREE_TEXT else extract_title(doc)
        if not text:
            return (False, False, False)
        return tuple(bool(r.search(text)) for r in regexes)
    return match


def scan_corpus(docs: Iterable[Document], spec: ScanSpec = ScanSpec()) -> list:
    """One CountRecord per year present in ``docs``, sorted by year.

    Raises MissingYear for the first document without a year.
    """
    match = _matcher(spec)
    records = []
    for doc in docs:
        if doc.year is None:
            raise MissingYear(doc.identifier)
        u, i, g = match(doc)
        records.append(CountRecord(
            year=int(doc.year), u=int(u), i=int(i), g=int(g),
            ui=int(u and i), ug=int(u and g), ig=int(i and g), uig=int(u and i and g),
            total=1, labels=spec.patterns,
        ))
    return merge_records(records)


# -- corpus directories ------------------------------------------------------

META_SUFFIX = ".meta"


def read_meta(path: Path) -> dict:
    """Parse a ``key: value`` sidecar file; keys are lower-cased."""
    meta = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        if ":" not in line:
            continue
        key, _, value = line.partition(":")
        meta[key.strip().lower()] = value.strip()
    return meta


def _year_of(path: Path, meta: dict):
    raw = meta.get("year")
    if raw:
        try:
            return int(raw)
        except ValueError:
            return None
    m = _YEAR_PREFIX_RE.match(path.name)
    return int(m.group(1)) if m else None


def load_document(path) -> Document:
    path = Path(path)
    meta_path = path.with_name(path.name + META_SUFFIX)
    meta = read_meta(meta_path) if meta_path.is_file() else {}
    body = path.read_text(encoding="utf-8", errors="replace")
    return Document(path.name, _year_of(path, meta), body, meta.get("title"))


def load_corpus(directory) -> list:
    """Every regular file in ``directory`` (sidecar ``.meta`` files excluded), by name."""
    directory = Path(directory)
    names = sorted(os.listdir(directory))
    return [load_document(directory / n) for n in names
            if not n.endswith(META_SUFFIX) and (directory / n).is_file()]
