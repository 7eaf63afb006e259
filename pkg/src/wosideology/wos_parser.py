"""Web of Science export parsing.

Handles the tagged plain-text export (two-character field tags, three-space
continuation lines, ``ER`` record terminators and an ``EF`` end-of-file
marker) as well as the tab-delimited export, and normalizes raw records into
:class:`Publication` objects.
"""

from __future__ import annotations

import enum
import hashlib
import os
import re
from dataclasses import dataclass, field

from .diagnostics import INFO, WARNING, emit

TAG_RE = re.compile(r"^([A-Z0-9]{2})(?: (.*))?$")
CONTINUATION = "   "
HEADER_TAGS = frozenset({"FN", "VR"})
DEFAULT_HEADER = ("FN Clarivate Analytics Web of Science", "VR 1.0")

# one logical value per line; everything else is free text joined by a space
MULTI_VALUED_TAGS = frozenset(
    {"AU", "AF", "BA", "BF", "CA", "GP", "BE", "C1", "C3", "CR", "EM", "RI", "OI"}
)
CORRESPONDING_MARKER = re.compile(r"\(corresponding author\)", re.IGNORECASE)
US_COUNTRY_RE = re.compile(r"(?:^|\s)USA$")


class EmptyExportError(ValueError):
    """Raised when an export contains no complete record."""


class DocType(str, enum.Enum):
    ARTICLE = "article"
    REVIEW = "review"
    PROCEEDINGS_PAPER = "proceedings_paper"
    EDITORIAL = "editorial"
    BOOK = "book"
    BOOK_CHAPTER = "book_chapter"
    OTHER = "other"


DOC_TYPES = {
    "article": DocType.ARTICLE,
    "review": DocType.REVIEW,
    "proceedings paper": DocType.PROCEEDINGS_PAPER,
    "editorial material": DocType.EDITORIAL,
    "editorial": DocType.EDITORIAL,
    "book": DocType.BOOK,
    "book chapter": DocType.BOOK_CHAPTER,
}


@dataclass(frozen=True)
class RawRecord:
    fields: tuple  # ((tag, (line, ...)), ...)
    source_span: tuple = ("<stream>", 0, 0)

    def tags(self) -> list[str]:
        return [tag for tag, _ in self.fields]

    def values(self, tag: str) -> list[str]:
        for t, lines in self.fields:
            if t == tag:
                return list(lines)
        return []

    def value(self, tag: str) -> str | None:
        """Joined field value, or None when the tag is absent."""
        lines = self.values(tag)
        if not lines:
            return None
        return " ".join(line.strip() for line in lines).strip()


@dataclass(frozen=True)
class AddressEntry:
    linked_authors: tuple
    institution_raw: str
    country_raw: str
    full_text: str


@dataclass(frozen=True)
class ReprintEntry:
    author: str
    institution_raw: str
    country_raw: str


@dataclass(frozen=True)
class Publication:
    id: str
    title: str = ""
    year: int | None = None
    doc_type: DocType = DocType.OTHER
    source: str = ""
    times_cited: int = 0
    language: str = ""
    authors: tuple = ()
    full_names: tuple = ()
    addresses: tuple = ()
    reprint_entries: tuple = ()

    @property
    def anonymous(self) -> bool:
        return not self.authors


@dataclass
class ExportFile:
    header: list = field(default_factory=list)
    records: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)


def _read_text(source) -> tuple[str, str]:
    if isinstance(source, (str, os.PathLike)):
        name = os.fspath(source)
        with open(name, "rb") as fh:
            data = fh.read()
    elif isinstance(source, (bytes, bytearray)):
        name, data = "<bytes>", bytes(source)
    else:
        name = getattr(source, "name", "<stream>")
        data = source.read()
    if isinstance(data, str):
        text = data.lstrip("﻿")
    else:
        text = data.decode("utf-8-sig")
    return str(name), text


def read_export(source) -> ExportFile:
    """Parse an export into header lines, records and diagnostics.

    ``source`` may be a path, raw bytes or an open (binary or text) file.
    """
    name, text = _read_text(source)
    lines = text.splitlines()
    first = next((line for line in lines if line.strip()), "")
    if "\t" in first:
        result = _read_tab_delimited(lines, name)
    else:
        result = _read_tagged(lines, name)
    if not result.records:
        raise EmptyExportError(f"empty export: no records in {name}")
    return result


def parse_export(source) -> tuple[list[RawRecord], list]:
    result = read_export(source)
    return result.records, result.diagnostics


def _read_tagged(lines, name) -> ExportFile:
    out = ExportFile()
    current = None  # list of [tag, [lines]] for the open record
    start = 0
    seen_ef = False
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip()
        if not line:
            continue
        loc = f"{name}:{lineno}"
        if line.startswith(CONTINUATION):
            if current:
                current[-1][1].append(line[len(CONTINUATION):])
            else:
                emit(out.diagnostics, WARNING, loc, "malformed line: continuation without a field tag")
            continue
        m = TAG_RE.match(line)
        if m is None:
            emit(out.diagnostics, WARNING, loc, f"malformed line: {line[:40]!r}")
            continue
        tag, value = m.group(1), m.group(2) or ""
        if tag == "ER":
            if current is None:
                emit(out.diagnostics, WARNING, loc, "ER without an open record")
                continue
            fields = tuple((t, tuple(v)) for t, v in current)
            out.records.append(RawRecord(fields, (name, start, lineno)))
            current = None
        elif tag == "EF":
            if current is not None:
                emit(out.diagnostics, WARNING, loc, "record not terminated by ER")
                current = None
            seen_ef = True
        elif current is None and tag in HEADER_TAGS:
            out.header.append(line)
        else:
            if current is None:
                current, start = [], lineno
                seen_ef = False
            current.append([tag, [value]])
    end = f"{name}:{len(lines)}"
    if current is not None:
        emit(out.diagnostics, WARNING, end, "record not terminated by ER")
    if not seen_ef:
        emit(out.diagnostics, WARNING, end, "missing EF")
    return out


def _split_multi(value: str) -> list[str]:
    """Split a ``;``-separated cell, ignoring separators inside ``[...]``."""
    parts, depth, buf = [], 0, []
    for ch in value:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth = max(depth - 1, 0)
        if ch == ";" and depth == 0:
            parts.append("".join(buf).strip())
            buf = []
        else:
            buf.append(ch)
    parts.append("".join(buf).strip())
    return [p for p in parts if p]


def _read_tab_delimited(lines, name) -> ExportFile:
    out = ExportFile()
    rows = iter(enumerate(lines, 1))
    _, head = next((i, l) for i, l in rows if l.strip())
    tags = [t.strip() for t in head.split("\t")]
    for lineno, line in rows:
        if not line.strip():
            continue
        cells = line.split("\t")
        if len(cells) > len(tags):
            emit(out.diagnostics, WARNING, f"{name}:{lineno}", "row has more cells than header")
        fields = []
        for tag, cell in zip(tags, cells):
            cell = cell.strip()
            if not cell or not TAG_RE.match(tag):
                continue
            values = _split_multi(cell) if tag in MULTI_VALUED_TAGS else [cell]
            fields.append((tag, tuple(values)))
        if fields:
            out.records.append(RawRecord(tuple(fields), (name, lineno, lineno)))
    return out


def serialize_record(record: RawRecord) -> str:
    out = []
    for tag, lines in record.fields:
        first, *rest = lines or ("",)
        out.append(f"{tag} {first}".rstrip())
        out.extend(f"{CONTINUATION}{line}".rstrip() for line in rest)
    out.append("ER")
    return "\n".join(out) + "\n"


def serialize_export(records, header=DEFAULT_HEADER) -> str:
    """Write records back out in the tagged plain-text format."""
    parts = [line + "\n" for line in header]
    for record in records:
        parts.append(serialize_record(record) + "\n")
    parts.append("EF\n")
    return "".join(parts)


def _country_token(token: str) -> str:
    token = token.strip().rstrip(".").strip()
    if US_COUNTRY_RE.search(token):
        return "USA"
    return token


def _address_tokens(address: str) -> list[str]:
    return [t.strip() for t in address.strip().strip(",").rstrip(".").split(",") if t.strip()]


def parse_addresses(c1_lines, diagnostics=None, location="C1") -> list[AddressEntry]:
    entries = []
    for line in c1_lines:
        segment = line.strip()
        if not segment:
            continue
        linked: tuple = ()
        address = segment
        if segment.startswith("["):
            close = segment.find("]")
            if close < 0:
                emit(diagnostics, WARNING, location, f"unbalanced bracket in address: {segment[:40]!r}")
                address = segment[1:]
            else:
                linked = tuple(n.strip() for n in segment[1:close].split(";") if n.strip())
                address = segment[close + 1:]
        tokens = _address_tokens(address)
        if not tokens:
            emit(diagnostics, WARNING, location, f"address without text: {segment[:40]!r}")
            continue
        entries.append(AddressEntry(linked, tokens[0], _country_token(tokens[-1]), segment))
    return entries


def parse_reprint(rp_text, diagnostics=None, location="RP") -> list[ReprintEntry]:
    """Split a reprint-address field into one entry per corresponding author."""
    text = (rp_text or "").strip()
    if not text:
        return []
    markers = list(CORRESPONDING_MARKER.finditer(text))
    if not markers:
        emit(diagnostics, WARNING, location, "reprint address without '(corresponding author)'")
        return []
    entries = []
    names = text[:markers[0].start()]
    for i, m in enumerate(markers):
        tail_end = markers[i + 1].start() if i + 1 < len(markers) else len(text)
        tail = text[m.end():tail_end]
        if i + 1 < len(markers):
            address, sep, next_names = tail.partition(";")
            if not sep:
                emit(diagnostics, WARNING, location, "adjacent corresponding-author clauses without ';'")
                address, next_names = "", tail
        else:
            address, next_names = tail, ""
        tokens = _address_tokens(address)
        for name in (n.strip() for n in names.split(";")):
            if not name:
                emit(diagnostics, WARNING, location, "corresponding-author clause without a name")
                continue
            if tokens:
                entries.append(ReprintEntry(name, tokens[0], _country_token(tokens[-1])))
            else:
                emit(diagnostics, WARNING, location, f"no address for corresponding author {name!r}")
        names = next_names
    return entries


def map_doc_type(dt: str | None) -> DocType:
    if not dt:
        return DocType.OTHER
    primary = dt.split(";")[0].strip().lower()
    return DOC_TYPES.get(primary, DocType.OTHER)


def synthesize_id(first_author: str, year, title: str) -> str:
    key = f"{first_author}|{year if year is not None else ''}|{title}".encode("utf-8")
    return "SYN:" + hashlib.sha1(key).hexdigest()[:16]


def _int_or_none(value):
    if value is None:
        return None
    try:
        return int(value.strip())
    except ValueError:
        return None


def record_to_publication(record: RawRecord, diagnostics=None) -> Publication:
    name, first_line, _ = record.source_span
    loc = f"{name}:{first_line}"
    authors = tuple(a.strip() for a in record.values("AU") if a.strip())
    full_names = tuple(a.strip() for a in record.values("AF") if a.strip())
    if not authors:
        authors = full_names
    if not authors:
        emit(diagnostics, INFO, loc, "anonymous record (no AU/AF)")

    tc = _int_or_none(record.value("TC"))
    if tc is None or tc < 0:
        emit(diagnostics, WARNING, loc, "missing or invalid TC; defaulting to 0")
        tc = 0
    year = _int_or_none(record.value("PY"))
    title = record.value("TI") or ""
    ut = record.value("UT")
    pub_id = ut or synthesize_id(authors[0] if authors else "", year, title)

    return Publication(
        id=pub_id,
        title=title,
        year=year,
        doc_type=map_doc_type(record.value("DT")),
        source=record.value("SO") or "",
        times_cited=tc,
        language=record.value("LA") or "",
        authors=authors,
        full_names=full_names,
        addresses=tuple(parse_addresses(record.values("C1"), diagnostics, loc)),
        reprint_entries=tuple(parse_reprint(record.value("RP"), diagnostics, loc)),
    )


def load_publications(sources, diagnostics=None) -> list[Publication]:
    """Parse one or more export files into publications, in file order."""
    pubs = []
    for source in sources:
        records, diags = parse_export(source)
        if diagnostics is not None:
            diagnostics.extend(diags)
        pubs.extend(record_to_publication(r, diagnostics) for r in records)
    return pubs


def publication_to_dict(pub: Publication) -> dict:
    return {
        "id": pub.id,
        "title": pub.title,
        "year": pub.year,
        "doc_type": pub.doc_type.value,
        "source": pub.source,
        "times_cited": pub.times_cited,
        "language": pub.language,
        "authors": list(pub.authors),
        "full_names": list(pub.full_names),
        "addresses": [
            {
                "linked_authors": list(a.linked_authors),
                "institution_raw": a.institution_raw,
                "country_raw": a.country_raw,
                "full_text": a.full_text,
            }
            for a in pub.addresses
        ],
        "reprint_entries": [
            {"author": r.author, "institution_raw": r.institution_raw, "country_raw": r.country_raw}
            for r in pub.reprint_entries
        ],
    }
