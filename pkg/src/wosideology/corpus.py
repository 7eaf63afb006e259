"""Corpus construction: exclusion filters, name disambiguation, affiliation
normalization, and descriptive statistics."""

from __future__ import annotations

import functools
import re
import unicodedata
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from importlib import resources

from .diagnostics import INFO, WARNING, emit
from .wos_parser import US_COUNTRY_RE, Publication

UNKNOWN = "UNKNOWN"
# half-open year bins reproducing 1991-1995, ..., 2011-2017
DEFAULT_BREAKPOINTS = (1991, 1996, 2001, 2006, 2011, 2018)


class ConfigError(ValueError):
    pass


def read_two_column(path) -> list[tuple[str, str]]:
    """Read a ``raw<TAB>canonical`` table; ``#`` lines and blanks are skipped."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ConfigError(f"{path}:{lineno}: expected two tab-separated columns")
            rows.append((parts[0].strip(), parts[1].strip()))
    return rows


def _data_file(name: str):
    return resources.files("wosideology").joinpath("data").joinpath(name)


@functools.lru_cache(maxsize=None)
def default_table(name: str) -> tuple:
    with resources.as_file(_data_file(name)) as path:
        return tuple(read_two_column(path))


def default_country_table() -> dict:
    return dict(default_table("countries.tsv"))


def default_institution_aliases() -> dict:
    return dict(default_table("institution_aliases.tsv"))


def default_abbreviations() -> dict:
    return dict(default_table("institution_abbreviations.tsv"))


def strip_diacritics(text: str) -> str:
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


@dataclass(frozen=True)
class FilterConfig:
    min_citations: int = 100
    exclude_anonymous: bool = True
    year_range: tuple | None = None

    def __post_init__(self):
        if self.min_citations < 0:
            raise ConfigError("min_citations must be non-negative")
        if self.year_range is not None and self.year_range[0] > self.year_range[1]:
            raise ConfigError("year_range must satisfy from <= to")

    def accepts(self, pub: Publication) -> bool:
        if pub.times_cited < self.min_citations:
            return False
        if self.exclude_anonymous and pub.anonymous:
            return False
        if self.year_range is not None:
            lo, hi = self.year_range
            if pub.year is None or not lo <= pub.year <= hi:
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "min_citations": self.min_citations,
            "exclude_anonymous": self.exclude_anonymous,
            "year_range": list(self.year_range) if self.year_range else None,
        }


@dataclass(frozen=True)
class CanonicalAuthor:
    id: str
    display_name: str
    variants: frozenset


# {{{ names

def normalize_author_name(raw: str) -> str:
    """Reduce a byline name to ``lastname, INITIALS``.

    >>> normalize_author_name("Cumming, Douglas J.")
    'cumming, DJ'
    """
    text = strip_diacritics(raw).strip()
    if "," in text:
        last, given = text.split(",", 1)
    else:
        parts = text.split()
        last, given = (" ".join(parts[:-1]), parts[-1]) if len(parts) > 1 else (text, "")
    last = " ".join(re.sub(r"[^\w\s]", "", last).lower().split())
    initials = ""
    for token in re.split(r"[\s.\-]+", given):
        token = re.sub(r"[^\w]", "", token)
        if not token:
            continue
        initials += token if token.isupper() and token.isalpha() else token[0].upper()
    return f"{last}, {initials}" if initials else last


def _split_key(key: str) -> tuple[str, str]:
    last, _, initials = key.partition(", ")
    return last, initials


def _resolve_keys(keys, overrides: dict, diagnostics=None) -> dict:
    by_last = defaultdict(set)
    for key in keys:
        last, initials = _split_key(key)
        by_last[last].add(initials)

    natural = {}
    for last, group in by_last.items():
        # a key is maximal when no other key in the group extends it
        maximal = {i for i in group if not any(o != i and o.startswith(i) for o in group)}
        for initials in group:
            key = f"{last}, {initials}" if initials else last
            if initials in maximal:
                natural[key] = key
                continue
            targets = sorted(m for m in maximal if m.startswith(initials))
            if len(targets) == 1:
                natural[key] = f"{last}, {targets[0]}"
            else:
                natural[key] = key
                if key not in overrides:
                    emit(diagnostics, INFO, "disambiguation",
                         f"{key!r} left unmerged: compatible with {len(targets)} authors")

    resolved = {}
    for key, target in natural.items():
        if key in overrides:
            target = overrides[key]
        elif target in overrides:
            target = overrides[target]
        resolved[key] = target
    for target in set(resolved.values()):
        resolved.setdefault(target, target)
    return resolved


def _override_keys(overrides) -> dict:
    pinned = {}
    for raw, canonical in overrides or ():
        key, target = normalize_author_name(raw), normalize_author_name(canonical)
        if pinned.get(key, target) != target:
            raise ConfigError(f"conflicting author overrides for {raw!r}")
        pinned[key] = target
    return pinned


def disambiguate_authors(names, overrides=(), diagnostics=None) -> dict:
    """Map raw author strings to canonical author ids.

    Names merge when last names match and one initial string prefixes the
    other, unless the shorter key could extend to more than one author.
    ``names`` may be a :class:`Corpus` or any iterable of raw strings;
    ``overrides`` is a sequence of ``(raw, canonical)`` pairs that always win.
    """
    if isinstance(names, Corpus):
        names = names.raw_author_names()
    names = list(dict.fromkeys(names))
    pinned = _override_keys(overrides)
    keys = {normalize_author_name(n) for n in names}
    resolved = _resolve_keys(keys, pinned, diagnostics)
    mapping = {n: resolved[normalize_author_name(n)] for n in names}
    for target in set(mapping.values()):
        mapping.setdefault(target, target)
    return mapping


# }}}

# {{{ affiliations

def extract_country(raw: str, table: dict | None = None, diagnostics=None) -> str:
    text = (raw or "").strip().rstrip(".").strip()
    if not text:
        return ""
    if US_COUNTRY_RE.search(text):
        return "USA"
    table = default_country_table() if table is None else table
    lookup = {k.lower(): v for k, v in table.items()}
    lookup.update({v.lower(): v for v in table.values()})
    found = lookup.get(text.lower())
    if found is None:
        emit(diagnostics, WARNING, "country", f"unknown country {text!r} passed through")
        return text
    return found


def _clean_institution(text: str, abbreviations: dict) -> str:
    text = re.sub(r"[^\w\s]", " ", strip_diacritics(text).lower())
    return " ".join(abbreviations.get(t, t) for t in text.split())


def normalize_institution(raw: str, aliases: dict | None = None, abbreviations: dict | None = None) -> str:
    abbreviations = default_abbreviations() if abbreviations is None else abbreviations
    aliases = default_institution_aliases() if aliases is None else aliases
    key = _clean_institution(raw or "", abbreviations)
    table = {_clean_institution(k, abbreviations): _clean_institution(v, abbreviations)
             for k, v in aliases.items()}
    return table.get(key, key)


# }}}


@dataclass
class Corpus:
    publications: list
    canonical_authors: dict
    institutions: dict
    countries: dict
    filter_config: FilterConfig = field(default_factory=FilterConfig)
    display_names: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)

    def raw_author_names(self) -> list[str]:
        return _raw_author_names(self.publications)

    def author_id(self, raw: str) -> str:
        found = self.canonical_authors.get(raw)
        if found is not None:
            return found
        key = normalize_author_name(raw)
        return self.canonical_authors.get(key, key)

    def author_ids(self, pub: Publication) -> list[str]:
        """Distinct canonical authors of ``pub`` in byline order."""
        return list(dict.fromkeys(self.author_id(a) for a in pub.authors))

    def institution(self, raw: str) -> str:
        return self.institutions.get(raw) or UNKNOWN

    def country(self, raw: str) -> str:
        return self.countries.get(raw) or UNKNOWN

    def authors(self) -> dict:
        variants = defaultdict(set)
        for raw, cid in self.canonical_authors.items():
            variants[cid].add(raw)
        return {
            cid: CanonicalAuthor(cid, self.display_names.get(cid, cid), frozenset(v))
            for cid, v in sorted(variants.items())
        }

    def entity(self, level: str, institution_raw: str, country_raw: str) -> str:
        if level == "institution":
            return self.institution(institution_raw)
        return self.country(country_raw)

    def linked_addresses(self, pub: Publication, author: str) -> list:
        """C1 entries whose bracketed author list names ``author``."""
        return [a for a in pub.addresses
                if any(self.author_id(name) == author for name in a.linked_authors)]

    def first_author_entities(self, pub: Publication, level: str) -> list[str]:
        """Distinct institutions or countries credited to the first author.

        Resolution order: bracketed C1 match, then a reprint entry naming the
        first author, then the first C1 segment.
        """
        if not pub.authors:
            return []
        first = self.author_id(pub.authors[0])
        linked = self.linked_addresses(pub, first)
        if linked:
            pairs = [(a.institution_raw, a.country_raw) for a in linked]
        else:
            rp = [r for r in pub.reprint_entries if self.author_id(r.author) == first]
            if rp:
                pairs = [(r.institution_raw, r.country_raw) for r in rp[:1]]
            elif pub.addresses:
                pairs = [(pub.addresses[0].institution_raw, pub.addresses[0].country_raw)]
            else:
                return []
        return list(dict.fromkeys(self.entity(level, i, c) for i, c in pairs))

    def author_entities(self, pub: Publication, author: str, level: str) -> list[str]:
        """Institutions or countries carried by one author on ``pub``.

        Without bracketed links every address is attributed to every author.
        """
        linked = self.linked_addresses(pub, author)
        if not linked and not any(a.linked_authors for a in pub.addresses):
            linked = list(pub.addresses)
        if not linked:
            rp = [r for r in pub.reprint_entries if self.author_id(r.author) == author]
            return list(dict.fromkeys(self.entity(level, r.institution_raw, r.country_raw) for r in rp))
        return list(dict.fromkeys(self.entity(level, a.institution_raw, a.country_raw) for a in linked))

    def publication_entities(self, pub: Publication, level: str) -> list[str]:
        """Distinct entities of a publication at ``level`` (byline order for authors)."""
        if level == "author":
            return self.author_ids(pub)
        pairs = [(a.institution_raw, a.country_raw) for a in pub.addresses]
        if not pairs:
            pairs = [(r.institution_raw, r.country_raw) for r in pub.reprint_entries]
        return [e for e in dict.fromkeys(self.entity(level, i, c) for i, c in pairs) if e != UNKNOWN]


def _raw_author_names(pubs) -> list[str]:
    names = []
    for pub in pubs:
        names.extend(pub.authors)
        names.extend(pub.full_names)
        names.extend(r.author for r in pub.reprint_entries)
        for a in pub.addresses:
            names.extend(a.linked_authors)
    return list(dict.fromkeys(names))


def _display_names(pubs, mapping) -> dict:
    full, short = defaultdict(Counter), defaultdict(Counter)
    for pub in pubs:
        for name in pub.full_names:
            full[mapping[name]][name] += 1
        for name in pub.authors:
            short[mapping[name]][name] += 1
    out = {}
    for cid in set(mapping.values()):
        counts = full.get(cid) or short.get(cid)
        if counts:
            out[cid] = min(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]
        else:
            out[cid] = cid
    return out


def apply_exclusions(pubs, cfg: FilterConfig | None = None, author_overrides=(),
                     country_table=None, institution_aliases=None, diagnostics=None) -> Corpus:
    """Filter publications and build the canonical author/affiliation maps."""
    cfg = cfg or FilterConfig()
    diagnostics = [] if diagnostics is None else diagnostics
    kept = [p for p in pubs if cfg.accepts(p)]
    if not kept:
        emit(diagnostics, WARNING, "filter", "no publications passed the exclusion criteria")

    names = _raw_author_names(kept)
    mapping = disambiguate_authors(names, author_overrides, diagnostics)
    for name in names:
        mapping.setdefault(normalize_author_name(name), mapping[name])

    institutions, countries = {}, {}
    aliases = default_institution_aliases() if institution_aliases is None else institution_aliases
    for pub in kept:
        entries = list(pub.addresses) + list(pub.reprint_entries)
        for e in entries:
            if e.institution_raw not in institutions:
                institutions[e.institution_raw] = normalize_institution(e.institution_raw, aliases)
            if e.country_raw not in countries:
                countries[e.country_raw] = extract_country(e.country_raw, country_table, diagnostics)

    return Corpus(
        publications=kept,
        canonical_authors=mapping,
        institutions=institutions,
        countries=countries,
        filter_config=cfg,
        display_names=_display_names(kept, mapping),
        diagnostics=diagnostics,
    )


@dataclass(frozen=True)
class Stats:
    n_publications: int
    doc_types: dict
    n_authors: int
    n_single_authored_authors: int

    def to_dict(self) -> dict:
        return {
            "publications": self.n_publications,
            "doc_types": dict(self.doc_types),
            "authors": self.n_authors,
            "single_authored_authors": self.n_single_authored_authors,
        }


def corpus_stats(corpus: Corpus) -> Stats:
    doc_types = Counter(p.doc_type.value for p in corpus.publications)
    authors, single = set(), set()
    for pub in corpus.publications:
        ids = corpus.author_ids(pub)
        authors.update(ids)
        if len(ids) == 1:
            single.update(ids)
    return Stats(len(corpus.publications), dict(sorted(doc_types.items())), len(authors), len(single))


@dataclass(frozen=True)
class Period:
    label: str
    start: int | None
    end: int | None  # exclusive
    count: int
    mean_citations: float


def _period(label, start, end, pubs) -> Period:
    mean = sum(p.times_cited for p in pubs) / len(pubs) if pubs else 0.0
    return Period(label, start, end, len(pubs), mean)


def summarize_timeline(corpus: Corpus, breakpoints=DEFAULT_BREAKPOINTS) -> list[Period]:
    """Bin publications into half-open year periods ``[b_i, b_{i+1})``.

    Publications before the first or after the last breakpoint get edge
    periods, and those without a year an ``unknown`` bucket; these extra
    periods only appear when non-empty.
    """
    bps = list(breakpoints)
    if len(bps) < 2 or any(b >= a for b, a in zip(bps, bps[1:])):
        raise ValueError("breakpoints must be strictly increasing (at least two)")
    bins = defaultdict(list)
    for pub in corpus.publications:
        if pub.year is None:
            bins["unknown"].append(pub)
        elif pub.year < bps[0]:
            bins["before"].append(pub)
        elif pub.year >= bps[-1]:
            bins["after"].append(pub)
        else:
            i = max(k for k in range(len(bps) - 1) if bps[k] <= pub.year)
            bins[i].append(pub)
    out = []
    if bins["before"]:
        out.append(_period(f"<{bps[0]}", None, bps[0], bins["before"]))
    for i in range(len(bps) - 1):
        out.append(_period(f"{bps[i]}-{bps[i + 1] - 1}", bps[i], bps[i + 1], bins[i]))
    if bins["after"]:
        out.append(_period(f">={bps[-1]}", bps[-1], None, bins["after"]))
    if bins["unknown"]:
        out.append(_period("unknown", None, None, bins["unknown"]))
    return out
