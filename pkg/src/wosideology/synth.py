"""Synthetic corpora with planted regions and communities.

The generator writes a tagged-format export and parses it back, so every
fixture built here also exercises the parser.  The returned
:class:`GroundTruth` is the generator's own trace.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass, field

import numpy as np

from .corpus import ConfigError, FilterConfig, apply_exclusions, extract_country, normalize_author_name
from .wos_parser import RawRecord, read_export, record_to_publication, serialize_export

SYLLABLES = ("ka", "lo", "mi", "ne", "ru", "sa", "ti", "vo", "ze", "ba", "do", "fe", "gu", "ha", "ji", "ko")
GIVEN = ("Anna", "Boris", "Clara", "David", "Elena", "Farid", "Greta", "Hiro",
         "Ines", "Jonas", "Kira", "Luis", "Maya", "Nils", "Omar", "Priya")
US_STATES = ("MA 02139", "CA 94305", "PA 19104", "IL 60637", "MN 55455", "NY 10012")


@dataclass(frozen=True)
class RegionSpec:
    label: str
    n_authors: int
    countries: tuple


@dataclass(frozen=True)
class SynthSpec:
    seed: int = 0
    n_pubs: int = 100
    regions: tuple = (RegionSpec("Western", 20, ("USA", "England", "Canada")),)
    groups: tuple | None = None  # author-count sizes; default one group per region
    p_in: float = 0.9
    p_out: float = 0.1
    citation_range: tuple = (100, 1000)
    year_range: tuple = (1991, 2017)
    team_size: tuple = (1, 4)
    corresponding_policy: str = "first_author"
    institutions_per_country: int = 3

    def __post_init__(self):
        if self.n_pubs <= 0:
            raise ConfigError("n_pubs must be positive")
        if not self.regions or any(r.n_authors <= 0 or not r.countries for r in self.regions):
            raise ConfigError("every region needs a positive author count and a country pool")
        for p in (self.p_in, self.p_out):
            if not 0.0 <= p <= 1.0:
                raise ConfigError("probabilities must lie in [0, 1]")
        if self.p_in + self.p_out == 0:
            raise ConfigError("p_in and p_out cannot both be zero")
        if self.corresponding_policy not in ("first_author", "random_coauthor"):
            raise ConfigError(f"unknown corresponding_policy {self.corresponding_policy!r}")
        lo, hi = self.team_size
        if lo < 1 or hi < lo:
            raise ConfigError("team_size must satisfy 1 <= min <= max")
        if self.citation_range[0] > self.citation_range[1] or self.citation_range[0] < 0:
            raise ConfigError("invalid citation_range")
        if self.year_range[0] > self.year_range[1]:
            raise ConfigError("invalid year_range")
        if self.groups is not None:
            if any(g <= 0 for g in self.groups) or sum(self.groups) != self.n_authors:
                raise ConfigError("group sizes must be positive and sum to the author count")

    @property
    def n_authors(self) -> int:
        return sum(r.n_authors for r in self.regions)

    @classmethod
    def from_dict(cls, data: dict) -> "SynthSpec":
        data = dict(data)
        data["regions"] = tuple(
            RegionSpec(r["label"], int(r["n_authors"]), tuple(r["countries"])) for r in data.get("regions", ())
        ) or cls.regions
        for key in ("groups", "citation_range", "year_range", "team_size"):
            if data.get(key) is not None:
                data[key] = tuple(data[key])
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "SynthSpec":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class GroundTruth:
    export_text: str
    author_region: dict
    author_country: dict
    communities: list
    true_fp: dict
    true_rp: dict
    pair_weights: Counter = field(default_factory=Counter)
    realized_cross_fraction: float = 0.0
    author_institution: dict = field(default_factory=dict)
    teams: list = field(default_factory=list)  # (byline keys, corresponding key) per publication

    def cross_fraction(self, min_edge_weight: int = 1) -> float:
        """Cross-region share of co-authorship weight among pairs kept at the threshold."""
        total = cross = 0
        for (u, v), w in self.pair_weights.items():
            if w < min_edge_weight:
                continue
            total += w
            if self.author_region[u] != self.author_region[v]:
                cross += w
        return cross / total if total else 0.0

    def to_dict(self) -> dict:
        return {
            "author_region": dict(sorted(self.author_region.items())),
            "author_country": dict(sorted(self.author_country.items())),
            "communities": self.communities,
            "true_fp": dict(sorted(self.true_fp.items())),
            "true_rp": dict(sorted(self.true_rp.items())),
            "realized_cross_fraction": self.realized_cross_fraction,
            "pair_weights": [[u, v, w] for (u, v), w in sorted(self.pair_weights.items())],
            "author_institution": dict(sorted(self.author_institution.items())),
            "teams": [[list(t), c] for t, c in self.teams],
        }


def _surname(k: int, width: int) -> str:
    digits = []
    for _ in range(width):
        k, r = divmod(k, len(SYLLABLES))
        digits.append(SYLLABLES[r])
    return "".join(reversed(digits)).capitalize()


def _address_country(country: str, rng) -> str:
    if country == "USA":
        return f"{US_STATES[int(rng.integers(len(US_STATES)))]} USA"
    return country


@dataclass
class _Author:
    au: str
    af: str
    key: str
    region: str
    country: str
    address: str
    group: int
    institution: str


def _make_authors(spec: SynthSpec, rng) -> list:
    width = 3
    while len(SYLLABLES) ** width < spec.n_authors:
        width += 1
    sizes = spec.groups or tuple(r.n_authors for r in spec.regions)
    group_of = [g for g, size in enumerate(sizes) for _ in range(size)]
    authors = []
    k = 0
    for region in spec.regions:
        for _ in range(region.n_authors):
            surname = _surname(k, width)
            first = GIVEN[int(rng.integers(len(GIVEN)))]
            middle = chr(ord("A") + int(rng.integers(26)))
            country = region.countries[int(rng.integers(len(region.countries)))]
            inst = f"Univ {country} {int(rng.integers(spec.institutions_per_country)) + 1}"
            address = f"{inst}, City {k % 7 + 1}, {_address_country(country, rng)}"
            au = f"{surname}, {first[0]}{middle}"
            authors.append(_Author(au, f"{surname}, {first} {middle}.", normalize_author_name(au),
                                   region.label, extract_country(country), address, group_of[k], inst))
            k += 1
    return authors


def _pick_team(spec: SynthSpec, authors, members, rng) -> list:
    n = len(authors)
    lead = int(rng.integers(n))
    size = min(int(rng.integers(spec.team_size[0], spec.team_size[1] + 1)), n)
    team = [lead]
    g = authors[lead].group
    stay = spec.p_in / (spec.p_in + spec.p_out)
    while len(team) < size:
        if len(members) == 1 or rng.random() < stay:
            pool = [a for a in members[g] if a not in team]
        else:
            pool = [a for h, m in enumerate(members) if h != g for a in m if a not in team]
        if not pool:
            pool = [a for a in range(n) if a not in team]
        team.append(pool[int(rng.integers(len(pool)))])
    return team


def _record(i: int, spec: SynthSpec, authors, team, corresponding, rng) -> RawRecord:
    by_address = defaultdict(list)
    for a in team:
        by_address[authors[a].address].append(authors[a].af)
    c1 = tuple(f"[{'; '.join(names)}] {address}" for address, names in by_address.items())
    rp_author = authors[corresponding]
    fields = (
        ("PT", ("J",)),
        ("AU", tuple(authors[a].au for a in team)),
        ("AF", tuple(authors[a].af for a in team)),
        ("TI", (f"Synthetic study {i + 1} of venture financing",)),
        ("SO", ("JOURNAL OF SYNTHETIC FINANCE",)),
        ("C1", c1),
        ("RP", (f"{rp_author.au} (corresponding author), {rp_author.address}.",)),
        ("DT", ("Article",)),
        ("PY", (str(int(rng.integers(spec.year_range[0], spec.year_range[1] + 1))),)),
        ("TC", (str(int(rng.integers(spec.citation_range[0], spec.citation_range[1] + 1))),)),
        ("UT", (f"WOS:{spec.seed % 10 ** 6:06d}{i + 1:09d}",)),
    )
    return RawRecord(fields)


def generate_export(spec: SynthSpec) -> tuple[str, GroundTruth]:
    rng = np.random.default_rng(spec.seed)
    authors = _make_authors(spec, rng)
    n_groups = max(a.group for a in authors) + 1
    members = [[k for k, a in enumerate(authors) if a.group == g] for g in range(n_groups)]

    records = []
    fp, rp = Counter(), Counter()
    pairs = Counter()
    cross = total = 0
    teams = []
    for i in range(spec.n_pubs):
        team = _pick_team(spec, authors, members, rng)
        if spec.corresponding_policy == "first_author":
            corresponding = team[0]
        else:
            corresponding = team[int(rng.integers(len(team)))]
        records.append(_record(i, spec, authors, team, corresponding, rng))
        teams.append((tuple(authors[a].key for a in team), authors[corresponding].key))
        fp[authors[team[0]].key] += 1
        rp[authors[corresponding].key] += 1
        for a, b in itertools.combinations(sorted(team), 2):
            u, v = sorted((authors[a].key, authors[b].key))
            pairs[u, v] += 1
            total += 1
            cross += authors[a].region != authors[b].region

    text = serialize_export(records)
    truth = GroundTruth(
        export_text=text,
        author_region={a.key: a.region for a in authors},
        author_country={a.key: a.country for a in authors},
        communities=[[authors[k].key for k in m] for m in members],
        true_fp=dict(fp),
        true_rp=dict(rp),
        pair_weights=pairs,
        realized_cross_fraction=cross / total if total else 0.0,
        author_institution={a.key: a.institution for a in authors},
        teams=teams,
    )
    return text, truth


def generate_corpus(spec: SynthSpec, diagnostics=None):
    """Generate an export, parse it, and return ``(corpus, ground_truth)``.

    The corpus keeps every generated publication (citation filter at 0).
    """
    text, truth = generate_export(spec)
    export = read_export(text.encode("utf-8"))
    if diagnostics is not None:
        diagnostics.extend(export.diagnostics)
    pubs = [record_to_publication(r, diagnostics) for r in export.records]
    corpus = apply_exclusions(pubs, FilterConfig(min_citations=0), diagnostics=diagnostics)
    return corpus, truth


def spec_to_dict(spec: SynthSpec) -> dict:
    data = asdict(spec)
    data["regions"] = [dict(label=r.label, n_authors=r.n_authors, countries=list(r.countries)) for r in spec.regions]
    return data
