"""Dominance and tolerance measures of regional (ideological) homogeneity."""

from __future__ import annotations

import hashlib
import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .corpus import UNKNOWN, Corpus, default_table, read_two_column
from .diagnostics import INFO, WARNING, emit
from .yindex import publication_credits

WESTERN = "Western"
NON_WESTERN = "non-Western"
UNCLASSIFIED = "unclassified"
INTERNATIONAL = "international"
TOP_K = (5, 10, 20)
DEFAULT_THRESHOLDS = (0.8, 0.1)


@dataclass(frozen=True)
class RegionMap:
    mapping: dict
    default_region: str = UNCLASSIFIED
    source: str = "<default>"

    def __post_init__(self):
        if not self.default_region or any(not label for label in self.mapping.values()):
            raise ValueError("region labels must be non-empty")

    def lookup(self, key: str):
        if key in self.mapping:
            return self.mapping[key]
        return self._lower().get(key.lower())

    def _lower(self):
        return {k.lower(): v for k, v in self.mapping.items()}

    def classify(self, country: str) -> str:
        return self.lookup(country) or self.default_region

    def digest(self) -> str:
        payload = json.dumps([sorted(self.mapping.items()), self.default_region])
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "default_region": self.default_region,
            "digest": self.digest(),
            "mapping": dict(sorted(self.mapping.items())),
        }


def load_region_map(path=None, default_region: str = UNCLASSIFIED) -> RegionMap:
    """Read a ``country<TAB>region`` file; the shipped map when ``path`` is None."""
    if path is None:
        return RegionMap(dict(default_table("regions.tsv")), default_region)
    return RegionMap(dict(read_two_column(path)), default_region, str(path))


def classify_region(country: str, region_map: RegionMap) -> str:
    return region_map.classify(country)


def _majority(counter: Counter, first_seen: dict) -> str | None:
    if not counter:
        return None
    return min(counter, key=lambda c: (-counter[c], first_seen.get(c, 10 ** 9), c))


def _pub_year(pub) -> int:
    return pub.year if pub.year is not None else 10 ** 9


def entity_countries(corpus: Corpus, level: str) -> dict:
    """Home country of each entity.

    Countries map to themselves. Institutions take the majority country of
    their address lines. Authors take the majority country of their own
    affiliation on the publications that credit them, falling back to all
    their publications; ties go to the earliest year, then alphabetically.
    """
    pubs = sorted(corpus.publications, key=_pub_year)
    counts, first_seen = defaultdict(Counter), defaultdict(dict)

    def note(entity, country, pub):
        if country and country != UNKNOWN:
            counts[entity][country] += 1
            first_seen[entity].setdefault(country, _pub_year(pub))

    if level == "country":
        return {c: c for pub in pubs for c in corpus.publication_entities(pub, "country")}
    if level == "institution":
        for pub in pubs:
            entries = list(pub.addresses) + list(pub.reprint_entries)
            for e in entries:
                note(corpus.institution(e.institution_raw), corpus.country(e.country_raw), pub)
        return {e: _majority(c, first_seen[e]) for e, c in counts.items()}

    fallback, fallback_seen = defaultdict(Counter), defaultdict(dict)
    for pub in pubs:
        credited = publication_credits(corpus, pub, "author").entries
        for author in corpus.author_ids(pub):
            countries = corpus.author_entities(pub, author, "country")
            if not countries:
                countries = corpus.first_author_entities(pub, "country")
            for c in countries:
                if c == UNKNOWN:
                    continue
                fallback[author][c] += 1
                fallback_seen[author].setdefault(c, _pub_year(pub))
                if author in credited:
                    note(author, c, pub)
    out = {}
    for author in fallback.keys() | counts.keys():
        if counts.get(author):
            out[author] = _majority(counts[author], first_seen[author])
        else:
            out[author] = _majority(fallback[author], fallback_seen[author])
    return out


def entity_regions(corpus: Corpus, level: str, region_map: RegionMap) -> dict:
    regions = {}
    for entity, country in entity_countries(corpus, level).items():
        explicit = region_map.lookup(entity) if level == "institution" else None
        if explicit:
            regions[entity] = explicit
        elif country is None:
            regions[entity] = region_map.default_region
        else:
            regions[entity] = region_map.classify(country)
    return dict(sorted(regions.items()))


@dataclass
class DominanceStats:
    level: str
    shares: dict
    top_k: dict
    top_entities: list
    total_j: int = 0
    empty: bool = False

    @property
    def max_share(self) -> float:
        return max(self.shares.values(), default=0.0)

    def dominant_region(self):
        if not self.shares:
            return None
        return min(self.shares, key=lambda r: (-self.shares[r], r))

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "shares": dict(sorted(self.shares.items())),
            "top_k": {str(k): dict(sorted(v.items())) for k, v in self.top_k.items()},
            "top_entities": [list(t) for t in self.top_entities],
            "total_j": self.total_j,
            "empty": self.empty,
        }


def dominance(ranked, entity_regions: dict, level: str = "", default_region: str = UNCLASSIFIED) -> DominanceStats:
    """j-mass share and top-k representation of each region among ranked entities."""
    regions = [(y.entity, entity_regions.get(y.entity, default_region)) for y in ranked]
    total = sum(y.j for y in ranked)
    if total == 0:
        return DominanceStats(level, {}, {k: {} for k in TOP_K}, [], 0, empty=True)
    mass = defaultdict(int)
    for y, (_, region) in zip(ranked, regions):
        mass[region] += y.j
    shares = {r: m / total for r, m in sorted(mass.items())}
    top_k = {k: dict(sorted(Counter(r for _, r in regions[:k]).items())) for k in TOP_K}
    return DominanceStats(level, shares, top_k, regions[:max(TOP_K)], total)


@dataclass
class ToleranceStats:
    level: str
    cross_region_edge_weight: int
    total_edge_weight: int
    tolerance_fraction: float
    cross_link_count: int
    cross_edges: list = field(default_factory=list)
    international_edge_count: int = 0

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "cross_region_edge_weight": self.cross_region_edge_weight,
            "total_edge_weight": self.total_edge_weight,
            "tolerance_fraction": self.tolerance_fraction,
            "cross_link_count": self.cross_link_count,
            "cross_edges": [list(e) for e in self.cross_edges],
            "international_edge_count": self.international_edge_count,
        }


def tolerance(network, entity_regions: dict, default_region: str = UNCLASSIFIED) -> ToleranceStats:
    """Share of collaboration weight joining different regions.

    Edges touching an ``international`` entity are left out of both the
    numerator and the denominator and only counted.
    """
    cross, total, international = 0, 0, 0
    cross_edges = []
    for u, v, w in network.edges:
        ru = entity_regions.get(u, default_region)
        rv = entity_regions.get(v, default_region)
        if INTERNATIONAL in (ru, rv):
            international += 1
            continue
        total += w
        if ru != rv:
            cross += w
            cross_edges.append((u, v, w, ru, rv))
    fraction = cross / total if total else 0.0
    return ToleranceStats(network.level, cross, total, fraction, len(cross_edges), cross_edges, international)


def _level_flags(share, fraction, thresholds):
    dmin, tmax = thresholds
    homog, heterog = [], []
    if share is not None:
        homog.append(share >= dmin)
        heterog.append(share < dmin)
    if fraction is not None:
        homog.append(fraction <= tmax)
        heterog.append(fraction > tmax)
    return all(homog), all(heterog)


def decide_verdict(per_level: dict, thresholds=DEFAULT_THRESHOLDS) -> str:
    """``per_level`` maps level -> (max share or None, tolerance fraction or None)."""
    flags = [_level_flags(s, f, thresholds) for s, f in per_level.values()]
    if flags and all(h for h, _ in flags):
        return "homogeneous"
    if flags and all(t for _, t in flags):
        return "heterogeneous"
    return "mixed"


@dataclass
class HomogeneityReport:
    dominance: dict
    tolerance: dict
    thresholds: tuple
    verdict: str
    config: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    networks: dict = field(default_factory=dict)  # level -> network summary

    def to_dict(self) -> dict:
        levels = sorted(set(self.dominance) | set(self.tolerance))
        return {
            "config": self.config,
            "thresholds": {"dominance_min": self.thresholds[0], "tolerance_max": self.thresholds[1]},
            "levels": {
                level: {
                    "dominance": self.dominance[level].to_dict() if level in self.dominance else None,
                    "tolerance": self.tolerance[level].to_dict() if level in self.tolerance else None,
                }
                for level in levels
            },
            "networks": self.networks,
            "verdict": self.verdict,
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def summary_text(self) -> str:
        dmin, tmax = self.thresholds
        lines = [f"verdict: {self.verdict} (dominance_min={dmin}, tolerance_max={tmax})"]
        for level in sorted(set(self.dominance) | set(self.tolerance)):
            lines.append(f"[{level}]")
            dom = self.dominance.get(level)
            if dom is not None:
                shares = ", ".join(f"{r}={s:.3f}" for r, s in sorted(dom.shares.items())) or "no ranked entities"
                lines.append(f"  dominance: {shares}")
            tol = self.tolerance.get(level)
            if tol is not None:
                lines.append(
                    f"  tolerance: {tol.tolerance_fraction:.3f} "
                    f"({tol.cross_region_edge_weight}/{tol.total_edge_weight} weight, "
                    f"{tol.cross_link_count} cross-region links)"
                )
                for u, v, w, ru, rv in tol.cross_edges:
                    lines.append(f"    {u} ({ru}) -- {v} ({rv}): {w}")
        for warning in self.warnings:
            lines.append(f"warning: {warning}")
        return "\n".join(lines) + "\n"


def verdict_from_dict(report: dict) -> str:
    """Recompute the verdict from a serialized report."""
    thresholds = (report["thresholds"]["dominance_min"], report["thresholds"]["tolerance_max"])
    per_level = {}
    for level, stats in report["levels"].items():
        dom, tol = stats["dominance"], stats["tolerance"]
        share = max(dom["shares"].values(), default=0.0) if dom is not None else None
        fraction = tol["tolerance_fraction"] if tol is not None else None
        per_level[level] = (share, fraction)
    return decide_verdict(per_level, thresholds)


def homogeneity_report(dominance_stats: dict, tolerance_stats: dict, thresholds=DEFAULT_THRESHOLDS,
                       config: dict | None = None, diagnostics=None) -> HomogeneityReport:
    """Combine per-level stats into a verdict.

    Homogeneous when every level has a dominant region at or above
    ``dominance_min`` and a tolerance fraction at or below ``tolerance_max``;
    heterogeneous when every level fails both; mixed otherwise.
    """
    thresholds = tuple(thresholds)
    levels = sorted(set(dominance_stats) | set(tolerance_stats))
    if not levels:
        raise ValueError("no level statistics supplied")
    warnings = []
    for level in levels:
        if level not in dominance_stats or level not in tolerance_stats:
            warnings.append(f"level {level!r} is missing dominance or tolerance statistics")
        dom = dominance_stats.get(level)
        if dom is not None and dom.empty:
            warnings.append(f"level {level!r} has no ranked entities; dominance share is 0")
    for w in warnings:
        emit(diagnostics, INFO if "no ranked entities" in w else WARNING, "homogeneity", w)
    per_level = {
        level: (
            dominance_stats[level].max_share if level in dominance_stats else None,
            tolerance_stats[level].tolerance_fraction if level in tolerance_stats else None,
        )
        for level in levels
    }
    return HomogeneityReport(
        dominance={l: dominance_stats[l] for l in levels if l in dominance_stats},
        tolerance={l: tolerance_stats[l] for l in levels if l in tolerance_stats},
        thresholds=thresholds,
        verdict=decide_verdict(per_level, thresholds),
        config=dict(config or {}),
        warnings=warnings,
    )
