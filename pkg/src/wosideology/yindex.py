"""First-author / corresponding-author credit tallies and Y-indexes."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

from .corpus import UNKNOWN, Corpus
from .diagnostics import INFO, emit

LEVELS = ("author", "institution", "country")
EQUAL_SHARE_ANGLE = math.pi / 4


class UndefinedAngleError(ValueError):
    """Raised for an entity with neither first nor corresponding credits."""


@dataclass
class CreditLedger:
    level: str
    entries: dict = field(default_factory=dict)  # entity -> (fp, rp)

    def add(self, entity: str, fp: int = 0, rp: int = 0) -> None:
        if not fp and not rp:
            return
        old_fp, old_rp = self.entries.get(entity, (0, 0))
        self.entries[entity] = (old_fp + fp, old_rp + rp)

    def merge(self, other: "CreditLedger") -> "CreditLedger":
        if other.level != self.level:
            raise ValueError("cannot merge ledgers of different levels")
        out = CreditLedger(self.level, dict(self.entries))
        for entity, (fp, rp) in other.entries.items():
            out.add(entity, fp, rp)
        return out


@dataclass(frozen=True)
class YIndex:
    entity: str
    fp: int
    rp: int
    j: int
    h: float
    x: float
    y: float

    @property
    def h_display(self) -> str:
        return f"{self.h:.3f}"


def compute_y_index(fp: int, rp: int, entity: str = "") -> YIndex:
    """Y-index of one entity: ``j = fp + rp`` and ``h = atan(rp / fp)``.

    ``h`` is 0 for purely first-author output and pi/2 for purely
    corresponding output; (x, y) = (j cos h, j sin h) on the polar plot.
    """
    if fp < 0 or rp < 0:
        raise ValueError("fp and rp must be non-negative")
    if fp == 0 and rp == 0:
        raise UndefinedAngleError("undefined h: fp = rp = 0")
    j = fp + rp
    h = math.atan2(rp, fp)
    return YIndex(entity, fp, rp, j, h, j * math.cos(h), j * math.sin(h))


def recover_counts(j: int, h: float) -> tuple[int, int]:
    """Invert a Y-index back to (fp, rp) using fp : rp = cos h : sin h."""
    c, s = math.cos(h), math.sin(h)
    fp = round(j * c / (c + s))
    return fp, j - fp


def tally_credits(corpus: Corpus, level: str, rp_policy: str = "all", diagnostics=None) -> CreditLedger:
    """Count FP and RP credits per entity at ``level``.

    An entity gains at most one FP and one RP per publication. With
    ``rp_policy="first"`` only the first reprint entry is credited.
    """
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    if rp_policy not in ("all", "first"):
        raise ValueError(f"unknown rp_policy {rp_policy!r}")
    ledger = CreditLedger(level)
    for pub in corpus.publications:
        for entity, (fp, rp) in publication_credits(corpus, pub, level, rp_policy, diagnostics).entries.items():
            ledger.add(entity, fp, rp)
    return ledger


def publication_credits(corpus: Corpus, pub, level: str, rp_policy: str = "all", diagnostics=None) -> CreditLedger:
    ledger = CreditLedger(level)
    if not pub.authors:
        return ledger
    reprints = list(pub.reprint_entries)
    if rp_policy == "first":
        reprints = reprints[:1]
    if not reprints:
        emit(diagnostics, INFO, pub.id, "no corresponding author; FP credit only")

    if level == "author":
        fp_entities = [corpus.author_id(pub.authors[0])]
        rp_entities = [corpus.author_id(r.author) for r in reprints]
    else:
        fp_entities = corpus.first_author_entities(pub, level) or [UNKNOWN]
        rp_entities = [corpus.entity(level, r.institution_raw, r.country_raw) for r in reprints]

    for entity in dict.fromkeys(fp_entities):
        ledger.add(entity, fp=1)
    for entity in dict.fromkeys(rp_entities):
        ledger.add(entity, rp=1)
    return ledger


def rank_entities(ledger: CreditLedger, min_j: int = 0, inclusive: bool = True,
                  exclude=(UNKNOWN,)) -> list[YIndex]:
    """Entities passing the j cutoff, by j desc, then rp desc, then id."""
    out = []
    for entity, (fp, rp) in ledger.entries.items():
        if entity in exclude or fp + rp == 0:
            continue
        j = fp + rp
        if j > min_j or (inclusive and j == min_j):
            out.append(compute_y_index(fp, rp, entity))
    out.sort(key=lambda y: (-y.j, -y.rp, y.entity))
    return out


def count_productivity(corpus: Corpus, level: str, mode: str = "full") -> dict:
    """Full (1 each) or fractional (1/N each) byline credit per entity.

    At institution/country level an author's 1/N share is split evenly over
    the entities that author carries on the publication.
    """
    if mode not in ("full", "fractional"):
        raise ValueError(f"unknown counting mode {mode!r}")
    scores = defaultdict(float)
    for pub in corpus.publications:
        authors = corpus.author_ids(pub)
        if not authors:
            continue
        n = len(authors)
        if level == "author":
            for a in authors:
                scores[a] += 1.0 if mode == "full" else 1.0 / n
            continue
        shares = defaultdict(float)
        for a in authors:
            entities = corpus.author_entities(pub, a, level) or [UNKNOWN]
            for e in entities:
                shares[e] += 1.0 / (n * len(entities))
        for e, share in shares.items():
            scores[e] += 1.0 if mode == "full" else share
    return dict(sorted(scores.items()))
