import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import corpus_of, publications, record
from wosideology.corpus import (
    DEFAULT_BREAKPOINTS,
    ConfigError,
    FilterConfig,
    apply_exclusions,
    corpus_stats,
    default_country_table,
    disambiguate_authors,
    extract_country,
    normalize_author_name,
    normalize_institution,
    read_two_column,
    summarize_timeline,
)


# {{{ exclusions

def test_citation_threshold_inclusive():
    pubs = publications(*(record(au=[f"A{i}, B"], tc=tc) for i, tc in enumerate([99, 100, 150])))
    corpus = apply_exclusions(pubs, FilterConfig(min_citations=100))
    assert sorted(p.times_cited for p in corpus.publications) == [100, 150]


def test_anonymous_excluded():
    pubs = publications(record(au=(), tc=500), record(au=["A, B"], tc=500))
    assert len(apply_exclusions(pubs, FilterConfig()).publications) == 1
    kept = apply_exclusions(pubs, FilterConfig(min_citations=0, exclude_anonymous=False))
    assert kept.publications == pubs


def test_year_range_filter():
    pubs = publications(record(au=["A, B"], py=1990), record(au=["C, D"], py=2000), record(au=["E, F"], py=None))
    corpus = apply_exclusions(pubs, FilterConfig(min_citations=0, year_range=(1995, 2005)))
    assert [p.year for p in corpus.publications] == [2000]


def test_empty_result_is_warning():
    diags = []
    corpus = apply_exclusions(publications(record(au=["A, B"], tc=5)), FilterConfig(), diagnostics=diags)
    assert corpus.publications == []
    assert [d.level for d in diags] == ["WARNING"]


@pytest.mark.parametrize("kwargs", [{"min_citations": -1}, {"year_range": (2010, 2000)}])
def test_invalid_filter(kwargs):
    with pytest.raises(ConfigError):
        FilterConfig(**kwargs)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 400), min_size=1, max_size=12), st.integers(0, 400), st.integers(0, 400))
def test_filter_monotone(citations, t1, t2):
    t1, t2 = sorted((t1, t2))
    pubs = publications(*(record(au=[f"A{i}, B"], tc=tc, ut=f"WOS:{i}") for i, tc in enumerate(citations)))
    low = {p.id for p in apply_exclusions(pubs, FilterConfig(min_citations=t1)).publications}
    high = {p.id for p in apply_exclusions(pubs, FilterConfig(min_citations=t2)).publications}
    assert high <= low
    assert all(p.times_cited >= t2 for p in apply_exclusions(pubs, FilterConfig(min_citations=t2)).publications)


# }}}

# {{{ names

@pytest.mark.parametrize("raw, key", [
    ("Cumming, D", "cumming, D"),
    ("Cumming, Douglas", "cumming, D"),
    ("Cumming, Douglas J.", "cumming, DJ"),
    ("ZAHRA, Shaker A.", "zahra, SA"),
    ("Zahra, SA", "zahra, SA"),
    ("Müller, Jörg", "muller, J"),
    ("van der Berg, J.-P.", "van der berg, JP"),
])
def test_normalize_author_name(raw, key):
    assert normalize_author_name(raw) == key


def test_prefix_merge():
    mapping = disambiguate_authors(["Cumming, D", "Cumming, DJ"])
    assert mapping["Cumming, D"] == mapping["Cumming, DJ"] == "cumming, DJ"
    mapping = disambiguate_authors(["Cumming, Douglas", "Cumming, DJ", "Cumming, D"])
    assert len({mapping[n] for n in ("Cumming, Douglas", "Cumming, DJ", "Cumming, D")}) == 1


def test_ambiguous_prefix_left_unmerged():
    # Compatibility graph by hand: D~DA and D~DJ; DA and DJ are not prefixes of
    # each other, so D has two maximal extensions and must stay on its own.
    diags = []
    mapping = disambiguate_authors(["Cumming, DA", "Cumming, DJ", "Cumming, D"], diagnostics=diags)
    assert mapping["Cumming, DA"] == "cumming, DA"
    assert mapping["Cumming, DJ"] == "cumming, DJ"
    assert mapping["Cumming, D"] == "cumming, D"
    assert len(diags) == 1 and "cumming, D" in diags[0].message


def test_override_wins():
    mapping = disambiguate_authors(["Smith, J", "Smith, JA", "Smith, JB"], overrides=[("Smith, J", "Smith, JA")])
    assert mapping["Smith, J"] == "smith, JA"
    assert mapping["Smith, JB"] == "smith, JB"


def test_conflicting_overrides():
    with pytest.raises(ConfigError):
        disambiguate_authors(["Smith, J"], overrides=[("Smith, J", "Smith, JA"), ("Smith, J", "Smith, JB")])


_names = st.lists(
    st.tuples(st.sampled_from(["Cumming", "Zahra", "Wright"]), st.sampled_from(["D", "DJ", "DA", "DJK", "S", "SA"]))
    .map(lambda t: f"{t[0]}, {t[1]}"),
    min_size=1, max_size=8,
)


@settings(max_examples=80, deadline=None)
@given(_names)
def test_disambiguation_idempotent_and_compatible(names):
    mapping = disambiguate_authors(names)
    again = disambiguate_authors(sorted(set(mapping.values())))
    for target in mapping.values():
        assert mapping[target] == target
        assert again[target] == target
    for raw, target in mapping.items():
        last, _, initials = normalize_author_name(raw).partition(", ")
        t_last, _, t_initials = target.partition(", ")
        assert last == t_last and t_initials.startswith(initials)


def test_corpus_maps_every_raw_name():
    corpus = corpus_of(record(au=["Cumming, D", "Zahra, SA"], af=["Cumming, Douglas", "Zahra, Shaker A."]))
    for pub in corpus.publications:
        for name in pub.authors + pub.full_names:
            assert name in corpus.canonical_authors
    assert corpus.author_ids(corpus.publications[0]) == ["cumming, D", "zahra, SA"]
    assert corpus.authors()["zahra, SA"].display_name == "Zahra, Shaker A."


# }}}

# {{{ affiliations

@pytest.mark.parametrize("raw, country", [
    ("MN 55455 USA", "USA"),
    ("USA", "USA"),
    ("Peoples R China", "China"),
    ("England", "United Kingdom"),
    ("Scotland", "United Kingdom"),
    ("Canada.", "Canada"),
])
def test_extract_country(raw, country):
    assert extract_country(raw) == country


def test_unknown_country_passes_through():
    diags = []
    assert extract_country("Atlantis", diagnostics=diags) == "Atlantis"
    assert len(diags) == 1


@pytest.mark.parametrize("raw", sorted(default_country_table()))
def test_country_idempotent(raw):
    once = extract_country(raw)
    assert extract_country(once) == once


@pytest.mark.parametrize("raw, canonical", [
    ("Univ Minnesota", "university minnesota"),
    ("MIT", "massachusetts institute technology"),
    ("Massachusetts Inst Technol", "massachusetts institute technology"),
    ("Coll William & Mary", "college william mary"),
])
def test_normalize_institution(raw, canonical):
    assert normalize_institution(raw) == canonical
    assert normalize_institution(canonical) == canonical


def test_campuses_kept_distinct_by_default():
    assert normalize_institution("Univ Calif Berkeley") != normalize_institution("Univ Calif Los Angeles")
    merged = normalize_institution("Univ Calif Berkeley", aliases={"Univ Calif Berkeley": "Univ Calif"})
    assert merged == "university calif"


def test_read_two_column(tmp_path):
    path = tmp_path / "table.tsv"
    path.write_text("# comment\nMIT\tMassachusetts Inst Technol\n\n", encoding="utf-8")
    assert read_two_column(path) == [("MIT", "Massachusetts Inst Technol")]
    path.write_text("only one column\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        read_two_column(path)


# }}}

# {{{ statistics

def test_corpus_stats():
    corpus = corpus_of(record(au=["A, B"]), record(au=["A, B", "C, D"], dt="Review"))
    stats = corpus_stats(corpus)
    assert (stats.n_publications, stats.n_authors, stats.n_single_authored_authors) == (2, 2, 1)
    assert stats.doc_types == {"article": 1, "review": 1}


def test_corpus_stats_empty():
    corpus = apply_exclusions([], FilterConfig())
    stats = corpus_stats(corpus)
    assert (stats.n_publications, stats.n_authors, stats.n_single_authored_authors) == (0, 0, 0)


def test_timeline_mean():
    corpus = corpus_of(record(au=["A, B"], py=1992, tc=200), record(au=["C, D"], py=1993, tc=100))
    periods = summarize_timeline(corpus, (1991, 1996))
    assert [(p.label, p.count, p.mean_citations) for p in periods] == [("1991-1995", 2, 150.0)]


def test_timeline_default_periods():
    corpus = corpus_of(record(au=["A, B"], py=2017))
    periods = summarize_timeline(corpus, DEFAULT_BREAKPOINTS)
    assert [p.label for p in periods] == ["1991-1995", "1996-2000", "2001-2005", "2006-2010", "2011-2017"]
    assert [(p.count, p.mean_citations) for p in periods[:4]] == [(0, 0.0)] * 4
    assert periods[-1].count == 1


def test_timeline_unknown_bucket():
    corpus = corpus_of(record(au=["A, B"], py=None, tc=900), record(au=["C, D"], py=2000, tc=100))
    periods = summarize_timeline(corpus)
    unknown = [p for p in periods if p.label == "unknown"]
    assert unknown and unknown[0].count == 1
    assert [p.mean_citations for p in periods if p.label == "1996-2000"] == [100.0]


def test_timeline_rejects_bad_breakpoints():
    with pytest.raises(ValueError):
        summarize_timeline(corpus_of(record(au=["A, B"])), (2000, 1990))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.one_of(st.none(), st.integers(1980, 2025)), min_size=1, max_size=15))
def test_timeline_counts_sum(years):
    corpus = corpus_of(*(record(au=[f"A{i}, B"], py=y) for i, y in enumerate(years)))
    assert sum(p.count for p in summarize_timeline(corpus)) == len(corpus.publications)

# }}}
