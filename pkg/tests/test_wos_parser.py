import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import GOLDEN, export, publications, record
from wosideology.diagnostics import WARNING
from wosideology.wos_parser import (
    DocType,
    EmptyExportError,
    RawRecord,
    parse_addresses,
    parse_export,
    parse_reprint,
    read_export,
    record_to_publication,
    serialize_export,
)


def _messages(diags):
    return [d.message for d in diags]


# {{{ golden fixture

def test_golden_single_record_no_diagnostics():
    records, diags = parse_export(GOLDEN)
    assert len(records) == 1
    assert diags == []
    assert records[0].tags() == ["PT", "AU", "AF", "TI", "SO", "C1", "RP", "DT", "PY", "TC", "UT"]


def test_golden_round_trip():
    original = GOLDEN.read_text(encoding="utf-8")
    result = read_export(GOLDEN)
    text = serialize_export(result.records, header=result.header)
    assert text == original
    again = read_export(text.encode("utf-8"))
    assert serialize_export(again.records, header=again.header) == text


def test_record_count_matches_er_lines():
    body = record(au=["A, B"]) + record(au=["C, D"]) + record(au=["E, F"])
    data = export(body)
    records, _ = parse_export(data)
    er = sum(1 for line in data.decode().splitlines() if line.strip() == "ER")
    assert len(records) == er == 3


def test_golden_publication_fields():
    records, _ = parse_export(GOLDEN)
    pub = record_to_publication(records[0])
    assert pub.authors == ("Zahra, SA", "Cumming, D")
    assert pub.title == "Example title that wraps onto a second line"
    assert (pub.times_cited, pub.year, pub.doc_type) == (150, 2005, DocType.ARTICLE)
    assert pub.id == "WOS:000123456700001"
    assert pub.reprint_entries[0].country_raw == "USA"


def test_bom_and_stream_inputs():
    data = GOLDEN.read_bytes()
    with_bom = b"\xef\xbb\xbf" + data
    fields = [r.fields for r in parse_export(with_bom)[0]]
    assert fields == [r.fields for r in parse_export(io.BytesIO(data))[0]]


# }}}

# {{{ the three malformation cases

def test_missing_ef():
    text = GOLDEN.read_text(encoding="utf-8").replace("EF\n", "")
    records, diags = parse_export(text.encode())
    assert len(records) == 1
    assert _messages(diags) == ["missing EF"]
    assert diags[0].level == WARNING


def test_malformed_line_inside_record():
    text = GOLDEN.read_text(encoding="utf-8").replace("DT Article\n", "DT Article\nthis is not a field\n")
    records, diags = parse_export(text.encode())
    assert len(records) == 1
    assert len(diags) == 1
    assert diags[0].message.startswith("malformed line")
    assert diags[0].location.endswith(":13")


def test_unterminated_record_is_dropped():
    good = record(au=["A, B"], ut="WOS:1")
    bad = record(au=["C, D"], ut="WOS:2").replace("ER\n", "")
    records, diags = parse_export(export(good, bad))
    assert [r.value("UT") for r in records] == ["WOS:1"]
    assert _messages(diags) == ["record not terminated by ER"]


# }}}


def test_empty_export_raises():
    with pytest.raises(EmptyExportError):
        parse_export(b"FN Clarivate Analytics Web of Science\nVR 1.0\nEF\n")


def test_unreadable_path_raises():
    with pytest.raises(OSError):
        parse_export("/nonexistent/export.txt")


def test_title_continuation_three_lines():
    text = record(au=["A, B"], ti="first").replace("TI first\n", "TI first\n   second\n   third\n")
    records, _ = parse_export(export(text))
    assert records[0].values("TI") == ["first", "second", "third"]
    assert record_to_publication(records[0]).title == "first second third"


def test_record_to_publication_mappings():
    diags = []
    (pub,) = publications(record(au=["A, B"], dt="Proceedings Paper", tc=None), diagnostics=diags)
    assert pub.doc_type is DocType.PROCEEDINGS_PAPER
    assert pub.times_cited == 0
    assert any("TC" in m for m in _messages(diags))
    (pub,) = publications(record(au=["A, B"], dt="Something Odd"))
    assert pub.doc_type is DocType.OTHER


def test_anonymous_record_and_synthesized_id():
    (pub,) = publications(record(au=(), ut=None))
    assert pub.anonymous
    assert pub.id.startswith("SYN:")
    (a,), (b,) = publications(record(au=["A, B"])), publications(record(au=["A, B"]))
    assert a.id == b.id


def test_af_used_when_au_missing():
    (pub,) = publications(record(af=["Zahra, Shaker A."]))
    assert pub.authors == ("Zahra, Shaker A.",)


# {{{ sub-parsers

def test_parse_reprint_single():
    (entry,) = parse_reprint("Zahra, SA (corresponding author), Univ Minnesota, Minneapolis, MN 55455 USA.")
    assert entry.author == "Zahra, SA"
    assert entry.institution_raw == "Univ Minnesota"
    assert entry.country_raw == "USA"


def test_parse_reprint_two_clauses():
    text = ("Zahra, SA (corresponding author), Univ Minnesota, Minneapolis, MN 55455 USA; "
            "Cumming, D (corresponding author), York Univ, Toronto, ON, Canada.")
    entries = parse_reprint(text)
    assert [(e.author, e.institution_raw, e.country_raw) for e in entries] == [
        ("Zahra, SA", "Univ Minnesota", "USA"),
        ("Cumming, D", "York Univ", "Canada"),
    ]


def test_parse_reprint_shared_address():
    entries = parse_reprint("Li, X; Wang, Y (corresponding author), Peking Univ, Beijing, Peoples R China.")
    assert [e.author for e in entries] == ["Li, X", "Wang, Y"]
    assert {e.country_raw for e in entries} == {"Peoples R China"}


def test_parse_reprint_empty_and_unparseable():
    assert parse_reprint("") == []
    diags = []
    assert parse_reprint("Somebody, Somewhere", diags) == []
    assert len(diags) == 1


def test_parse_addresses_bracketed():
    (entry,) = parse_addresses(["[Cumming, Douglas] York Univ, Schulich Sch Business, Toronto, ON, Canada"])
    assert entry.linked_authors == ("Cumming, Douglas",)
    assert entry.institution_raw == "York Univ"
    assert entry.country_raw == "Canada"
    assert entry.full_text == "[Cumming, Douglas] York Univ, Schulich Sch Business, Toronto, ON, Canada"


def test_parse_addresses_unbracketed_and_order():
    entries = parse_addresses(["Harvard Univ, Boston, MA 02163 USA", "[A, B; C, D] Univ Oxford, Oxford, England"])
    assert entries[0].linked_authors == ()
    assert entries[0].country_raw == "USA"
    assert entries[1].linked_authors == ("A, B", "C, D")
    assert entries[1].country_raw == "England"


# }}}


def test_tab_delimited_export():
    header = "PT\tAU\tAF\tTI\tC1\tRP\tDT\tPY\tTC\tUT"
    row = "\t".join([
        "J", "Zahra, SA; Cumming, D", "Zahra, Shaker A.; Cumming, Douglas", "Tab title",
        "[Zahra, Shaker A.; Cumming, Douglas] Univ Minnesota, Minneapolis, MN 55455 USA",
        "Zahra, SA (corresponding author), Univ Minnesota, Minneapolis, MN 55455 USA.",
        "Article", "2010", "300", "WOS:000000000000009",
    ])
    records, diags = parse_export((header + "\n" + row + "\n").encode())
    assert diags == []
    pub = record_to_publication(records[0])
    assert pub.authors == ("Zahra, SA", "Cumming, D")
    assert pub.addresses[0].linked_authors == ("Zahra, Shaker A.", "Cumming, Douglas")
    assert (pub.year, pub.times_cited) == (2010, 300)


# {{{ properties

_tag = st.from_regex(r"[A-Z][A-Z0-9]", fullmatch=True).filter(lambda t: t not in {"ER", "EF", "FN", "VR"})
_line = st.text(alphabet=st.characters(min_codepoint=33, max_codepoint=126), min_size=1, max_size=20)
_field = st.tuples(_tag, st.lists(_line, min_size=1, max_size=3).map(tuple))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(_field, min_size=1, max_size=6).map(tuple), min_size=1, max_size=4))
def test_serialize_parse_round_trip(records):
    raw = [RawRecord(fields) for fields in records]
    text = serialize_export(raw)
    parsed, diags = parse_export(text.encode("utf-8"))
    assert diags == []
    assert [r.fields for r in parsed] == records


@settings(max_examples=50, deadline=None)
@given(st.lists(st.sampled_from(["A, B", "C, DE", "Fg, H"]), min_size=0, max_size=4),
       st.integers(0, 5000))
def test_record_to_publication_deterministic(authors, tc):
    text = record(au=authors, tc=tc)
    first = publications(text)
    assert first == publications(text)
    assert first[0].times_cited == tc
    assert first[0].authors == tuple(authors)

# }}}
