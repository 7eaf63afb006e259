"""Small builders for hand-made export fixtures."""

from pathlib import Path

from wosideology.corpus import FilterConfig, apply_exclusions
from wosideology.wos_parser import record_to_publication, read_export

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "golden.txt"


def record(au=(), af=(), c1=(), rp=None, tc=150, py=2005, dt="Article", ut=None, ti="A title"):
    lines = ["PT J"]
    for tag, values in (("AU", au), ("AF", af)):
        if values:
            lines.append(f"{tag} {values[0]}")
            lines.extend(f"   {v}" for v in values[1:])
    lines.append(f"TI {ti}")
    if c1:
        lines.append(f"C1 {c1[0]}")
        lines.extend(f"   {v}" for v in c1[1:])
    if rp:
        lines.append(f"RP {rp}")
    if dt:
        lines.append(f"DT {dt}")
    if py is not None:
        lines.append(f"PY {py}")
    if tc is not None:
        lines.append(f"TC {tc}")
    if ut:
        lines.append(f"UT {ut}")
    lines.append("ER")
    return "\n".join(lines) + "\n"


def export(*records) -> bytes:
    text = "FN Clarivate Analytics Web of Science\nVR 1.0\n" + "\n".join(records) + "\nEF\n"
    return text.encode("utf-8")


def publications(*records, diagnostics=None):
    result = read_export(export(*records))
    return [record_to_publication(r, diagnostics) for r in result.records]


def corpus_of(*records, cfg=None, **kwargs):
    cfg = cfg or FilterConfig(min_citations=0)
    return apply_exclusions(publications(*records), cfg, **kwargs)
