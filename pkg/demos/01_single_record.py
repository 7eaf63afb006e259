"""Walk one Web of Science record through the library, stage by stage.

    python3 demos/01_single_record.py [export.txt]

Without an argument the bundled test fixture is used.
"""

import sys
from pathlib import Path

from wosideology.corpus import FilterConfig, apply_exclusions
from wosideology.wos_parser import read_export, record_to_publication
from wosideology.yindex import rank_entities, tally_credits

path = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent.parent / "tests" / "data" / "golden.txt"

# Parsing keeps the raw tagged fields; diagnostics never raise.
result = read_export(path)
print(f"{len(result.records)} record(s), {len(result.diagnostics)} diagnostic(s)")
for tag, values in result.records[0].fields:
    print(f"  {tag}: {values[0][:70]}{' ...' if len(values) > 1 else ''}")

# A publication is the normalized view: bylines, addresses, reprint authors.
pubs = [record_to_publication(r) for r in result.records]
pub = pubs[0]
print("\nfirst author:", pub.authors[0])
print("corresponding:", [rp.author for rp in pub.reprint_entries])

# Exclusions drop low-citation and anonymous work; here the threshold is lowered
# so the single record survives whatever its citation count.
corpus = apply_exclusions(pubs, FilterConfig(min_citations=0))

# Each level gets fp (first-author) and rp (corresponding-author) credits.
for level in ("author", "institution", "country"):
    print(f"\n{level}")
    for y in rank_entities(tally_credits(corpus, level), 1):
        print(f"  {y.entity:<40} fp={y.fp} rp={y.rp} j={y.j} h={y.h:.3f}")
