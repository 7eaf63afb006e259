"""Y-index, co-authorship network and regional-homogeneity analysis of
Web of Science exports."""

from .conetwork import CoNetwork, Partition, build_network, louvain, modularity, network_degrees
from .corpus import (
    Corpus,
    FilterConfig,
    apply_exclusions,
    corpus_stats,
    disambiguate_authors,
    extract_country,
    normalize_author_name,
    normalize_institution,
    summarize_timeline,
)
from .homogeneity import (
    RegionMap,
    classify_region,
    dominance,
    entity_regions,
    homogeneity_report,
    load_region_map,
    tolerance,
)
from .layout import Layout, kamada_kawai
from .render import PlotSpec, render_network, render_polar, render_timeline
from .synth import GroundTruth, RegionSpec, SynthSpec, generate_corpus
from .wos_parser import (
    Publication,
    RawRecord,
    parse_addresses,
    parse_export,
    parse_reprint,
    read_export,
    record_to_publication,
    serialize_export,
)
from .yindex import CreditLedger, YIndex, compute_y_index, count_productivity, rank_entities, tally_credits

__version__ = "0.1.0"
