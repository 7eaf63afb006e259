"""Command-line pipeline: parse -> exclude -> disambiguate -> tally ->
networks -> homogeneity -> render.

Exit status is 0 on success, 1 when the run completed with warnings and 2 on
a fatal input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field

from . import __version__
from .conetwork import build_network, louvain, network_degrees
from .corpus import ConfigError, FilterConfig, apply_exclusions, corpus_stats, read_two_column, summarize_timeline
from .diagnostics import has_warnings
from .homogeneity import DEFAULT_THRESHOLDS, dominance, entity_regions, homogeneity_report, load_region_map, tolerance
from .layout import kamada_kawai
from .render import render_network, render_polar, render_timeline
from .synth import SynthSpec, generate_export, spec_to_dict
from .wos_parser import EmptyExportError, load_publications, publication_to_dict
from .yindex import LEVELS, rank_entities, tally_credits

EXIT_OK, EXIT_WARNINGS, EXIT_FATAL = 0, 1, 2


@dataclass
class RunConfig:
    inputs: list
    filter: FilterConfig = field(default_factory=FilterConfig)
    min_j: dict = field(default_factory=lambda: {"author": 5, "institution": 7, "country": 7})
    inclusive: bool = True
    min_edge_weight: dict = field(default_factory=lambda: {level: 2 for level in LEVELS})
    seed: int = 42
    region_map: str | None = None
    author_overrides: str | None = None
    country_table: str | None = None
    institution_aliases: str | None = None
    out: str = "out"
    thresholds: tuple = DEFAULT_THRESHOLDS
    rp_policy: str = "all"
    levels: tuple = LEVELS

    def referenced_paths(self) -> list:
        extra = [self.region_map, self.author_overrides, self.country_table, self.institution_aliases]
        return list(self.inputs) + [p for p in extra if p]

    def to_dict(self, region_map) -> dict:
        return {
            "inputs": list(self.inputs),
            "filter": self.filter.to_dict(),
            "min_j": dict(self.min_j),
            "min_j_inclusive": self.inclusive,
            "min_edge_weight": dict(self.min_edge_weight),
            "seed": self.seed,
            "rp_policy": self.rp_policy,
            "region_map": region_map.to_dict(),
            "author_overrides": self.author_overrides,
            "country_table": self.country_table,
            "institution_aliases": self.institution_aliases,
            "thresholds": {"dominance_min": self.thresholds[0], "tolerance_max": self.thresholds[1]},
        }


# {{{ output helpers

def _write(out_dir, name, text):
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, name), "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _num(v: float) -> str:
    return f"{v:.6f}"


# }}}


class Pipeline:
    """Stages share one corpus; each ``write_*`` emits a fixed set of files."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.diagnostics = []
        self._pubs = None
        self._corpus = None
        self._ledgers = {}
        self._networks = {}
        self.region_map = load_region_map(config.region_map)

    @property
    def publications(self):
        if self._pubs is None:
            self._pubs = load_publications(self.config.inputs, self.diagnostics)
        return self._pubs

    @property
    def corpus(self):
        if self._corpus is None:
            cfg = self.config
            overrides = read_two_column(cfg.author_overrides) if cfg.author_overrides else ()
            countries = dict(read_two_column(cfg.country_table)) if cfg.country_table else None
            aliases = dict(read_two_column(cfg.institution_aliases)) if cfg.institution_aliases else None
            self._corpus = apply_exclusions(self.publications, cfg.filter, overrides, countries, aliases,
                                            self.diagnostics)
        return self._corpus

    def ledger(self, level):
        if level not in self._ledgers:
            self._ledgers[level] = tally_credits(self.corpus, level, self.config.rp_policy, self.diagnostics)
        return self._ledgers[level]

    def ranked(self, level):
        return rank_entities(self.ledger(level), self.config.min_j[level], self.config.inclusive)

    def network(self, level):
        if level not in self._networks:
            net = build_network(self.corpus, level, self.config.min_edge_weight[level], self.diagnostics)
            part = louvain(net, self.config.seed)
            lay = kamada_kawai(net, self.config.seed)
            self._networks[level] = (net, part, lay)
        return self._networks[level]

    def network_summary(self, level) -> dict:
        net, part, lay = self.network(level)
        weighted = network_degrees(net)
        unweighted = network_degrees(net, weighted=False)
        top = sorted(net.nodes, key=lambda n: (-weighted[n], n))[:10]
        return {
            "nodes": len(net.nodes),
            "edges": len(net.edges),
            "pruned_entities": len(net.pruned),
            "components": len(lay.histories),
            "communities": len(set(part.assignment.values())),
            "modularity": part.modularity,
            "stress": lay.stress,
            "initial_stress": lay.initial_stress,
            "top_links": [[n, weighted[n], unweighted[n]] for n in top],
        }

    # {{{ writers

    def write_parse(self, out):
        lines = [json.dumps(publication_to_dict(p), sort_keys=True, ensure_ascii=False) for p in self.publications]
        _write(out, "publications.jsonl", "\n".join(lines) + "\n")

    def write_filter(self, out):
        _write(out, "corpus_stats.json", _json(corpus_stats(self.corpus).to_dict()))
        periods = summarize_timeline(self.corpus)
        _write(out, "timeline.csv", _csv(["period", "publications", "mean_citations"],
                                         [[p.label, p.count, _num(p.mean_citations)] for p in periods]))

    def write_yindex(self, out, level):
        rows = [[y.entity, level, y.fp, y.rp, y.j, _num(y.h), _num(y.x), _num(y.y)] for y in self.ranked(level)]
        _write(out, f"{level}_yindex.csv", _csv(["entity", "level", "fp", "rp", "j", "h", "x", "y"], rows))

    def write_network(self, out, level):
        net, part, lay = self.network(level)
        weighted = network_degrees(net)
        unweighted = network_degrees(net, weighted=False)
        _write(out, f"{level}_edges.csv", _csv(["u", "v", "weight"], [list(e) for e in net.edges]))
        _write(out, f"{level}_partition.csv", _csv(
            ["node", "community", "links_weighted", "links_unweighted"],
            [[n, part.assignment[n], weighted[n], unweighted[n]] for n in net.nodes]))
        _write(out, f"{level}_layout.csv", _csv(
            ["node", "x", "y"], [[n, _num(x), _num(y)] for n, (x, y) in lay.positions.items()]))
        _write(out, f"{level}_network_summary.json", _json(self.network_summary(level)))

    def report(self):
        cfg = self.config
        doms, tols = {}, {}
        for level in cfg.levels:
            regions = entity_regions(self.corpus, level, self.region_map)
            doms[level] = dominance(self.ranked(level), regions, level, self.region_map.default_region)
            tols[level] = tolerance(self.network(level)[0], regions, self.region_map.default_region)
        report = homogeneity_report(doms, tols, cfg.thresholds, cfg.to_dict(self.region_map), self.diagnostics)
        report.networks = {level: self.network_summary(level) for level in cfg.levels}
        return report

    def write_report(self, out):
        report = self.report()
        _write(out, "report.json", report.to_json())
        _write(out, "report.txt", report.summary_text())

    def write_render(self, out):
        for level in self.config.levels:
            _write(out, f"{level}_polar.svg", render_polar(self.ranked(level), title=f"{level} Y-index"))
            net, part, lay = self.network(level)
            _write(out, f"{level}_network.svg",
                   render_network(net, part, lay, network_degrees(net), title=f"{level} co-authorship network"))
        periods = [p for p in summarize_timeline(self.corpus) if p.label != "unknown"]
        _write(out, "timeline.svg", render_timeline(periods))

    def write_diagnostics(self, out):
        _write(out, "diagnostics.log", "".join(d.format() + "\n" for d in self.diagnostics))

    # }}}


def run_pipeline(config: RunConfig) -> int:
    pipe = Pipeline(config)
    pipe.write_parse(config.out)
    pipe.write_filter(config.out)
    for level in config.levels:
        pipe.write_yindex(config.out, level)
        pipe.write_network(config.out, level)
    pipe.write_report(config.out)
    pipe.write_render(config.out)
    pipe.write_diagnostics(config.out)
    return EXIT_WARNINGS if has_warnings(pipe.diagnostics) else EXIT_OK


# {{{ argument parsing

def _common(parser):
    parser.add_argument("inputs", nargs="+", help="Web of Science export files (tagged or tab-delimited)")
    parser.add_argument("--out", default="out", help="output directory (default: out)")
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--min-citations", type=int, default=100,
                        help="keep publications with times cited >= N (default: 100)")
    parser.add_argument("--include-anonymous", action="store_true")
    parser.add_argument("--year-from", type=int)
    parser.add_argument("--year-to", type=int)
    parser.add_argument("--author-overrides", metavar="PATH")
    parser.add_argument("--country-table", metavar="PATH")
    parser.add_argument("--institution-aliases", metavar="PATH")
    parser.add_argument("--region-map", metavar="PATH")
    parser.add_argument("--rp-policy", choices=("all", "first"), default="all",
                        help="credit every corresponding author, or only the first")
    parser.add_argument("--min-j-author", type=int, default=5)
    parser.add_argument("--min-j-institution", type=int, default=7)
    parser.add_argument("--min-j-country", type=int, default=7)
    parser.add_argument("--exclusive", action="store_true", help="require j > min-j instead of j >= min-j")
    parser.add_argument("--min-edge-weight", type=int, default=2)
    parser.add_argument("--dominance-min", type=float, default=DEFAULT_THRESHOLDS[0],
                        help="verdict threshold on the dominant region's j share (artifact parameter)")
    parser.add_argument("--tolerance-max", type=float, default=DEFAULT_THRESHOLDS[1],
                        help="verdict threshold on the cross-region edge-weight fraction (artifact parameter)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wosideology", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("parse", "validate exports and dump normalized records"),
        ("filter", "apply exclusions; write corpus statistics and timeline"),
        ("report", "write the dominance/tolerance homogeneity report"),
        ("render", "write SVG figures"),
        ("run", "full pipeline"),
    ):
        _common(sub.add_parser(name, help=help_text))
    for name in ("yindex", "network"):
        p = sub.add_parser(name, help=f"{name} tables for one or all levels")
        _common(p)
        p.add_argument("--level", choices=LEVELS + ("all",), default="all")
        if name == "yindex":
            p.add_argument("--min-j", type=int, help="cutoff for the chosen level")
    synth = sub.add_parser("synth", help="generate a synthetic export from a JSON spec")
    synth.add_argument("spec", help="SynthSpec JSON file")
    synth.add_argument("--out", default="out")
    synth.add_argument("--seed", type=int, help="override the spec's seed")
    return parser


def config_from_args(args) -> RunConfig:
    year_range = None
    if args.year_from is not None or args.year_to is not None:
        year_range = (args.year_from if args.year_from is not None else -10 ** 9,
                      args.year_to if args.year_to is not None else 10 ** 9)
    min_j = {"author": args.min_j_author, "institution": args.min_j_institution, "country": args.min_j_country}
    levels = LEVELS
    level = getattr(args, "level", "all")
    if level != "all":
        levels = (level,)
        if getattr(args, "min_j", None) is not None:
            min_j[level] = args.min_j
    return RunConfig(
        inputs=list(args.inputs),
        filter=FilterConfig(args.min_citations, not args.include_anonymous, year_range),
        min_j=min_j,
        inclusive=not args.exclusive,
        min_edge_weight={lvl: args.min_edge_weight for lvl in LEVELS},
        seed=args.seed,
        region_map=args.region_map,
        author_overrides=args.author_overrides,
        country_table=args.country_table,
        institution_aliases=args.institution_aliases,
        out=args.out,
        thresholds=(args.dominance_min, args.tolerance_max),
        rp_policy=args.rp_policy,
        levels=levels,
    )


# }}}


def _run_synth(args) -> int:
    spec = SynthSpec.from_json(args.spec)
    if args.seed is not None:
        data = spec_to_dict(spec)
        data["seed"] = args.seed
        spec = SynthSpec.from_dict(data)
    text, truth = generate_export(spec)
    _write(args.out, "synthetic_export.txt", text)
    _write(args.out, "ground_truth.json", _json(truth.to_dict()))
    return EXIT_OK


def _dispatch(args) -> int:
    if args.command == "synth":
        return _run_synth(args)
    config = config_from_args(args)
    for path in config.referenced_paths():
        if not os.path.exists(path):
            print(f"error: no such file: {path}", file=sys.stderr)
            return EXIT_FATAL
    if args.command == "run":
        return run_pipeline(config)
    pipe = Pipeline(config)
    out = config.out
    if args.command == "parse":
        pipe.write_parse(out)
    elif args.command == "filter":
        pipe.write_filter(out)
    elif args.command == "yindex":
        for level in config.levels:
            pipe.write_yindex(out, level)
    elif args.command == "network":
        for level in config.levels:
            pipe.write_network(out, level)
    elif args.command == "report":
        pipe.write_report(out)
    elif args.command == "render":
        pipe.write_render(out)
    pipe.write_diagnostics(out)
    return EXIT_WARNINGS if has_warnings(pipe.diagnostics) else EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (OSError, EmptyExportError, ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
