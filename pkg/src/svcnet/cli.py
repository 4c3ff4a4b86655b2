"""Command-line pipeline: extract, analyze, compare, gen, export.

Reports are canonical JSON with a fixed key order, floats rendered to six
significant digits, and no timestamps, so identical inputs and seed produce
byte-identical output regardless of the thread cap (``SVCNET_THREADS``).
The comparison report is the four-matcher property matrix over the giant
components: nodes, links, average distance, diameter, transitivity,
communities, modularity, plus the power-law fit and the random-graph
distance baseline per network.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .corpus import ServiceCollection, collection_stats, load_collection
from .community import best_partition, domain_overlap, walktrap
from .errors import DegenerateInputError, SvcnetError, UsageError
from .gen import GenSpec, generate, write_collection_tree
from .matcher import ALL_KINDS, MatcherKind
from .metrics import (
    degree_report,
    distance_report,
    er_baseline,
    giant_component,
    total_degrees,
    transitivity,
    weak_components,
)
from .netbuild import (
    BuildOptions,
    EXPORT_FORMATS,
    InteractionNetwork,
    build_network,
    export_network,
    read_edgelist,
    read_graphml,
    trim_isolates,
)
from .ontology import Ontology, load_ontology
from .plfit import fit_with_gof

REPORT_SCHEMA = "svcnet-report/1"
COMPARE_SCHEMA = "svcnet-compare/1"
ER_SAMPLES = 10
TOP_K = 10

_KIND_INDEX = {kind: i for i, kind in enumerate(ALL_KINDS)}

# Choices this tool makes where the source descriptions are ambiguous; echoed
# into every report so results are auditable.
CONVENTIONS = {
    "parameter_flattening": "top-level message parts; wrapper children when a part "
    "references an element with a complex-type wrapper",
    "ontology_axioms": "named-class subClassOf only",
    "components": "weak connectivity",
    "average_distance": "mean over reachable ordered pairs; unreachable pairs "
    "excluded and counted",
    "er_links": "undirected projection edge count",
    "power_law_degrees": "total degrees of the giant component",
}


def thread_cap(default: int = 4) -> int:
    raw = os.environ.get("SVCNET_THREADS")
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"SVCNET_THREADS must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise UsageError("SVCNET_THREADS must be a positive integer")
    return value


def _derived_seed(*parts: int) -> int:
    return int(np.random.SeedSequence(list(parts)).generate_state(1, np.uint64)[0])


def _round6(value):
    if isinstance(value, bool) or not isinstance(value, float):
        return value
    if value != value or value in (float("inf"), float("-inf")):
        return None
    return float(f"{value:.6g}")


def _canonical(obj):
    if isinstance(obj, dict):
        return {k: _canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    return _round6(obj)


def render_report(report: dict) -> str:
    return json.dumps(_canonical(report), indent=2) + "\n"


# ---------------------------------------------------------------------------
# Per-network analysis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnalysisParams:
    seed: int
    walk_length: int
    plfit_boot: int
    full: bool = False

    def validate(self) -> None:
        if self.seed < 0:
            raise UsageError("--seed must be >= 0")
        if self.walk_length < 1:
            raise UsageError("--walk-length must be >= 1")
        if self.plfit_boot < 0:
            raise UsageError("--plfit-boot must be >= 0")


def _metric_block(net: InteractionNetwork, params: AnalysisParams, kind_index: int,
                  domains: dict[str, str | None] | None) -> dict:
    dist = distance_report(net)
    trans = transitivity(net)
    degrees = degree_report(net, TOP_K)

    block = {
        "nodes": net.n_nodes,
        "links": net.n_edges,
        "average_distance": dist.average_distance,
        "diameter": dist.diameter,
        "reachable_ordered_pairs": dist.reachable_ordered_pairs,
        "unreachable_ordered_pairs": dist.unreachable_ordered_pairs,
        "transitivity": trans,
        "degrees": {
            "in_histogram": [list(x) for x in degrees.in_histogram],
            "out_histogram": [list(x) for x in degrees.out_histogram],
            "total_histogram": [list(x) for x in degrees.total_histogram],
            "hubs": [list(x) for x in degrees.hubs],
            "authorities": [list(x) for x in degrees.authorities],
        },
    }

    if net.n_nodes == 0:
        block["communities"] = {"count": None, "modularity": None}
    else:
        dend = walktrap(net, params.walk_length)
        part, score = best_partition(dend, net)
        block["communities"] = {"count": part.community_count, "modularity": score.q}
        overlap = domain_overlap(part, domains) if domains is not None else None
        if overlap is not None and overlap.available:
            block["domain_overlap"] = {
                "purity": overlap.purity,
                "contingency": [
                    {"community": c, "domain": d, "count": n}
                    for c, d, n in overlap.contingency
                ],
            }

    block["power_law"] = _power_law_block(net, params, kind_index)

    und_m = len({tuple(sorted(e)) for e in net.edges})
    if net.n_nodes >= 2 and und_m >= 1:
        er = er_baseline(
            n=net.n_nodes,
            m=und_m,
            samples=ER_SAMPLES,
            seed=_derived_seed(params.seed, kind_index, 1),
            observed_average=dist.average_distance,
        )
        block["small_world"] = {
            "er_nodes": net.n_nodes,
            "er_links": und_m,
            "er_estimate": er.er_estimate,
            "er_sampled_mean": er.er_sampled_mean,
            "er_sampled_stddev": er.er_sampled_stddev,
            "ratio_observed_to_sampled": er.ratio,
            "samples": er.samples,
            "seed": er.seed,
        }
    else:
        block["small_world"] = None
    return block


def _power_law_block(net: InteractionNetwork, params: AnalysisParams, kind_index: int) -> dict:
    degrees = total_degrees(net)
    try:
        fit = fit_with_gof(
            degrees,
            n_boot=params.plfit_boot,
            seed=_derived_seed(params.seed, kind_index, 2),
        )
    except (DegenerateInputError, UsageError) as exc:
        return {"available": False, "reason": str(exc)}
    return {
        "available": True,
        "alpha": fit.alpha,
        "xmin": fit.xmin,
        "ks": fit.ks,
        "n_tail": fit.n_tail,
        "zeros_removed": fit.zeros_removed,
        "p_value": fit.p_value,
        "rejected": fit.rejected,
        "n_boot": fit.n_boot,
        "seed": fit.seed,
    }


def analyze_network(
    net: InteractionNetwork,
    params: AnalysisParams,
    domains: dict[str, str | None] | None = None,
) -> dict:
    """Trim isolates, take the giant component, compute the full metric suite."""
    kind_index = _KIND_INDEX.get(net.kind, 0)
    trimmed, iso_fraction = trim_isolates(net)
    components = weak_components(trimmed)
    giant = giant_component(trimmed)

    section = {
        "kind": net.kind.value if net.kind else None,
        "nodes_total": net.n_nodes,
        "links_total": net.n_edges,
        "isolated_fraction": iso_fraction,
        "component_count": len(components.component_sizes),
        "component_sizes": list(components.component_sizes),
        "giant_node_fraction": components.giant_node_fraction,
        "giant_link_fraction": components.giant_link_fraction,
        "giant": _metric_block(giant, params, kind_index, domains),
    }
    if params.full:
        section["full_network"] = _metric_block(net, params, kind_index, domains)
    return section


def _options_block(opts: BuildOptions, params: AnalysisParams) -> dict:
    return {
        "zero_input_targets": opts.zero_input_targets,
        "reflexive_subsumption": opts.reflexive_subsumption,
        "walk_length": params.walk_length,
        "plfit_boot": params.plfit_boot,
        "er_samples": ER_SAMPLES,
    }


def _report_header(schema: str, seed: int) -> dict:
    return {"schema": schema, "tool_version": __version__, "seed": seed}


# ---------------------------------------------------------------------------
# Comparison
# ---------------------------------------------------------------------------


def compare_collection(
    coll: ServiceCollection,
    onto: Ontology | None,
    opts: BuildOptions,
    params: AnalysisParams,
) -> dict:
    """Build and analyze all four networks; assembly order is fixed."""
    domains = coll.domain_of_operation()
    effective_onto = onto if onto is not None else Ontology.empty()

    def one(kind: MatcherKind) -> dict:
        net = build_network(coll, kind, effective_onto, opts)
        return analyze_network(net, params, domains)

    workers = min(len(ALL_KINDS), thread_cap())
    with ThreadPoolExecutor(max_workers=workers) as pool:
        sections = list(pool.map(one, ALL_KINDS))

    networks = {kind.value: section for kind, section in zip(ALL_KINDS, sections)}
    report = _report_header(COMPARE_SCHEMA, params.seed)
    report["options"] = _options_block(opts, params)
    report["conventions"] = CONVENTIONS
    report["collection"] = _collection_block(coll)
    report["networks"] = networks
    report["comparison"] = _comparison_block(networks)
    return report


def _collection_block(coll: ServiceCollection) -> dict:
    stats = collection_stats(coll)
    return {
        "services": stats.services,
        "operations": stats.operations,
        "parameters": stats.parameters,
        "annotated_parameters": stats.annotated_parameters,
        "annotation_coverage": stats.annotation_coverage,
        "warnings": len(coll.warnings),
    }


def _comparison_block(networks: dict[str, dict]) -> dict:
    empty = [k for k, sec in networks.items() if sec["giant"]["nodes"] == 0]

    def argmin(metric: str) -> list[str]:
        values = {
            k: sec["giant"][metric]
            for k, sec in networks.items()
            if sec["giant"][metric] is not None
        }
        if not values:
            return []
        best = min(values.values())
        return [k for k in networks if values.get(k) == best]

    modularity_values = {
        k: sec["giant"]["communities"]["modularity"]
        for k, sec in networks.items()
        if sec["giant"]["communities"]["modularity"] is not None
    }
    ranking = sorted(modularity_values, key=lambda k: (-modularity_values[k], k))
    return {
        "empty_networks": empty,
        "smallest_diameter": argmin("diameter"),
        "smallest_average_distance": argmin("average_distance"),
        "modularity_ranking": ranking,
    }


def report_to_csv(report: dict) -> str:
    """Table-shaped projection of a comparison report (one column per kind)."""
    networks = report.get("networks")
    if not networks:
        raise UsageError("CSV projection needs a comparison report")
    kinds = list(networks)
    rows = [
        ("nodes", lambda s: s["giant"]["nodes"]),
        ("links", lambda s: s["giant"]["links"]),
        ("isolated_fraction", lambda s: s["isolated_fraction"]),
        ("components", lambda s: s["component_count"]),
        ("average_distance", lambda s: s["giant"]["average_distance"]),
        ("diameter", lambda s: s["giant"]["diameter"]),
        ("transitivity", lambda s: s["giant"]["transitivity"]),
        ("communities", lambda s: s["giant"]["communities"]["count"]),
        ("modularity", lambda s: s["giant"]["communities"]["modularity"]),
    ]
    lines = ["property," + ",".join(kinds)]
    for label, getter in rows:
        cells = []
        for kind in kinds:
            value = _round6(getter(networks[kind]))
            cells.append("" if value is None else str(value))
        lines.append(f"{label}," + ",".join(cells))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Input loading helpers
# ---------------------------------------------------------------------------


def _load_ontology_arg(path: str | None) -> Ontology | None:
    return load_ontology(path) if path else None


def _load_network_file(
    path: Path, force_graphml: bool
) -> tuple[InteractionNetwork, dict[str, str] | None]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    if force_graphml or path.suffix.lower() in (".graphml", ".xml") or text.lstrip().startswith("<"):
        return read_graphml(text)
    return read_edgelist(text), None


def _resolve_build_inputs(args) -> tuple[MatcherKind, Ontology]:
    kind = MatcherKind.from_name(args.matcher)
    onto = _load_ontology_arg(args.ontology)
    if kind in (MatcherKind.PLUGIN, MatcherKind.SUBSUME) and onto is None:
        raise UsageError(f"--matcher {kind.value} requires --ontology")
    if kind is MatcherKind.EXACT and onto is None:
        print(
            "warning: exact matching without --ontology compares concept IRIs "
            "by identity only",
            file=sys.stderr,
        )
    return kind, onto if onto is not None else Ontology.empty()


def _write_output(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_extract(args) -> int:
    kind, onto = _resolve_build_inputs(args)
    coll = load_collection(args.collection)
    for warning in coll.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    opts = BuildOptions(
        zero_input_targets=args.zero_input_targets,
        reflexive_subsumption=args.reflexive_subsumption,
    )
    net = build_network(coll, kind, onto, opts)
    text = export_network(net, args.format, domains=coll.domain_of_operation())
    _write_output(text, args.output)
    return 0


def cmd_analyze(args) -> int:
    params = AnalysisParams(
        seed=args.seed,
        walk_length=args.walk_length,
        plfit_boot=args.plfit_boot,
        full=args.full,
    )
    params.validate()

    target = Path(args.path)
    opts = BuildOptions(
        zero_input_targets=args.zero_input_targets,
        reflexive_subsumption=args.reflexive_subsumption,
    )
    if target.is_dir():
        if not args.matcher:
            raise UsageError("analyzing a collection directory requires --matcher")
        kind, onto = _resolve_build_inputs(args)
        coll = load_collection(target)
        net = build_network(coll, kind, onto, opts)
        domains = coll.domain_of_operation()
    else:
        if not target.exists():
            raise UsageError(f"no such file or directory: {target}")
        net, domains = _load_network_file(target, args.from_graphml)
        opts = net.options

    section = analyze_network(net, params, domains)
    report = _report_header(REPORT_SCHEMA, params.seed)
    report["options"] = _options_block(opts, params)
    report["conventions"] = CONVENTIONS
    report["network"] = section
    _write_output(render_report(report), args.output)
    return 0


def cmd_compare(args) -> int:
    params = AnalysisParams(
        seed=args.seed, walk_length=args.walk_length, plfit_boot=args.plfit_boot
    )
    params.validate()
    coll = load_collection(args.collection)
    onto = _load_ontology_arg(args.ontology)
    if onto is None:
        print(
            "warning: no --ontology; plug-in and subsume networks can only be empty",
            file=sys.stderr,
        )
    opts = BuildOptions(
        zero_input_targets=args.zero_input_targets,
        reflexive_subsumption=args.reflexive_subsumption,
    )
    report = compare_collection(coll, onto, opts, params)
    _write_output(render_report(report), args.output)
    if args.csv:
        Path(args.csv).write_text(report_to_csv(report), encoding="utf-8")
    return 0


def cmd_gen(args) -> int:
    spec = GenSpec(
        n_services=args.services,
        ops_per_service=args.ops_per_service,
        n_domains=args.domains,
        name_pool_size=args.name_pool,
        concept_pool_size=args.concept_pool,
        hierarchy_depth=args.depth,
        branching=args.branching,
        inputs_per_op=(args.min_inputs, args.max_inputs),
        outputs_per_op=(args.min_outputs, args.max_outputs),
        annotation_rate=args.annotation_rate,
        cross_domain_rate=args.cross_domain_rate,
        seed=args.seed,
    )
    coll, onto, _ = generate(spec)
    out = write_collection_tree(coll, onto, args.out_dir)
    stats = collection_stats(coll)
    print(
        f"wrote {stats.services} services ({stats.operations} operations, "
        f"{stats.parameters} parameters, coverage {stats.annotation_coverage:.2f}) to {out}"
    )
    return 0


def cmd_export(args) -> int:
    net, domains = _load_network_file(Path(args.network), args.from_graphml)
    text = export_network(net, args.format, domains=domains)
    _write_output(text, args.output)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="svcnet",
        description="Extract and analyze web-service interaction networks.",
    )
    parser.add_argument("--version", action="version", version=f"svcnet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_build_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--ontology", help="concept hierarchy (edge-list TSV or OWL-XML)")
        p.add_argument(
            "--zero-input-targets",
            action="store_true",
            help="allow incoming links to operations with no inputs",
        )
        p.add_argument(
            "--reflexive-subsumption",
            action="store_true",
            help="use inclusive plug-in/subsume (concept identity matches)",
        )

    def add_analysis_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=0, help="base RNG seed (recorded)")
        p.add_argument("--walk-length", type=int, default=4, help="random-walk length")
        p.add_argument(
            "--plfit-boot",
            type=int,
            default=1000,
            help="bootstrap replicates for the power-law p-value (0 skips it)",
        )

    p_extract = sub.add_parser("extract", help="build one interaction network")
    p_extract.add_argument("collection", help="directory of WSDL/SAWSDL files")
    p_extract.add_argument(
        "--matcher", required=True, help="equal | exact | plugin | subsume"
    )
    add_build_flags(p_extract)
    p_extract.add_argument("--format", default="graphml", choices=EXPORT_FORMATS)
    p_extract.add_argument("-o", "--output", help="output file (default stdout)")
    p_extract.set_defaults(func=cmd_extract)

    p_analyze = sub.add_parser("analyze", help="metric report for one network")
    p_analyze.add_argument("path", help="network file or collection directory")
    p_analyze.add_argument("--matcher", help="required when PATH is a directory")
    add_build_flags(p_analyze)
    p_analyze.add_argument(
        "--from-graphml", action="store_true", help="force GraphML input parsing"
    )
    p_analyze.add_argument(
        "--full", action="store_true", help="also report whole-network metrics"
    )
    add_analysis_flags(p_analyze)
    p_analyze.add_argument("-o", "--output", help="output file (default stdout)")
    p_analyze.set_defaults(func=cmd_analyze)

    p_compare = sub.add_parser("compare", help="four-matcher comparison report")
    p_compare.add_argument("collection", help="directory of WSDL/SAWSDL files")
    add_build_flags(p_compare)
    add_analysis_flags(p_compare)
    p_compare.add_argument("-o", "--output", help="output file (default stdout)")
    p_compare.add_argument("--csv", help="also write the table projection as CSV")
    p_compare.set_defaults(func=cmd_compare)

    p_gen = sub.add_parser("gen", help="write a synthetic collection")
    p_gen.add_argument("out_dir", help="output directory")
    p_gen.add_argument("--services", type=int, default=30)
    p_gen.add_argument("--ops-per-service", type=int, default=3)
    p_gen.add_argument("--domains", type=int, default=3)
    p_gen.add_argument("--name-pool", type=int, default=40)
    p_gen.add_argument("--concept-pool", type=int, default=40)
    p_gen.add_argument("--depth", type=int, default=3)
    p_gen.add_argument("--branching", type=int, default=3)
    p_gen.add_argument("--min-inputs", type=int, default=1)
    p_gen.add_argument("--max-inputs", type=int, default=3)
    p_gen.add_argument("--min-outputs", type=int, default=1)
    p_gen.add_argument("--max-outputs", type=int, default=3)
    p_gen.add_argument("--annotation-rate", type=float, default=1.0)
    p_gen.add_argument("--cross-domain-rate", type=float, default=0.0)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.set_defaults(func=cmd_gen)

    p_export = sub.add_parser("export", help="convert a network file between formats")
    p_export.add_argument("network", help="network file (GraphML or edge list)")
    p_export.add_argument("--format", required=True, choices=EXPORT_FORMATS)
    p_export.add_argument(
        "--from-graphml", action="store_true", help="force GraphML input parsing"
    )
    p_export.add_argument("-o", "--output", help="output file (default stdout)")
    p_export.set_defaults(func=cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SvcnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
