"""Interaction-network extraction and complex-network analysis for
web-service description collections."""

__version__ = "0.1.0"

from .corpus import (
    CollectionStats,
    OperationDesc,
    ParameterDesc,
    ServiceCollection,
    ServiceDesc,
    collection_from_json,
    collection_stats,
    collection_to_json,
    load_collection,
    parse_description,
)
from .community import (
    Dendrogram,
    DendroTree,
    ModularityScore,
    Partition,
    best_partition,
    dendrogram_to_json,
    domain_overlap,
    modularity,
    partition_to_csv,
    walktrap,
)
from .errors import DegenerateInputError, SvcnetError, UsageError
from .gen import GenSpec, generate, planted_partition, write_collection_tree
from .matcher import ALL_KINDS, MatcherKind, match_params
from .metrics import (
    ComponentReport,
    DegreeReport,
    DistanceReport,
    SmallWorldReport,
    degree_report,
    distance_report,
    er_baseline,
    giant_component,
    transitivity,
    weak_components,
)
from .netbuild import (
    BuildOptions,
    InteractionNetwork,
    build_network,
    export_network,
    read_edgelist,
    read_graphml,
    trim_isolates,
)
from .ontology import Ontology, is_strict_subclass, load_ontology, make_ontology
from .plfit import PowerLawFit, fit_power_law, fit_with_gof, gof_pvalue, hurwitz_zeta

__all__ = [
    "ALL_KINDS",
    "BuildOptions",
    "CollectionStats",
    "ComponentReport",
    "DegenerateInputError",
    "DegreeReport",
    "Dendrogram",
    "DendroTree",
    "DistanceReport",
    "GenSpec",
    "InteractionNetwork",
    "MatcherKind",
    "ModularityScore",
    "OperationDesc",
    "Ontology",
    "ParameterDesc",
    "Partition",
    "PowerLawFit",
    "ServiceCollection",
    "ServiceDesc",
    "SmallWorldReport",
    "SvcnetError",
    "UsageError",
    "best_partition",
    "build_network",
    "collection_from_json",
    "collection_stats",
    "collection_to_json",
    "degree_report",
    "dendrogram_to_json",
    "distance_report",
    "domain_overlap",
    "er_baseline",
    "export_network",
    "fit_power_law",
    "fit_with_gof",
    "generate",
    "giant_component",
    "gof_pvalue",
    "hurwitz_zeta",
    "is_strict_subclass",
    "load_collection",
    "load_ontology",
    "make_ontology",
    "match_params",
    "modularity",
    "parse_description",
    "partition_to_csv",
    "planted_partition",
    "read_edgelist",
    "read_graphml",
    "transitivity",
    "trim_isolates",
    "walktrap",
    "weak_components",
    "write_collection_tree",
]
