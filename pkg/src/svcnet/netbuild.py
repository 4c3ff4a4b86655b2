"""Interaction-network construction and serialization.

An interaction network is a simple directed graph over operation ids.  A link
is drawn from operation i to operation j iff, for every input parameter of j,
a matching output parameter exists in i's outputs, i.e. i can supply all the
information j requires.  Candidate producers are generated through an inverted
index keyed by name or concept (expanded along the hierarchy for plug-in and
subsume), which is equivalent to the naive double loop over operation pairs.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from xml.sax.saxutils import escape, quoteattr

from .corpus import ParameterDesc, ServiceCollection
from .errors import SvcnetError, UsageError
from .matcher import MatcherKind
from .ontology import Ontology

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"

EXPORT_FORMATS = ("graphml", "dot", "edgelist")


@dataclass(frozen=True)
class BuildOptions:
    """Switches for the under-specified edge cases, recorded into reports.

    ``zero_input_targets=False`` denies incoming links to operations whose
    input set is empty: the vacuous forall would otherwise make them universal
    authorities without any actual data flow.  ``reflexive_subsumption``
    selects the inclusive plug-in/subsume variants.
    """

    zero_input_targets: bool = False
    reflexive_subsumption: bool = False


@dataclass(frozen=True)
class InteractionNetwork:
    """Simple digraph: nodes are operation ids, edge (i, j) means i can feed j."""

    nodes: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    kind: MatcherKind | None = None
    options: BuildOptions = field(default_factory=BuildOptions)

    def __post_init__(self) -> None:
        node_set = set(self.nodes)
        for src, dst in self.edges:
            if src == dst:
                raise ValueError(f"self-loop on {src!r}")
            if src not in node_set or dst not in node_set:
                raise ValueError(f"edge endpoint not a node: ({src!r}, {dst!r})")

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[str, str]]:
        return sorted(self.edges)

    def degrees(self) -> dict[str, int]:
        deg = {n: 0 for n in self.nodes}
        for src, dst in self.edges:
            deg[src] += 1
            deg[dst] += 1
        return deg


def build_network(
    coll: ServiceCollection,
    kind: MatcherKind,
    onto: Ontology | None = None,
    opts: BuildOptions = BuildOptions(),
) -> InteractionNetwork:
    """Extract the interaction network of ``coll`` under one matching function.

    Result is identical to testing every ordered operation pair with
    ``match_params``; the inverted index only prunes candidate producers.
    """
    if kind in (MatcherKind.PLUGIN, MatcherKind.SUBSUME) and onto is None:
        raise UsageError(f"{kind.value} matching requires an ontology")

    ops = sorted(coll.operations(), key=lambda op: op.op_id)
    node_ids = tuple(op.op_id for op in ops)
    if len(set(node_ids)) != len(node_ids):
        raise SvcnetError("operation ids are not unique within the collection")

    producers: dict[str, set[str]] = {}
    for op in ops:
        for q in op.outputs:
            key = q.name if kind is MatcherKind.EQUAL else q.concept
            if key is not None:
                producers.setdefault(key, set()).add(op.op_id)

    def candidates(p: ParameterDesc) -> set[str]:
        if kind is MatcherKind.EQUAL:
            return producers.get(p.name, set())
        if p.concept is None:
            return set()
        if kind is MatcherKind.EXACT:
            return producers.get(p.concept, set())
        if kind is MatcherKind.PLUGIN:
            keys = set(onto.descendants(p.concept))
        else:
            keys = set(onto.ancestors(p.concept))
        if opts.reflexive_subsumption:
            keys.add(p.concept)
        found: set[str] = set()
        for key in keys:
            found |= producers.get(key, set())
        return found

    edges: set[tuple[str, str]] = set()
    all_ids = set(node_ids)
    for op in ops:
        if not op.inputs:
            if opts.zero_input_targets:
                edges.update((i, op.op_id) for i in all_ids if i != op.op_id)
            continue
        feeders: set[str] | None = None
        for p in sorted(op.inputs, key=lambda p: (p.name, p.concept or "")):
            cand = candidates(p)
            # copy: candidates() may hand back an index set, and feeders is
            # mutated below
            feeders = set(cand) if feeders is None else feeders & cand
            if not feeders:
                break
        if feeders:
            feeders.discard(op.op_id)
            edges.update((i, op.op_id) for i in feeders)

    return InteractionNetwork(nodes=node_ids, edges=frozenset(edges), kind=kind, options=opts)


def trim_isolates(net: InteractionNetwork) -> tuple[InteractionNetwork, float]:
    """Drop total-degree-0 nodes; return the trimmed network and the removed
    fraction of the original nodes."""
    if not net.nodes:
        return net, 0.0
    deg = net.degrees()
    kept = tuple(n for n in net.nodes if deg[n] > 0)
    fraction = (len(net.nodes) - len(kept)) / len(net.nodes)
    trimmed = InteractionNetwork(nodes=kept, edges=net.edges, kind=net.kind, options=net.options)
    return trimmed, fraction


# ---------------------------------------------------------------------------
# Serialization: GraphML, DOT, edge list (all deterministic)
# ---------------------------------------------------------------------------


def export_network(
    net: InteractionNetwork,
    format: str,
    domains: dict[str, str | None] | None = None,
) -> str:
    """Render the network; nodes and edges are sorted so output is stable.

    Only GraphML preserves isolated nodes, the matcher kind, the build options
    and (optionally) per-node domain labels; the edge list is just sorted
    ``src<TAB>dst`` lines.
    """
    if format == "graphml":
        return _to_graphml(net, domains)
    if format == "dot":
        return _to_dot(net)
    if format == "edgelist":
        return "".join(f"{src}\t{dst}\n" for src, dst in net.sorted_edges())
    raise UsageError(f"unknown export format {format!r} (expected one of: "
                     + ", ".join(EXPORT_FORMATS) + ")")


def _to_graphml(net: InteractionNetwork, domains: dict[str, str | None] | None) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<graphml xmlns="{GRAPHML_NS}">',
        '  <key id="kind" for="graph" attr.name="kind" attr.type="string"/>',
        '  <key id="zit" for="graph" attr.name="zero_input_targets" attr.type="boolean"/>',
        '  <key id="rs" for="graph" attr.name="reflexive_subsumption" attr.type="boolean"/>',
        '  <key id="domain" for="node" attr.name="domain" attr.type="string"/>',
        '  <graph id="interactions" edgedefault="directed">',
        f'    <data key="kind">{escape(net.kind.value if net.kind else "")}</data>',
        f'    <data key="zit">{str(net.options.zero_input_targets).lower()}</data>',
        f'    <data key="rs">{str(net.options.reflexive_subsumption).lower()}</data>',
    ]
    for node in sorted(net.nodes):
        domain = domains.get(node) if domains else None
        if domain is None:
            lines.append(f"    <node id={quoteattr(node)}/>")
        else:
            lines.append(
                f"    <node id={quoteattr(node)}>"
                f'<data key="domain">{escape(domain)}</data></node>'
            )
    for src, dst in net.sorted_edges():
        lines.append(f"    <edge source={quoteattr(src)} target={quoteattr(dst)}/>")
    lines.append("  </graph>")
    lines.append("</graphml>")
    return "\n".join(lines) + "\n"


def _to_dot(net: InteractionNetwork) -> str:
    def q(name: str) -> str:
        return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'

    lines = ["digraph interactions {"]
    lines.append(
        "  graph [kind=%s, zero_input_targets=%s, reflexive_subsumption=%s];"
        % (
            q(net.kind.value if net.kind else ""),
            q(str(net.options.zero_input_targets).lower()),
            q(str(net.options.reflexive_subsumption).lower()),
        )
    )
    for node in sorted(net.nodes):
        lines.append(f"  {q(node)};")
    for src, dst in net.sorted_edges():
        lines.append(f"  {q(src)} -> {q(dst)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def read_graphml(text: str) -> tuple[InteractionNetwork, dict[str, str] | None]:
    """Parse a GraphML document written by :func:`export_network`.

    Returns the network plus the per-node domain labels when present.
    """
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise SvcnetError(f"malformed GraphML: {exc}") from exc

    graph = root.find(f"{{{GRAPHML_NS}}}graph")
    if graph is None:
        raise SvcnetError("GraphML document has no <graph> element")

    key_names = {
        el.get("id"): el.get("attr.name")
        for el in root.findall(f"{{{GRAPHML_NS}}}key")
    }
    graph_attrs: dict[str, str] = {}
    for data in graph.findall(f"{{{GRAPHML_NS}}}data"):
        name = key_names.get(data.get("key", ""), data.get("key"))
        if name:
            graph_attrs[name] = data.text or ""

    nodes: list[str] = []
    domains: dict[str, str] = {}
    for node in graph.findall(f"{{{GRAPHML_NS}}}node"):
        node_id = node.get("id")
        if node_id is None:
            raise SvcnetError("GraphML node without id")
        nodes.append(node_id)
        for data in node.findall(f"{{{GRAPHML_NS}}}data"):
            if key_names.get(data.get("key", "")) == "domain" and data.text:
                domains[node_id] = data.text

    edges = set()
    for edge in graph.findall(f"{{{GRAPHML_NS}}}edge"):
        src, dst = edge.get("source"), edge.get("target")
        if src is None or dst is None:
            raise SvcnetError("GraphML edge without source/target")
        edges.add((src, dst))

    kind_value = graph_attrs.get("kind", "")
    kind = MatcherKind(kind_value) if kind_value else None
    opts = BuildOptions(
        zero_input_targets=graph_attrs.get("zero_input_targets") == "true",
        reflexive_subsumption=graph_attrs.get("reflexive_subsumption") == "true",
    )
    net = InteractionNetwork(
        nodes=tuple(sorted(nodes)), edges=frozenset(edges), kind=kind, options=opts
    )
    return net, (domains or None)


def read_edgelist(text: str) -> InteractionNetwork:
    """Parse sorted ``src<TAB>dst`` lines; nodes are the endpoint union."""
    edges = set()
    nodes = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2 or not fields[0] or not fields[1]:
            raise SvcnetError(f"edge list line {lineno}: expected src<TAB>dst, got {raw!r}")
        src, dst = fields
        nodes.update((src, dst))
        if src != dst:
            edges.add((src, dst))
    return InteractionNetwork(nodes=tuple(sorted(nodes)), edges=frozenset(edges), kind=None)
