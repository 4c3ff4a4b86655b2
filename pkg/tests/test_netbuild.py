import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_net, naive_build, params
from svcnet.corpus import OperationDesc, ServiceCollection, ServiceDesc
from svcnet.errors import UsageError
from svcnet.gen import GenSpec, generate
from svcnet.matcher import ALL_KINDS, MatcherKind
from svcnet.netbuild import (
    BuildOptions,
    InteractionNetwork,
    build_network,
    export_network,
    read_edgelist,
    read_graphml,
    trim_isolates,
)
from svcnet.ontology import Ontology


def test_fig1_equal_network(fig1_collection):
    net = build_network(fig1_collection, MatcherKind.EQUAL)
    assert net.edges == {("figure1::op1", "figure1::op2")}
    assert len(net.nodes) == 3


def test_zero_input_operations_get_no_incoming_edges_by_default(fig1_collection):
    net = build_network(fig1_collection, MatcherKind.EQUAL)
    assert all(dst != "figure1::op1" for _, dst in net.edges)


def test_zero_input_targets_flag_makes_them_universal_sinks(fig1_collection):
    opts = BuildOptions(zero_input_targets=True)
    net = build_network(fig1_collection, MatcherKind.EQUAL, opts=opts)
    incoming = {src for src, dst in net.edges if dst == "figure1::op1"}
    assert incoming == {"figure1::op2", "figure1::op3"}


def test_no_self_loops(fig1_collection):
    net = build_network(fig1_collection, MatcherKind.EQUAL)
    assert all(src != dst for src, dst in net.edges)


def test_enlarging_outputs_never_removes_edges():
    def coll_with_outputs(names):
        ops = (
            OperationDesc("s", "producer", inputs=params(), outputs=params(*names)),
            OperationDesc("s", "consumer", inputs=params("a", "b"), outputs=params("z")),
        )
        return ServiceCollection(services=(ServiceDesc("s", None, ops),))

    small = build_network(coll_with_outputs(["a", "b"]), MatcherKind.EQUAL)
    large = build_network(coll_with_outputs(["a", "b", "c", "d"]), MatcherKind.EQUAL)
    assert small.edges <= large.edges
    assert ("s::producer", "s::consumer") in small.edges


def test_semantic_kind_without_ontology_is_usage_error(fig1_collection):
    with pytest.raises(UsageError):
        build_network(fig1_collection, MatcherKind.PLUGIN)


def test_node_count_identical_across_kinds():
    coll, onto, _ = generate(GenSpec(n_services=8, seed=3))
    nets = [build_network(coll, kind, onto) for kind in ALL_KINDS]
    counts = {len(net.nodes) for net in nets}
    assert counts == {len(coll.operations())}


@pytest.mark.parametrize("kind", ALL_KINDS)
@pytest.mark.parametrize("reflexive", [False, True])
def test_index_build_equals_naive_double_loop(kind, reflexive):
    coll, onto, _ = generate(
        GenSpec(
            n_services=10,
            ops_per_service=2,
            n_domains=2,
            name_pool_size=12,
            concept_pool_size=8,
            hierarchy_depth=3,
            branching=2,
            annotation_rate=0.7,
            cross_domain_rate=0.2,
            seed=11,
        )
    )
    opts = BuildOptions(reflexive_subsumption=reflexive)
    net = build_network(coll, kind, onto, opts)
    assert net.edges == naive_build(coll, kind, onto, opts)


def test_index_build_equals_naive_with_zero_input_targets():
    spec = GenSpec(n_services=6, inputs_per_op=(0, 2), seed=5)
    coll, onto, _ = generate(spec)
    opts = BuildOptions(zero_input_targets=True)
    for kind in ALL_KINDS:
        net = build_network(coll, kind, onto, opts)
        assert net.edges == naive_build(coll, kind, onto, opts)


def test_plugin_subsume_converse_on_single_parameter_operations():
    """With single-parameter operations, swapping every operation's inputs and
    outputs turns each plug-in edge (i, j) into the subsume edge (j, i)."""
    coll, onto, _ = generate(
        GenSpec(
            n_services=12,
            ops_per_service=2,
            inputs_per_op=(1, 1),
            outputs_per_op=(1, 1),
            hierarchy_depth=3,
            branching=2,
            concept_pool_size=15,
            seed=9,
        )
    )
    swapped = ServiceCollection(
        services=tuple(
            dataclasses.replace(
                svc,
                operations=tuple(
                    dataclasses.replace(op, inputs=op.outputs, outputs=op.inputs)
                    for op in svc.operations
                ),
            )
            for svc in coll.services
        )
    )
    plugin = build_network(coll, MatcherKind.PLUGIN, onto)
    subsume_swapped = build_network(swapped, MatcherKind.SUBSUME, onto)
    assert {(j, i) for i, j in plugin.edges} == subsume_swapped.edges


# ---------------------------------------------------------------------------
# Trimming
# ---------------------------------------------------------------------------


def test_trim_isolates_fraction():
    net = make_net(
        [("a", "b"), ("b", "c")],
        nodes=[f"iso{i}" for i in range(4)] + list("abcdef"),
    )
    assert len(net.nodes) == 10
    trimmed, fraction = trim_isolates(net)
    assert len(trimmed.nodes) == 3
    assert fraction == pytest.approx(0.7)
    assert trimmed.edges == net.edges


def test_trim_without_isolates_is_identity():
    net = make_net([("a", "b")])
    trimmed, fraction = trim_isolates(net)
    assert trimmed == net
    assert fraction == 0.0


def test_trim_empty_network():
    net = InteractionNetwork(nodes=(), edges=frozenset())
    trimmed, fraction = trim_isolates(net)
    assert trimmed.nodes == () and fraction == 0.0


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def test_edgelist_of_single_edge_network():
    net = make_net([("a", "b")])
    assert export_network(net, "edgelist") == "a\tb\n"


def test_exports_are_deterministic(fig1_collection):
    net = build_network(fig1_collection, MatcherKind.EQUAL)
    for fmt in ("graphml", "dot", "edgelist"):
        assert export_network(net, fmt) == export_network(net, fmt)


def test_unknown_format_is_usage_error():
    with pytest.raises(UsageError):
        export_network(make_net([("a", "b")]), "gexf")


def test_graphml_round_trip_preserves_everything(fig1_collection):
    opts = BuildOptions(zero_input_targets=True, reflexive_subsumption=True)
    net = build_network(fig1_collection, MatcherKind.SUBSUME, onto=Ontology.empty(), opts=opts)
    domains = {node: "travel" for node in net.nodes}
    text = export_network(net, "graphml", domains=domains)
    again, read_domains = read_graphml(text)
    assert again == net
    assert read_domains == domains


def test_graphml_keeps_isolated_nodes():
    net = make_net([("a", "b")], nodes=["a", "b", "lonely"])
    again, _ = read_graphml(export_network(net, "graphml"))
    assert set(again.nodes) == {"a", "b", "lonely"}


def test_edgelist_round_trip_loses_only_metadata(fig1_collection):
    net = build_network(fig1_collection, MatcherKind.EQUAL)
    trimmed, _ = trim_isolates(net)
    again = read_edgelist(export_network(net, "edgelist"))
    assert again.edges == net.edges
    assert set(again.nodes) == {n for e in net.edges for n in e}
    assert again.kind is None


def test_dot_output_shape():
    net = make_net([("a", "b")], nodes=["a", "b", "c"], kind=MatcherKind.EQUAL)
    text = export_network(net, "dot")
    assert text.startswith("digraph")
    assert '"a" -> "b";' in text
    assert '"c";' in text


def test_bad_edgelist_line_rejected():
    with pytest.raises(Exception, match="line 1"):
        read_edgelist("justonefield\n")


# ---------------------------------------------------------------------------
# Construction invariants
# ---------------------------------------------------------------------------


def test_network_rejects_self_loop():
    with pytest.raises(ValueError):
        InteractionNetwork(nodes=("a",), edges=frozenset({("a", "a")}))


def test_network_rejects_dangling_edges():
    with pytest.raises(ValueError):
        InteractionNetwork(nodes=("a",), edges=frozenset({("a", "b")}))


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_generated_networks_respect_invariants(seed):
    coll, onto, _ = generate(GenSpec(n_services=5, seed=seed, annotation_rate=0.5))
    for kind in ALL_KINDS:
        net = build_network(coll, kind, onto)
        node_set = set(net.nodes)
        assert all(src != dst for src, dst in net.edges)
        assert all(src in node_set and dst in node_set for src, dst in net.edges)
