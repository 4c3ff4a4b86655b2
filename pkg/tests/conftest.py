"""Shared fixtures: analytic graphs, the worked three-operation example, and
independent oracles (Floyd-Warshall distances, naive pairwise network build,
brute-force triangle and modularity counters)."""

from __future__ import annotations

import numpy as np
import pytest

from svcnet.corpus import (
    OperationDesc,
    ParameterDesc,
    ServiceCollection,
    ServiceDesc,
)
from svcnet.matcher import MatcherKind, match_params
from svcnet.netbuild import BuildOptions, InteractionNetwork


def params(*names: str) -> frozenset[ParameterDesc]:
    return frozenset(ParameterDesc(name=n) for n in names)


def make_net(edges, nodes=None, kind=None) -> InteractionNetwork:
    edge_set = frozenset(tuple(e) for e in edges)
    node_set = set(nodes or ())
    for a, b in edge_set:
        node_set.update((a, b))
    return InteractionNetwork(nodes=tuple(sorted(node_set)), edges=edge_set, kind=kind)


def undirected(pairs) -> InteractionNetwork:
    """Undirected test graph stored with one directed edge per pair."""
    return make_net({(min(a, b), max(a, b)) for a, b in pairs})


@pytest.fixture
def fig1_collection() -> ServiceCollection:
    """The worked example: op1 outputs {c,d,e}, op2 needs {c,d} and outputs
    {e,f}, op3 needs {a,f,g}; unlisted sets are empty."""
    ops = (
        OperationDesc("figure1", "op1", inputs=params(), outputs=params("c", "d", "e")),
        OperationDesc("figure1", "op2", inputs=params("c", "d"), outputs=params("e", "f")),
        OperationDesc("figure1", "op3", inputs=params("a", "f", "g"), outputs=params()),
    )
    return ServiceCollection(services=(ServiceDesc("figure1", None, ops),))


@pytest.fixture
def two_triangle_bridge() -> InteractionNetwork:
    """Two triangles {0,1,2} and {3,4,5} joined by the bridge 2-3."""
    return undirected(
        [("t0", "t1"), ("t1", "t2"), ("t0", "t2"),
         ("t3", "t4"), ("t4", "t5"), ("t3", "t5"),
         ("t2", "t3")]
    )


@pytest.fixture
def k4() -> InteractionNetwork:
    nodes = [f"k{i}" for i in range(4)]
    return undirected([(a, b) for i, a in enumerate(nodes) for b in nodes[i + 1:]])


@pytest.fixture
def star5() -> InteractionNetwork:
    return undirected([("hub", f"s{i}") for i in range(5)])


@pytest.fixture
def path3() -> InteractionNetwork:
    return make_net([("p1", "p2"), ("p2", "p3")])


# ---------------------------------------------------------------------------
# Independent oracles
# ---------------------------------------------------------------------------


def floyd_warshall(net: InteractionNetwork) -> np.ndarray:
    """All-pairs shortest directed distances by min-plus iteration."""
    nodes = sorted(net.nodes)
    index = {n: i for i, n in enumerate(nodes)}
    n = len(nodes)
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for src, dst in net.edges:
        dist[index[src], index[dst]] = 1.0
    for k in range(n):
        dist = np.minimum(dist, dist[:, k : k + 1] + dist[k : k + 1, :])
    return dist


def naive_build(coll, kind: MatcherKind, onto=None, opts=BuildOptions()):
    """The defining double loop over ordered operation pairs."""
    ops = sorted(coll.operations(), key=lambda op: op.op_id)
    edges = set()
    for i in ops:
        for j in ops:
            if i.op_id == j.op_id:
                continue
            if not j.inputs:
                if opts.zero_input_targets:
                    edges.add((i.op_id, j.op_id))
                continue
            if all(
                any(
                    match_params(kind, q, p, onto, reflexive=opts.reflexive_subsumption)
                    for q in i.outputs
                )
                for p in j.inputs
            ):
                edges.add((i.op_id, j.op_id))
    return frozenset(edges)


def count_triangles_and_triples(net: InteractionNetwork) -> tuple[int, int]:
    """Brute-force triangle/connected-triple counts on the undirected graph."""
    nodes = sorted(net.nodes)
    adj = {n: set() for n in nodes}
    for a, b in net.edges:
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    triangles = 0
    triples = 0
    for i, u in enumerate(nodes):
        for v in nodes[i + 1:]:
            for w in nodes:
                if w <= v:
                    continue
                trio = [(u, v), (u, w), (v, w)]
                present = sum(1 for a, b in trio if b in adj[a])
                if present == 3:
                    triangles += 1
    for u in nodes:
        d = len(adj[u])
        triples += d * (d - 1) // 2
    return triangles, triples


def modularity_by_counting(net: InteractionNetwork, groups: list[set[str]]) -> float:
    """Direct edge-fraction evaluation of Q on the undirected projection."""
    edges = {tuple(sorted(e)) for e in net.edges}
    m = len(edges)
    q = 0.0
    for group in groups:
        internal = sum(1 for a, b in edges if a in group and b in group)
        ends = sum(1 for a, b in edges for x in (a, b) if x in group)
        q += internal / m - (ends / (2 * m)) ** 2
    return q
