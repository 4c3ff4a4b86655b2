"""Walktrap community detection and Newman modularity.

Direction is discarded: both run on the undirected projection of the
interaction network.  Walktrap measures distances between nodes through
t-step random-walk transition probabilities and agglomerates adjacent
communities with the Ward-style merge that minimizes the increase in squared
walk distances.  Disconnected inputs are processed per weak component, giving
a forest of dendrograms; the best partition is the modularity-maximal cut,
scanned per tree (modularity is additive over components).

All tie-breaking is lexicographic by smallest member node id, so runs are
reproducible.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass

import numpy as np

from .corpus import ServiceCollection
from .errors import SvcnetError, UsageError
from .netbuild import InteractionNetwork


@dataclass(frozen=True)
class DendroTree:
    """Merge tree for one weak component; leaves are sorted node ids.

    Merges reference local community indices: leaf i is index i, the merge at
    position p creates community ``len(leaves) + p``.  Heights are the running
    total of Ward merge costs, hence non-decreasing.
    """

    leaves: tuple[str, ...]
    merges: tuple[tuple[int, int, float], ...]


@dataclass(frozen=True)
class Dendrogram:
    trees: tuple[DendroTree, ...]

    @property
    def n_leaves(self) -> int:
        return sum(len(t.leaves) for t in self.trees)

    @property
    def n_merges(self) -> int:
        return sum(len(t.merges) for t in self.trees)


@dataclass(frozen=True)
class Partition:
    """Total assignment of node ids to dense community ids 0..k-1."""

    assignment: dict[str, int]
    community_count: int

    def communities(self) -> list[tuple[str, ...]]:
        groups: dict[int, list[str]] = {}
        for node in sorted(self.assignment):
            groups.setdefault(self.assignment[node], []).append(node)
        return [tuple(groups[c]) for c in range(self.community_count)]


@dataclass(frozen=True)
class ModularityScore:
    q: float


def _undirected_edges(net: InteractionNetwork) -> list[tuple[str, str]]:
    seen = set()
    for src, dst in net.edges:
        a, b = (src, dst) if src < dst else (dst, src)
        seen.add((a, b))
    return sorted(seen)


def _undirected_adjacency(net: InteractionNetwork) -> dict[str, list[str]]:
    adj: dict[str, list[str]] = {n: [] for n in net.nodes}
    for a, b in _undirected_edges(net):
        adj[a].append(b)
        adj[b].append(a)
    return adj


def _weak_component_nodes(net: InteractionNetwork) -> list[list[str]]:
    adj = _undirected_adjacency(net)
    seen: set[str] = set()
    comps: list[list[str]] = []
    for start in sorted(net.nodes):
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        members = []
        while stack:
            node = stack.pop()
            members.append(node)
            for nb in adj[node]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        comps.append(sorted(members))
    comps.sort(key=lambda c: c[0])
    return comps


# ---------------------------------------------------------------------------
# Walktrap
# ---------------------------------------------------------------------------


def walktrap(net: InteractionNetwork, walk_length: int = 4) -> Dendrogram:
    """Build the Walktrap merge forest with t-step walk distances."""
    if walk_length <= 0:
        raise UsageError("walk length must be >= 1")
    if not net.nodes:
        raise UsageError("walktrap needs a non-empty network")
    edges = _undirected_edges(net)
    trees = [
        _walktrap_component(comp, edges, walk_length)
        for comp in _weak_component_nodes(net)
    ]
    return Dendrogram(trees=tuple(trees))


def _walktrap_component(
    members: list[str], all_edges: list[tuple[str, str]], t: int
) -> DendroTree:
    leaves = tuple(members)
    n = len(leaves)
    if n == 1:
        return DendroTree(leaves=leaves, merges=())

    index = {node: i for i, node in enumerate(leaves)}
    adj = np.zeros((n, n), dtype=np.float64)
    for a, b in all_edges:
        ia, ib = index.get(a), index.get(b)
        if ia is not None and ib is not None:
            adj[ia, ib] = 1.0
            adj[ib, ia] = 1.0

    deg = adj.sum(axis=1)
    trans = adj / deg[:, None]
    walk = np.linalg.matrix_power(trans, t)
    inv_deg = 1.0 / deg

    # Community state, keyed by local community id (leaves 0..n-1, then n+i).
    size: dict[int, int] = {i: 1 for i in range(n)}
    prob: dict[int, np.ndarray] = {i: walk[i] for i in range(n)}
    min_id: dict[int, str] = {i: leaves[i] for i in range(n)}
    neighbors: dict[int, set[int]] = {i: set() for i in range(n)}
    for i in range(n):
        for j in np.flatnonzero(adj[i]):
            if int(j) != i:
                neighbors[i].add(int(j))
    alive: set[int] = set(range(n))

    def merge_cost(c1: int, c2: int) -> float:
        diff = prob[c1] - prob[c2]
        s1, s2 = size[c1], size[c2]
        return (s1 * s2 / (s1 + s2)) * float((diff * diff * inv_deg).sum()) / n

    def heap_entry(c1: int, c2: int) -> tuple:
        if min_id[c2] < min_id[c1]:
            c1, c2 = c2, c1
        return (merge_cost(c1, c2), min_id[c1], min_id[c2], c1, c2)

    heap: list[tuple] = []
    for i in range(n):
        for j in sorted(neighbors[i]):
            if i < j:
                heapq.heappush(heap, heap_entry(i, j))

    merges: list[tuple[int, int, float]] = []
    sigma = 0.0
    next_id = n
    while len(merges) < n - 1:
        cost, _, _, c1, c2 = heapq.heappop(heap)
        if c1 not in alive or c2 not in alive:
            continue
        new = next_id
        next_id += 1
        sigma += cost
        merges.append((c1, c2, sigma))

        s1, s2 = size[c1], size[c2]
        prob[new] = (s1 * prob[c1] + s2 * prob[c2]) / (s1 + s2)
        size[new] = s1 + s2
        min_id[new] = min(min_id[c1], min_id[c2])
        nbrs = (neighbors[c1] | neighbors[c2]) - {c1, c2}
        neighbors[new] = nbrs
        alive -= {c1, c2}
        alive.add(new)
        for other in sorted(nbrs, key=lambda c: min_id[c]):
            neighbors[other] -= {c1, c2}
            neighbors[other].add(new)
            heapq.heappush(heap, heap_entry(new, other))
        for dead in (c1, c2):
            prob.pop(dead)
    return DendroTree(leaves=leaves, merges=tuple(merges))


# ---------------------------------------------------------------------------
# Modularity
# ---------------------------------------------------------------------------


def modularity(net: InteractionNetwork, partition: Partition) -> ModularityScore:
    """Newman modularity of a total partition on the undirected projection."""
    node_set = set(net.nodes)
    assigned = set(partition.assignment)
    if assigned != node_set:
        missing = sorted(node_set - assigned)[:3]
        extra = sorted(assigned - node_set)[:3]
        raise SvcnetError(
            f"partition does not match network (missing={missing}, extra={extra})"
        )
    edges = _undirected_edges(net)
    m = len(edges)
    if m == 0:
        return ModularityScore(0.0)

    internal: dict[int, int] = {}
    endpoint: dict[int, int] = {}
    for a, b in edges:
        ca, cb = partition.assignment[a], partition.assignment[b]
        endpoint[ca] = endpoint.get(ca, 0) + 1
        endpoint[cb] = endpoint.get(cb, 0) + 1
        if ca == cb:
            internal[ca] = internal.get(ca, 0) + 1

    q = 0.0
    for c in sorted(endpoint):
        e_cc = internal.get(c, 0) / m
        a_c = endpoint[c] / (2 * m)
        q += e_cc - a_c * a_c
    return ModularityScore(q)


def best_partition(
    dendrogram: Dendrogram, net: InteractionNetwork
) -> tuple[Partition, ModularityScore]:
    """Scan every dendrogram cut and return the modularity-maximal partition.

    Ties prefer fewer communities.  Cuts are chosen per tree; since
    communities never span components, per-tree maximization is exactly the
    maximum over all combined cuts.
    """
    edges = _undirected_edges(net)
    m = len(edges)
    deg: dict[str, int] = {n: 0 for n in net.nodes}
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1

    groups: list[list[str]] = []
    if m == 0:
        groups = [[n] for n in sorted(net.nodes)]
        q_total = 0.0
    else:
        q_total = sum(-((deg[n] / (2 * m)) ** 2) for n in sorted(net.nodes))
        for tree in dendrogram.trees:
            chosen, q_gain = _best_tree_cut(tree, edges, deg, m)
            q_total += q_gain
            groups.extend(chosen)

    groups.sort(key=lambda g: g[0])
    assignment = {node: cid for cid, group in enumerate(groups) for node in group}
    if set(assignment) != set(net.nodes):
        raise SvcnetError("dendrogram does not cover the network's nodes")
    part = Partition(assignment=assignment, community_count=len(groups))
    return part, ModularityScore(q_total)


def _best_tree_cut(
    tree: DendroTree,
    edges: list[tuple[str, str]],
    deg: dict[str, int],
    m: int,
) -> tuple[list[list[str]], float]:
    leaves = tree.leaves
    n = len(leaves)
    index = {node: i for i, node in enumerate(leaves)}

    cross: dict[int, dict[int, int]] = {i: {} for i in range(n)}
    for a, b in edges:
        ia, ib = index.get(a), index.get(b)
        if ia is None or ib is None:
            continue
        cross[ia][ib] = cross[ia].get(ib, 0) + 1
        cross[ib][ia] = cross[ib].get(ia, 0) + 1

    sum_deg: dict[int, int] = {i: deg[leaves[i]] for i in range(n)}

    gains = [0.0]
    q = 0.0
    for pos, (c1, c2, _) in enumerate(tree.merges):
        between = cross[c1].get(c2, 0)
        q += between / m - 2.0 * (sum_deg[c1] / (2 * m)) * (sum_deg[c2] / (2 * m))
        gains.append(q)
        new = n + pos
        sum_deg[new] = sum_deg[c1] + sum_deg[c2]
        merged: dict[int, int] = {}
        for source in (c1, c2):
            for other, count in cross.pop(source).items():
                if other in (c1, c2):
                    continue
                merged[other] = merged.get(other, 0) + count
                peer = cross[other]
                peer.pop(source, None)
                peer[new] = peer.get(new, 0) + count
        cross[new] = merged

    best_t = max(range(len(gains)), key=lambda i: (gains[i], i))

    parent = list(range(n + len(tree.merges)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for pos in range(best_t):
        c1, c2, _ = tree.merges[pos]
        new = n + pos
        parent[find(c1)] = new
        parent[find(c2)] = new

    members: dict[int, list[str]] = {}
    for i, node in enumerate(leaves):
        members.setdefault(find(i), []).append(node)
    return [sorted(g) for g in members.values()], gains[best_t]


# ---------------------------------------------------------------------------
# Domain overlap
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DomainOverlap:
    available: bool
    contingency: tuple[tuple[int, str, int], ...]  # (community, domain, count)
    purity: float | None


def domain_overlap(
    partition: Partition, coll: ServiceCollection | dict[str, str | None]
) -> DomainOverlap:
    """Contingency of communities against thematic domains, plus purity.

    ``coll`` may be a collection or a precomputed ``op_id -> domain`` map.
    Unlabeled operations count under the pseudo-domain ``(none)``; if nothing
    is labeled the overlap is reported unavailable.
    """
    if isinstance(coll, ServiceCollection):
        domains = coll.domain_of_operation()
    else:
        domains = coll
    labeled = {
        node: domains.get(node) for node in partition.assignment
    }
    if not any(v is not None for v in labeled.values()):
        return DomainOverlap(available=False, contingency=(), purity=None)

    counts: dict[tuple[int, str], int] = {}
    for node in sorted(partition.assignment):
        key = (partition.assignment[node], labeled[node] or "(none)")
        counts[key] = counts.get(key, 0) + 1

    best_per_community: dict[int, int] = {}
    for (community, _), count in counts.items():
        best_per_community[community] = max(best_per_community.get(community, 0), count)
    total = len(partition.assignment)
    purity = sum(best_per_community.values()) / total if total else None

    table = tuple(
        (community, domain, counts[(community, domain)])
        for community, domain in sorted(counts)
    )
    return DomainOverlap(available=True, contingency=table, purity=purity)


# ---------------------------------------------------------------------------
# Exports
# ---------------------------------------------------------------------------


def partition_to_csv(partition: Partition) -> str:
    lines = ["node_id,community_id"]
    for node in sorted(partition.assignment):
        lines.append(f"{node},{partition.assignment[node]}")
    return "\n".join(lines) + "\n"


def dendrogram_to_json(dendrogram: Dendrogram) -> str:
    doc = {
        "trees": [
            {
                "leaves": list(tree.leaves),
                "merges": [[a, b, height] for a, b, height in tree.merges],
            }
            for tree in dendrogram.trees
        ]
    }
    return json.dumps(doc, indent=2) + "\n"
