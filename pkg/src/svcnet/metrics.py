"""Structural network properties.

Components and the giant component, directed distances (average and
diameter), transitivity on the undirected simplification, degree statistics
with hub/authority rankings, and the Erdos-Renyi small-world baseline.

Distances come from a level-synchronous BFS run from every node at once over
the dense adjacency matrix; averages are taken over reachable ordered pairs
only and the excluded count is reported, so the convention is auditable.
Weak connectivity is used for components throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .netbuild import InteractionNetwork


@dataclass(frozen=True)
class ComponentReport:
    component_sizes: tuple[int, ...]
    giant_node_fraction: float
    giant_link_fraction: float


@dataclass(frozen=True)
class DistanceReport:
    average_distance: float | None
    diameter: int | None
    reachable_ordered_pairs: int
    unreachable_ordered_pairs: int


@dataclass(frozen=True)
class DegreeReport:
    in_histogram: tuple[tuple[int, int], ...]
    out_histogram: tuple[tuple[int, int], ...]
    total_histogram: tuple[tuple[int, int], ...]
    hubs: tuple[tuple[str, int], ...]
    authorities: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class SmallWorldReport:
    er_estimate: float | None
    er_sampled_mean: float | None
    er_sampled_stddev: float | None
    ratio: float | None
    samples: int
    seed: int


# ---------------------------------------------------------------------------
# Adjacency helpers
# ---------------------------------------------------------------------------


def _adjacency(net: InteractionNetwork) -> tuple[list[str], np.ndarray]:
    nodes = sorted(net.nodes)
    index = {n: i for i, n in enumerate(nodes)}
    adj = np.zeros((len(nodes), len(nodes)), dtype=bool)
    for src, dst in net.sorted_edges():
        adj[index[src], index[dst]] = True
    return nodes, adj


def _all_pairs_distances(adj: np.ndarray) -> np.ndarray:
    """Directed distance matrix (np.inf where unreachable, 0 on the diagonal).

    Level-synchronous BFS from all sources simultaneously: one boolean matrix
    product per BFS level.
    """
    n = adj.shape[0]
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    if n == 0:
        return dist
    reached = np.eye(n, dtype=bool)
    frontier = np.eye(n, dtype=bool)
    adj_f = adj.astype(np.float32)
    level = 0
    while frontier.any():
        level += 1
        nxt = (frontier.astype(np.float32) @ adj_f) > 0
        nxt &= ~reached
        if not nxt.any():
            break
        dist[nxt] = level
        reached |= nxt
        frontier = nxt
    return dist


# ---------------------------------------------------------------------------
# Components
# ---------------------------------------------------------------------------


def _component_members(net: InteractionNetwork) -> list[tuple[str, ...]]:
    """Weakly connected components, largest first; ties broken by the
    lexicographically smallest member id."""
    parent: dict[str, str] = {n: n for n in net.nodes}

    def find(x: str) -> str:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for src, dst in net.sorted_edges():
        ra, rb = find(src), find(dst)
        if ra != rb:
            parent[rb] = ra

    groups: dict[str, list[str]] = {}
    for n in sorted(net.nodes):
        groups.setdefault(find(n), []).append(n)
    members = [tuple(g) for g in groups.values()]
    members.sort(key=lambda g: (-len(g), g[0]))
    return members


def weak_components(net: InteractionNetwork) -> ComponentReport:
    if not net.nodes:
        return ComponentReport((), 0.0, 0.0)
    members = _component_members(net)
    sizes = tuple(len(g) for g in members)
    giant = set(members[0])
    giant_links = sum(1 for src, _ in net.edges if src in giant)
    node_fraction = len(giant) / len(net.nodes)
    link_fraction = giant_links / len(net.edges) if net.edges else 0.0
    return ComponentReport(sizes, node_fraction, link_fraction)


def giant_component(net: InteractionNetwork) -> InteractionNetwork:
    """Induced subgraph on the largest weak component."""
    if not net.nodes:
        return net
    giant = set(_component_members(net)[0])
    edges = frozenset((s, d) for s, d in net.edges if s in giant)
    return InteractionNetwork(
        nodes=tuple(sorted(giant)), edges=edges, kind=net.kind, options=net.options
    )


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------


def distance_report(net: InteractionNetwork) -> DistanceReport:
    """Average directed distance and diameter over reachable ordered pairs."""
    n = net.n_nodes
    if n == 0:
        return DistanceReport(None, None, 0, 0)
    _, adj = _adjacency(net)
    dist = _all_pairs_distances(adj)
    off_diag = ~np.eye(n, dtype=bool)
    finite = np.isfinite(dist) & off_diag
    reachable = int(finite.sum())
    unreachable = n * (n - 1) - reachable
    if reachable == 0:
        return DistanceReport(None, None, 0, unreachable)
    values = dist[finite]
    return DistanceReport(
        average_distance=float(values.sum() / reachable),
        diameter=int(values.max()),
        reachable_ordered_pairs=reachable,
        unreachable_ordered_pairs=unreachable,
    )


# ---------------------------------------------------------------------------
# Transitivity
# ---------------------------------------------------------------------------


def transitivity(net: InteractionNetwork) -> float:
    """3 * triangles / connected triples on the undirected simplification."""
    if net.n_nodes == 0:
        return 0.0
    _, adj = _adjacency(net)
    und = adj | adj.T
    np.fill_diagonal(und, False)
    deg = und.sum(axis=1).astype(np.int64)
    triples = int((deg * (deg - 1) // 2).sum())
    if triples == 0:
        return 0.0
    und_f = und.astype(np.float64)
    paths2 = und_f @ und_f
    closed = float((und_f * paths2).sum())  # 6 * triangles
    return (closed / 2.0) / triples


# ---------------------------------------------------------------------------
# Degrees
# ---------------------------------------------------------------------------


def degree_report(net: InteractionNetwork, k: int = 10) -> DegreeReport:
    """Degree histograms plus the top-k hubs (out) and authorities (in)."""
    if k < 0:
        raise UsageError("k must be >= 0")
    in_deg = {n: 0 for n in net.nodes}
    out_deg = {n: 0 for n in net.nodes}
    for src, dst in net.edges:
        out_deg[src] += 1
        in_deg[dst] += 1

    def histogram(deg: dict[str, int]) -> tuple[tuple[int, int], ...]:
        counts: dict[int, int] = {}
        for d in deg.values():
            counts[d] = counts.get(d, 0) + 1
        return tuple(sorted(counts.items()))

    def top(deg: dict[str, int]) -> tuple[tuple[str, int], ...]:
        ranked = sorted(deg.items(), key=lambda item: (-item[1], item[0]))
        return tuple(ranked[:k])

    total = {n: in_deg[n] + out_deg[n] for n in net.nodes}
    return DegreeReport(
        in_histogram=histogram(in_deg),
        out_histogram=histogram(out_deg),
        total_histogram=histogram(total),
        hubs=top(out_deg),
        authorities=top(in_deg),
    )


def total_degrees(net: InteractionNetwork) -> list[int]:
    """Total degree per node, in node-id order (input to power-law fitting)."""
    deg = net.degrees()
    return [deg[n] for n in sorted(net.nodes)]


# ---------------------------------------------------------------------------
# Erdos-Renyi small-world baseline
# ---------------------------------------------------------------------------


def er_baseline(
    n: int,
    m: int,
    samples: int = 10,
    seed: int = 0,
    observed_average: float | None = None,
) -> SmallWorldReport:
    """Average distance in uniform undirected G(n, m) graphs of the same size.

    Every replicate draws m distinct edges uniformly, then measures the mean
    distance within its giant component.  The closed-form estimate
    ln(n)/ln(2m/n) is reported alongside and marked undefined when the mean
    degree 2m/n does not exceed 1.
    """
    if n < 1:
        raise UsageError("n must be >= 1")
    max_edges = n * (n - 1) // 2
    if not 0 <= m <= max_edges:
        raise UsageError(f"m must be in [0, {max_edges}] for n={n}")
    if samples < 1:
        raise UsageError("samples must be >= 1")

    mean_degree = 2 * m / n if n else 0.0
    estimate = math.log(n) / math.log(mean_degree) if mean_degree > 1 and n > 1 else None

    means: list[float] = []
    for s in range(samples):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, s])))
        avg = _er_sample_average_distance(n, m, rng)
        if avg is not None:
            means.append(avg)

    if means:
        arr = np.array(means)
        sampled_mean = float(arr.mean())
        sampled_std = float(arr.std())
    else:
        sampled_mean = None
        sampled_std = None

    ratio = None
    if observed_average is not None and sampled_mean:
        ratio = observed_average / sampled_mean

    return SmallWorldReport(
        er_estimate=estimate,
        er_sampled_mean=sampled_mean,
        er_sampled_stddev=sampled_std,
        ratio=ratio,
        samples=samples,
        seed=seed,
    )


def _er_sample_average_distance(n: int, m: int, rng: np.random.Generator) -> float | None:
    if m == 0 or n < 2:
        return None
    picks = rng.choice(n * (n - 1) // 2, size=m, replace=False)
    adj = np.zeros((n, n), dtype=bool)
    # Decode linear indices of the strict upper triangle.
    rows, cols = np.triu_indices(n, k=1)
    adj[rows[picks], cols[picks]] = True
    adj |= adj.T

    # Giant component by BFS over the boolean matrix.
    comp_of = np.full(n, -1, dtype=np.int64)
    comp_id = 0
    for start in range(n):
        if comp_of[start] >= 0:
            continue
        frontier = np.zeros(n, dtype=bool)
        frontier[start] = True
        seen = frontier.copy()
        while frontier.any():
            frontier = (adj[frontier].any(axis=0)) & ~seen
            seen |= frontier
        comp_of[seen] = comp_id
        comp_id += 1
    sizes = np.bincount(comp_of)
    giant = int(sizes.argmax())
    members = np.flatnonzero(comp_of == giant)
    if members.size < 2:
        return None
    sub = adj[np.ix_(members, members)]
    dist = _all_pairs_distances(sub)
    off = ~np.eye(members.size, dtype=bool)
    return float(dist[off].mean())
