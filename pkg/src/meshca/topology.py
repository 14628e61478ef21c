"""Mesh network model: nodes, radios, ranges, links and the conflict graph.

A Topology is immutable and hashable; geometry-derived structures (adjacent
node pairs, interference reach between pairs) are cached per topology so that
repeated scoring of candidate channel assignments stays cheap.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    ConnectivityError,
    IncompleteAssignmentError,
    RangeConfigError,
    ValidationError,
)

# A radio is addressed as (node id, radio index); an assignment maps every
# radio to a channel index in [0, channel_count).
RadioId = tuple[int, int]
ChannelAssignment = dict[RadioId, int]


@dataclass(frozen=True)
class Node:
    id: int
    x: float
    y: float


@dataclass(frozen=True)
class Topology:
    """Node layout plus the radio/range/channel configuration.

    interference_x is the X of the 1:X transmission-to-interference ratio,
    i.e. the interference range is interference_x * tx_range.
    """

    nodes: tuple[Node, ...]
    radios_per_node: int
    tx_range: float
    interference_x: int
    channel_count: int

    @property
    def interference_range(self) -> float:
        return self.interference_x * self.tx_range

    def node_ids(self) -> tuple[int, ...]:
        return tuple(n.id for n in self.nodes)


@dataclass(frozen=True)
class RealizedLink:
    """A usable link: both endpoint radios tuned to the same channel.

    Canonical orientation: node_a < node_b. Parallel links between the same
    node pair (different radio pairs) are distinct first-class links.
    """

    node_a: int
    radio_a: int
    node_b: int
    radio_b: int
    channel: int

    def nodes(self) -> tuple[int, int]:
        return (self.node_a, self.node_b)


@dataclass(frozen=True)
class ConflictGraph:
    """Realized links as vertices; same-channel interference as edges.

    degrees[i] is the interference degree of links[i] (its conflict count).
    """

    links: tuple[RealizedLink, ...]
    edges: tuple[tuple[int, int], ...]
    degrees: tuple[int, ...]
    neighbors: tuple[tuple[int, ...], ...]

    @property
    def total_interference_degree(self) -> int:
        return sum(self.degrees)


def check_topology(topo: Topology) -> None:
    """Validate structural invariants; raise ValidationError on violation."""
    if topo.radios_per_node < 1:
        raise ValidationError("radios_per_node must be >= 1")
    if topo.interference_x < 1:
        raise ValidationError("interference_x must be >= 1")
    if topo.channel_count < 1:
        raise ValidationError("channel_count must be >= 1")
    if topo.tx_range <= 0:
        raise ValidationError("tx_range must be > 0")
    if len(topo.nodes) < 1:
        raise ValidationError("topology needs at least one node")
    ids = [n.id for n in topo.nodes]
    if len(set(ids)) != len(ids):
        raise ValidationError("node ids must be distinct")
    pts = {(n.x, n.y) for n in topo.nodes}
    if len(pts) != len(topo.nodes):
        raise ValidationError("node positions must be distinct")


def _make_topology(nodes, m, tx_range, interference_x, channel_count) -> Topology:
    topo = Topology(
        nodes=tuple(sorted(nodes, key=lambda n: n.id)),
        radios_per_node=int(m),
        tx_range=float(tx_range),
        interference_x=int(interference_x),
        channel_count=int(channel_count),
    )
    check_topology(topo)
    return topo


def gen_grid(
    rows: int,
    cols: int,
    spacing: float = 250.0,
    tx_range: float = 250.0,
    interference_x: int = 2,
    radios_per_node: int = 2,
    channel_count: int = 3,
) -> Topology:
    """Build a rows x cols grid with 4-neighborhood adjacency.

    Node ids are row-major; node (r, c) sits at (c * spacing, r * spacing).
    tx_range must satisfy spacing <= tx_range < spacing * sqrt(2) so that
    exactly the orthogonal neighbors are in range.
    """
    if rows < 1 or cols < 1:
        raise ValidationError("rows and cols must be >= 1")
    if spacing <= 0:
        raise ValidationError("spacing must be > 0")
    if not (spacing <= tx_range < spacing * math.sqrt(2)):
        raise RangeConfigError(
            f"tx_range {tx_range} must lie in [spacing, spacing*sqrt(2)) = "
            f"[{spacing}, {spacing * math.sqrt(2):.6g}) for a grid layout"
        )
    nodes = [
        Node(id=r * cols + c, x=c * spacing, y=r * spacing)
        for r in range(rows)
        for c in range(cols)
    ]
    return _make_topology(nodes, radios_per_node, tx_range, interference_x, channel_count)


def gen_random(
    n: int,
    width: float,
    height: float,
    tx_range: float = 250.0,
    interference_x: int = 2,
    radios_per_node: int = 2,
    channel_count: int = 3,
    seed: int = 0,
    max_draws: int = 100,
) -> Topology:
    """Place n nodes uniformly at random; redraw until the potential graph connects.

    Deterministic for a given seed. Raises ConnectivityError once the retry
    budget is exhausted.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    if width <= 0 or height <= 0:
        raise ValidationError("area dimensions must be positive")
    if tx_range <= 0:
        raise ValidationError("tx_range must be > 0")
    rng = random.Random(seed)
    for _ in range(max_draws):
        nodes = [Node(id=i, x=rng.uniform(0, width), y=rng.uniform(0, height)) for i in range(n)]
        if len({(nd.x, nd.y) for nd in nodes}) != n:
            continue
        topo = _make_topology(nodes, radios_per_node, tx_range, interference_x, channel_count)
        if is_potential_connected(topo):
            return topo
    raise ConnectivityError(
        f"no connected layout for n={n} within {max_draws} draws "
        f"(area {width}x{height}, tx_range {tx_range})"
    )


# ---------------------------------------------------------------------------
# Cached geometry derived from a topology
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def positions(topo: Topology) -> dict[int, tuple[float, float]]:
    return {n.id: (n.x, n.y) for n in topo.nodes}


@lru_cache(maxsize=None)
def radios(topo: Topology) -> tuple[RadioId, ...]:
    """All radios in ascending (node id, radio index) order."""
    return tuple(
        (n.id, r) for n in topo.nodes for r in range(topo.radios_per_node)
    )


@lru_cache(maxsize=None)
def adjacent_pairs(topo: Topology) -> tuple[tuple[int, int], ...]:
    """Node pairs within transmission range, canonical (u < v), sorted."""
    pos = positions(topo)
    ids = sorted(pos)
    out = []
    for i, u in enumerate(ids):
        for v in ids[i + 1:]:
            if math.dist(pos[u], pos[v]) <= topo.tx_range:
                out.append((u, v))
    return tuple(out)


@lru_cache(maxsize=None)
def potential_neighbors(topo: Topology) -> dict[int, tuple[int, ...]]:
    nbrs: dict[int, list[int]] = {n.id: [] for n in topo.nodes}
    for u, v in adjacent_pairs(topo):
        nbrs[u].append(v)
        nbrs[v].append(u)
    return {u: tuple(sorted(vs)) for u, vs in nbrs.items()}


def _pair_min_distance(topo: Topology, pa: tuple[int, int], pb: tuple[int, int]) -> float:
    if set(pa) & set(pb):
        return 0.0
    pos = positions(topo)
    return min(math.dist(pos[a], pos[b]) for a in pa for b in pb)


@lru_cache(maxsize=None)
def interfering_pairs(topo: Topology) -> tuple[tuple[int, ...], ...]:
    """For each adjacent-pair index, the other pair indices within interference reach.

    Two links can conflict only if their node pairs are geometrically within
    interference_x * tx_range of each other (minimum endpoint distance).
    """
    pairs = adjacent_pairs(topo)
    reach = topo.interference_range
    hits: list[list[int]] = [[] for _ in pairs]
    for i, pa in enumerate(pairs):
        for j in range(i + 1, len(pairs)):
            if _pair_min_distance(topo, pa, pairs[j]) <= reach:
                hits[i].append(j)
                hits[j].append(i)
    return tuple(tuple(h) for h in hits)


def is_potential_connected(topo: Topology) -> bool:
    """Connectivity of the potential-communication graph (range only)."""
    nbrs = potential_neighbors(topo)
    return _bfs_covers(nbrs, topo.node_ids())


def _bfs_covers(nbrs: dict[int, tuple[int, ...]], ids: tuple[int, ...]) -> bool:
    if not ids:
        return True
    seen = {ids[0]}
    queue = [ids[0]]
    while queue:
        u = queue.pop()
        for v in nbrs[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == len(ids)


# ---------------------------------------------------------------------------
# Channel assignments, realized links, conflicts
# ---------------------------------------------------------------------------

def check_assignment(topo: Topology, ca: ChannelAssignment) -> None:
    """Require a total assignment with in-range channels."""
    for radio in radios(topo):
        if radio not in ca:
            raise IncompleteAssignmentError(
                f"assignment is missing radio {radio[0]}:{radio[1]}"
            )
        ch = ca[radio]
        if not isinstance(ch, int) or not (0 <= ch < topo.channel_count):
            raise IncompleteAssignmentError(
                f"channel {ch} out of range for radio {radio[0]}:{radio[1]} "
                f"(channel_count {topo.channel_count})"
            )


def realized_links(topo: Topology, ca: ChannelAssignment) -> list[RealizedLink]:
    """One link per (adjacent node pair, radio pair) tuned to a common channel.

    Deterministic order: by node ids, then radio indices.
    """
    check_assignment(topo, ca)
    m = topo.radios_per_node
    out = []
    for u, v in adjacent_pairs(topo):
        for ru in range(m):
            cu = ca[(u, ru)]
            for rv in range(m):
                if cu == ca[(v, rv)]:
                    out.append(RealizedLink(u, ru, v, rv, cu))
    return out


def pair_link_counts(
    topo: Topology, ca: ChannelAssignment
) -> dict[tuple[int, int], list[int]]:
    """Per adjacent pair, realized-link count on each channel (no validation)."""
    m = topo.radios_per_node
    c = topo.channel_count
    # per-node channel histogram
    hist: dict[int, list[int]] = {}
    for n in topo.nodes:
        h = [0] * c
        for r in range(m):
            h[ca[(n.id, r)]] += 1
        hist[n.id] = h
    counts = {}
    for u, v in adjacent_pairs(topo):
        hu, hv = hist[u], hist[v]
        counts[(u, v)] = [hu[ch] * hv[ch] for ch in range(c)]
    return counts


def conflict_graph(topo: Topology, ca: ChannelAssignment) -> ConflictGraph:
    """Build the conflict graph of all realized links.

    Two distinct links conflict iff they share a channel and the minimum
    distance between their endpoint nodes is within the interference range
    (links sharing a node are always in reach).
    """
    links = realized_links(topo, ca)
    pairs = adjacent_pairs(topo)
    pair_idx = {p: i for i, p in enumerate(pairs)}
    reach_sets = [frozenset(t) for t in interfering_pairs(topo)]

    by_channel: dict[int, list[int]] = {}
    for i, link in enumerate(links):
        by_channel.setdefault(link.channel, []).append(i)

    edges = []
    neighbors: list[list[int]] = [[] for _ in links]
    for members in by_channel.values():
        for a_pos, i in enumerate(members):
            pi = pair_idx[links[i].nodes()]
            for j in members[a_pos + 1:]:
                pj = pair_idx[links[j].nodes()]
                if pi == pj or pj in reach_sets[pi]:
                    edges.append((i, j))
                    neighbors[i].append(j)
                    neighbors[j].append(i)
    return ConflictGraph(
        links=tuple(links),
        edges=tuple(sorted(edges)),
        degrees=tuple(len(ns) for ns in neighbors),
        neighbors=tuple(tuple(sorted(ns)) for ns in neighbors),
    )


def linked_pairs(topo: Topology, ca: ChannelAssignment) -> list[tuple[int, int]]:
    """Adjacent node pairs that have at least one realized link."""
    m = topo.radios_per_node
    out = []
    for u, v in adjacent_pairs(topo):
        chans_u = {ca[(u, r)] for r in range(m)}
        if any(ca[(v, r)] in chans_u for r in range(m)):
            out.append((u, v))
    return out


def is_ca_connected(topo: Topology, ca: ChannelAssignment) -> bool:
    """True iff nodes form one component under pairs with >= 1 realized link."""
    check_assignment(topo, ca)
    nbrs: dict[int, list[int]] = {n.id: [] for n in topo.nodes}
    for u, v in linked_pairs(topo, ca):
        nbrs[u].append(v)
        nbrs[v].append(u)
    return _bfs_covers({u: tuple(vs) for u, vs in nbrs.items()}, topo.node_ids())


def preserves_all_pairs(topo: Topology, ca: ChannelAssignment) -> bool:
    """True iff every adjacent node pair keeps at least one realized link."""
    check_assignment(topo, ca)
    return len(linked_pairs(topo, ca)) == len(adjacent_pairs(topo))


def uniform_assignment(topo: Topology, channel: int = 0) -> ChannelAssignment:
    """Every radio on one channel; the simplest always-connected assignment."""
    return {radio: channel for radio in radios(topo)}


def random_assignment(topo: Topology, rng: random.Random) -> ChannelAssignment:
    """Uniformly random total assignment (not necessarily connected)."""
    c = topo.channel_count
    return {radio: rng.randrange(c) for radio in radios(topo)}


def enumerate_assignments(topo: Topology):
    """Yield every total assignment in lexicographic radio order."""
    rlist = radios(topo)
    for combo in itertools.product(range(topo.channel_count), repeat=len(rlist)):
        yield dict(zip(rlist, combo))
