"""Interference estimation metrics over (Topology, ChannelAssignment).

Three interchangeable scoring functions:

* tid       -- total interference degree: sum over realized links of their
               conflict counts (twice the conflict-edge count). Lower is better.
* cdal_cost -- population standard deviation of the fractional per-channel
               link counts; 0 means perfectly balanced channel usage. Lower
               is better.
* cxls_wt   -- cumulative weight of all x-hop link sets: for each x-hop
               simple path, the mean (over per-hop link choices) number of
               hops operating on a channel no other hop uses. Higher is
               better.

All are pure functions of their inputs; identical inputs give bit-identical
results.
"""

from __future__ import annotations

import itertools
import statistics
from dataclasses import dataclass
from functools import lru_cache

from .errors import ValidationError
from .topology import (
    ChannelAssignment,
    Topology,
    check_assignment,
    conflict_graph,
    potential_neighbors,
    realized_links,
)

MINIMIZE = "minimize"
MAXIMIZE = "maximize"

#: canonical metric names accepted everywhere a metric is selected by name
METRICS = ("tid", "cdal", "cxls")


@dataclass(frozen=True)
class IemScore:
    metric: str
    value: float
    direction: str

    def __post_init__(self):
        if self.direction not in (MINIMIZE, MAXIMIZE):
            raise ValidationError(f"bad direction {self.direction!r}")


def better(a: IemScore, b: IemScore) -> bool:
    """True iff a strictly beats b in the metric's direction. Ties are not better."""
    if a.direction != b.direction:
        raise ValidationError(
            f"cannot compare scores with directions {a.direction} and {b.direction}"
        )
    if a.direction == MAXIMIZE:
        return a.value > b.value
    return a.value < b.value


def tid(topo: Topology, ca: ChannelAssignment) -> IemScore:
    """Sum of interference degrees of all realized links."""
    cg = conflict_graph(topo, ca)
    return IemScore("tid", float(sum(cg.degrees)), MINIMIZE)


def channel_loads(topo: Topology, ca: ChannelAssignment) -> list[float]:
    """Fractional link count per channel.

    Each adjacent node pair with k >= 1 realized links spreads one unit of
    load over its links (1/k each), modelling equal-probability selection
    among parallel links. Sum of loads equals the number of linked pairs.
    """
    check_assignment(topo, ca)
    loads = [0.0] * topo.channel_count
    per_pair: dict[tuple[int, int], list[int]] = {}
    for link in realized_links(topo, ca):
        per_pair.setdefault(link.nodes(), []).append(link.channel)
    for pair in sorted(per_pair):
        chans = per_pair[pair]
        share = 1.0 / len(chans)
        for ch in chans:
            loads[ch] += share
    return loads


def cdal_cost(topo: Topology, ca: ChannelAssignment) -> IemScore:
    """Population standard deviation of the channel loads (zero-load channels count)."""
    loads = channel_loads(topo, ca)
    # sorting stabilizes float summation so channel relabelings are bit-exact
    return IemScore("cdal", statistics.pstdev(sorted(loads)), MINIMIZE)


@dataclass(frozen=True)
class XLinkSet:
    """An x-hop simple node path plus, per hop, the realized links available.

    Canonical orientation: path[0] < path[-1], so each undirected path is
    represented once. hop_channels[i] holds the channel of each realized link
    of hop i (duplicates mean parallel links on one channel).
    """

    path: tuple[int, ...]
    hop_channels: tuple[tuple[int, ...], ...]


@lru_cache(maxsize=None)
def enumerate_xls(topo: Topology, x: int) -> tuple[tuple[int, ...], ...]:
    """All simple x-hop paths of the potential graph, canonical, sorted."""
    if x < 1:
        raise ValidationError("x must be >= 1")
    nbrs = potential_neighbors(topo)
    found: list[tuple[int, ...]] = []

    def extend(path: list[int]):
        if len(path) == x + 1:
            if path[0] < path[-1]:
                found.append(tuple(path))
            return
        for nxt in nbrs[path[-1]]:
            if nxt not in path:
                path.append(nxt)
                extend(path)
                path.pop()

    for start in sorted(nbrs):
        extend([start])
    return tuple(sorted(found))


def build_xls(topo: Topology, ca: ChannelAssignment, path: tuple[int, ...]) -> XLinkSet:
    """Materialize the per-hop link options of a node path under an assignment."""
    m = topo.radios_per_node
    hops = []
    for a, b in zip(path, path[1:]):
        u, v = (a, b) if a < b else (b, a)
        chans = [
            ca[(u, ru)]
            for ru in range(m)
            for rv in range(m)
            if ca[(u, ru)] == ca[(v, rv)]
        ]
        hops.append(tuple(chans))
    return XLinkSet(path=tuple(path), hop_channels=tuple(hops))


def xls_weight(xls: XLinkSet) -> float:
    """Mean count of uniquely-channeled hops over all per-hop link choices.

    A hop with no realized link makes the whole set unusable: weight 0.
    Ranges over [0, x]: 0 when every hop shares one channel, x when all hop
    channels are pairwise distinct in every realization.
    """
    if any(len(options) == 0 for options in xls.hop_channels):
        return 0.0
    total = 0
    count = 0
    for combo in itertools.product(*xls.hop_channels):
        uses: dict[int, int] = {}
        for ch in combo:
            uses[ch] = uses.get(ch, 0) + 1
        total += sum(1 for ch in combo if uses[ch] == 1)
        count += 1
    return total / count


def cxls_wt(topo: Topology, ca: ChannelAssignment, x: int | None = None) -> IemScore:
    """Sum of xls_weight over every x-hop link set (x defaults to interference_x).

    Networks too small to contain any x-hop path score 0 (empty sum).
    """
    check_assignment(topo, ca)
    if x is None:
        x = topo.interference_x
    value = 0.0
    for path in enumerate_xls(topo, x):
        value += xls_weight(build_xls(topo, ca, path))
    return IemScore("cxls", value, MAXIMIZE)


def score(
    metric: str, topo: Topology, ca: ChannelAssignment, x: int | None = None
) -> IemScore:
    """Dispatch to the named metric (one of METRICS)."""
    name = canonical_metric(metric)
    if name == "tid":
        return tid(topo, ca)
    if name == "cdal":
        return cdal_cost(topo, ca)
    return cxls_wt(topo, ca, x)


def canonical_metric(metric: str) -> str:
    name = metric.strip().lower()
    aliases = {"cdal_cost": "cdal", "cxls_wt": "cxls"}
    name = aliases.get(name, name)
    if name not in METRICS:
        raise ValidationError(f"unknown metric {metric!r}; expected one of {METRICS}")
    return name


def all_scores(topo: Topology, ca: ChannelAssignment, x: int | None = None) -> dict[str, float]:
    """Convenience: value of every metric for one assignment."""
    return {name: score(name, topo, ca, x).value for name in METRICS}
