"""Flow-level performance estimation for a channel assignment.

This is a deterministic, comparative estimator -- not a packet simulator.
Airtime on a link is shared as 1/(1 + number of active conflicting links),
and flows split a link's share evenly. All outputs are labeled estimates;
packet loss, delay and SINR have no honest flow-level analog and are not
reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonGridTopologyError
from .topology import (
    ChannelAssignment,
    RealizedLink,
    Topology,
    check_assignment,
    conflict_graph,
)

#: 5 MB datafile, binary megabytes (5 MB at 54 Mbps ~= 0.777 s)
DEFAULT_PAYLOAD_BYTES = 5 * 1024 * 1024


@dataclass(frozen=True)
class FlowSpec:
    source: int
    destination: int
    path: tuple[int, ...]
    payload_bytes: int = DEFAULT_PAYLOAD_BYTES

    @property
    def hops(self) -> int:
        return len(self.path) - 1


@dataclass(frozen=True)
class FlowPerf:
    flow: FlowSpec
    throughput_mbps: float
    transfer_time_s: float | None
    bottleneck: RealizedLink | None
    contention: int


@dataclass(frozen=True)
class PerfReport:
    phy_rate_mbps: float
    flows: tuple[FlowPerf, ...]
    disconnected: tuple[int, ...]

    @property
    def aggregate_throughput_mbps(self) -> float:
        return sum(f.throughput_mbps for f in self.flows)


def grid_layout(topo: Topology) -> list[list[int]]:
    """Recover the row-major lattice of node ids from positions.

    Rows are grouped by y ascending, nodes within a row by x ascending.
    Raises NonGridTopologyError if positions do not form a full lattice with
    adjacent lattice neighbors in transmission range.
    """
    by_y: dict[float, list] = {}
    for node in topo.nodes:
        by_y.setdefault(round(node.y, 9), []).append(node)
    rows = [sorted(by_y[y], key=lambda n: n.x) for y in sorted(by_y)]
    xs = [round(n.x, 9) for n in rows[0]]
    for row in rows:
        if [round(n.x, 9) for n in row] != xs:
            raise NonGridTopologyError("node positions do not form a grid lattice")
    layout = [[n.id for n in row] for row in rows]
    pos = {n.id: (n.x, n.y) for n in topo.nodes}

    def in_range(a: int, b: int) -> bool:
        return math.dist(pos[a], pos[b]) <= topo.tx_range

    for row in layout:
        for a, b in zip(row, row[1:]):
            if not in_range(a, b):
                raise NonGridTopologyError("grid row neighbors out of transmission range")
    for col in zip(*layout):
        for a, b in zip(col, col[1:]):
            if not in_range(a, b):
                raise NonGridTopologyError("grid column neighbors out of transmission range")
    return layout


def build_grid_flows(
    topo: Topology, payload_bytes: int = DEFAULT_PAYLOAD_BYTES
) -> list[FlowSpec]:
    """One flow along every row and every column of a grid topology.

    Row flows run leftmost to rightmost, column flows topmost to bottommost.
    Degenerate rows/columns of a single node produce no flow.
    """
    layout = grid_layout(topo)
    flows = []
    for row in layout:
        if len(row) >= 2:
            flows.append(FlowSpec(row[0], row[-1], tuple(row), payload_bytes))
    for col in zip(*layout):
        if len(col) >= 2:
            flows.append(FlowSpec(col[0], col[-1], tuple(col), payload_bytes))
    return flows


def estimate_performance(
    topo: Topology,
    ca: ChannelAssignment,
    flows: list[FlowSpec],
    phy_rate: float,
) -> PerfReport:
    """Deterministic contention estimate for a set of flows.

    Per hop the realized link with the fewest conflicts is selected (ties:
    lowest channel, then first in canonical link order); a hop with no link
    disconnects its flow. Each active link's airtime share is
    phy_rate / (1 + active conflicting links), split evenly over the flows
    using it; a flow runs at the minimum over its hops.
    """
    check_assignment(topo, ca)
    cg = conflict_graph(topo, ca)
    links_by_pair: dict[tuple[int, int], list[int]] = {}
    for idx, link in enumerate(cg.links):
        links_by_pair.setdefault(link.nodes(), []).append(idx)

    def pick(u: int, v: int) -> int | None:
        pair = (u, v) if u < v else (v, u)
        candidates = links_by_pair.get(pair)
        if not candidates:
            return None
        return min(candidates, key=lambda i: (cg.degrees[i], cg.links[i].channel, i))

    selections: list[list[int] | None] = []
    for flow in flows:
        chosen: list[int] | None = []
        for a, b in zip(flow.path, flow.path[1:]):
            idx = pick(a, b)
            if idx is None:
                chosen = None
                break
            chosen.append(idx)
        selections.append(chosen)

    active = sorted({idx for sel in selections if sel for idx in sel})
    active_set = set(active)
    share = {
        idx: phy_rate / (1 + sum(1 for nb in cg.neighbors[idx] if nb in active_set))
        for idx in active
    }
    load: dict[int, int] = {idx: 0 for idx in active}
    for sel in selections:
        if sel:
            for idx in set(sel):
                load[idx] += 1

    perf = []
    disconnected = []
    for fi, (flow, sel) in enumerate(zip(flows, selections)):
        if sel is None:
            perf.append(FlowPerf(flow, 0.0, None, None, 0))
            disconnected.append(fi)
            continue
        rates = [share[idx] / load[idx] for idx in sel]
        throughput = min(rates)
        bottleneck_idx = sel[rates.index(throughput)]
        contention = sum(1 for nb in cg.neighbors[bottleneck_idx] if nb in active_set)
        transfer = flow.payload_bytes * 8 / (throughput * 1e6)
        perf.append(
            FlowPerf(flow, throughput, transfer, cg.links[bottleneck_idx], contention)
        )
    return PerfReport(
        phy_rate_mbps=phy_rate, flows=tuple(perf), disconnected=tuple(disconnected)
    )
