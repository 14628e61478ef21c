"""Channel-assignment schemes: exhaustive, one-pass, iterative and hybrid.

Four schemes share one pluggable objective (any metric from meshca.metrics):

* bio -- enumerate every assignment (within a budget) and keep the best
         feasible one; the optimality benchmark for the others.
* pio -- seeded starting assignment plus exactly one improvement sweep.
* ko  -- starting assignment plus improvement sweeps repeated to a fixpoint.
* ho  -- the ko trajectory, then one radio co-location cleanup pass, then
         further sweeps that visit radios of elevated-interference nodes
         first, again to a fixpoint.

Every optimization step is non-worsening, so for one (topology, metric,
seed) the final scores satisfy ho >= ko >= pio in the metric's direction by
construction. All schemes are deterministic given their inputs.
"""

from __future__ import annotations

import itertools
import random
import statistics
from dataclasses import dataclass, field

from .errors import BudgetExceededError, ValidationError
from .metrics import MAXIMIZE, IemScore, better, canonical_metric, score
from .topology import (
    ChannelAssignment,
    Topology,
    adjacent_pairs,
    check_assignment,
    check_topology,
    conflict_graph,
    is_ca_connected,
    potential_neighbors,
    preserves_all_pairs,
    radios,
)

SCHEMES = ("bio", "pio", "ko", "ho")
CONNECTIVITY_RULES = ("global", "per-pair")


@dataclass(frozen=True)
class SchemeConfig:
    scheme: str = "ho"
    metric: str = "tid"
    seed: int = 0
    max_iterations: int = 100
    connectivity_rule: str = "global"
    bio_budget: int = 10_000_000
    x: int | None = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValidationError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        canonical_metric(self.metric)  # raises on bad name
        if self.connectivity_rule not in CONNECTIVITY_RULES:
            raise ValidationError(
                f"unknown connectivity rule {self.connectivity_rule!r}; "
                f"expected one of {CONNECTIVITY_RULES}"
            )
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be >= 1")
        if self.bio_budget < 1:
            raise ValidationError("bio_budget must be >= 1")


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    score: float
    moves: int


@dataclass
class OptimizationTrace:
    """Score trajectory of one optimizer run.

    records covers the improvement passes only; the starting score is kept
    separately so a one-sweep run has exactly one record. The score sequence
    (initial first) is always non-worsening in the metric's direction.
    """

    metric: str
    direction: str
    initial_score: float
    records: list[TraceRecord] = field(default_factory=list)
    feasible: bool = True

    @property
    def final_score(self) -> float:
        return self.records[-1].score if self.records else self.initial_score

    @property
    def total_moves(self) -> int:
        return sum(r.moves for r in self.records)

    def scores(self) -> list[float]:
        return [self.initial_score] + [r.score for r in self.records]


def _rule_ok(topo: Topology, ca: ChannelAssignment, rule: str) -> bool:
    if rule == "per-pair":
        return preserves_all_pairs(topo, ca)
    return is_ca_connected(topo, ca)


def _count_moves(old: ChannelAssignment, new: ChannelAssignment) -> int:
    return sum(1 for r in old if old[r] != new[r])


def initial_assignment(
    topo: Topology, seed: int, connectivity_rule: str = "global"
) -> tuple[ChannelAssignment, bool]:
    """Round-robin starting assignment, repaired and optionally perturbed.

    Radio r of node v starts on channel (v + r) mod c. A repair pass then
    restores the connectivity rule where the round-robin pattern broke it.
    For seed > 0, exactly n*m random single-radio retunes are attempted, each
    kept only if the rule still holds. Returns (assignment, feasible); an
    unsatisfiable rule is flagged, never raised.
    """
    c = topo.channel_count
    ca: ChannelAssignment = {(v, r): (v + r) % c for (v, r) in radios(topo)}
    ca, feasible = _repair(topo, ca, connectivity_rule)
    if seed > 0:
        rng = random.Random(seed)
        rlist = radios(topo)
        for _ in range(len(rlist)):
            radio = rlist[rng.randrange(len(rlist))]
            new_ch = rng.randrange(c)
            old_ch = ca[radio]
            if new_ch == old_ch:
                continue
            ca[radio] = new_ch
            if _rule_ok(topo, ca, connectivity_rule):
                feasible = True
            else:
                ca[radio] = old_ch
    return ca, feasible


def _repair(
    topo: Topology, ca: ChannelAssignment, rule: str
) -> tuple[ChannelAssignment, bool]:
    """Best-effort single repair pass toward the connectivity rule."""
    ca = dict(ca)
    if _rule_ok(topo, ca, rule):
        return ca, True
    m = topo.radios_per_node
    nbrs = potential_neighbors(topo)

    def have_link(u: int, v: int) -> bool:
        chans_u = {ca[(u, r)] for r in range(m)}
        return any(ca[(v, r)] in chans_u for r in range(m))

    # breadth-first tree pass: give every discovered node a channel in common
    # with its tree parent, which connects each potential-graph component
    seen: set[int] = set()
    for root in sorted(nbrs):
        if root in seen:
            continue
        seen.add(root)
        queue = [root]
        while queue:
            u = queue.pop(0)
            for v in nbrs[u]:
                if v in seen:
                    continue
                seen.add(v)
                if not have_link(u, v):
                    ca[(v, 0)] = ca[(u, 0)]
                queue.append(v)

    if rule == "per-pair":
        retune_idx: dict[int, int] = {}
        for u, v in adjacent_pairs(topo):
            if not have_link(u, v):
                idx = retune_idx.get(v, 0) % m
                retune_idx[v] = idx + 1
                ca[(v, idx)] = ca[(u, 0)]

    return ca, _rule_ok(topo, ca, rule)


def improve_sweep(
    topo: Topology,
    ca: ChannelAssignment,
    metric: str,
    order: list | tuple,
    connectivity_rule: str = "global",
    x: int | None = None,
) -> tuple[ChannelAssignment, bool]:
    """One coordinate-descent pass over the radios in the given order.

    Each radio is retuned to its best-scoring feasible channel; ties keep
    the current channel, and ties among other channels take the lowest
    index. The score never worsens -- from an infeasible start (violated
    precondition) a feasibility-restoring retune is taken only when it is
    score-neutral or better. Returns (assignment, improved).
    """
    work = dict(ca)
    cur_feasible = _rule_ok(topo, work, connectivity_rule)
    cur_score = score(metric, topo, work, x)
    improved = False
    for radio in order:
        cur_ch = work[radio]
        best_ch = cur_ch if cur_feasible else None
        best_score = cur_score if cur_feasible else None
        for ch in range(topo.channel_count):
            if ch == cur_ch:
                continue
            work[radio] = ch
            if _rule_ok(topo, work, connectivity_rule):
                cand = score(metric, topo, work, x)
                if not better(cur_score, cand):  # never worsen the score
                    if best_score is None or better(cand, best_score):
                        best_ch, best_score = ch, cand
            work[radio] = cur_ch
        if best_ch is not None and best_ch != cur_ch:
            work[radio] = best_ch
            cur_score = best_score
            cur_feasible = True
            improved = True
    return work, improved


def node_interference(topo: Topology, ca: ChannelAssignment) -> dict[int, int]:
    """Per node, the summed interference degrees of its incident links."""
    cg = conflict_graph(topo, ca)
    values = {n.id: 0 for n in topo.nodes}
    for idx, link in enumerate(cg.links):
        values[link.node_a] += cg.degrees[idx]
        values[link.node_b] += cg.degrees[idx]
    return values


def eiz_detect(topo: Topology, ca: ChannelAssignment) -> list[int]:
    """Nodes whose interference exceeds mean + one population std.

    These are the elevated-interference pockets; sorted by interference
    descending, ties by node id ascending.
    """
    check_assignment(topo, ca)
    values = node_interference(topo, ca)
    vals = list(values.values())
    threshold = statistics.mean(vals) + statistics.pstdev(vals)
    hot = [n for n, v in values.items() if v > threshold]
    return sorted(hot, key=lambda n: (-values[n], n))


def count_colocated_pairs(topo: Topology, ca: ChannelAssignment) -> int:
    """Same-node radio pairs sharing one channel (the co-location interference unit)."""
    m = topo.radios_per_node
    total = 0
    for n in topo.nodes:
        chans = [ca[(n.id, r)] for r in range(m)]
        for ch in set(chans):
            k = chans.count(ch)
            total += k * (k - 1) // 2
    return total


def rci_mitigate(
    topo: Topology,
    ca: ChannelAssignment,
    metric: str,
    connectivity_rule: str = "global",
    x: int | None = None,
) -> ChannelAssignment:
    """Break up same-channel radios co-located on one node.

    Per node (ascending id), the higher-indexed radio of each duplicate pair
    is retuned to the best-scoring channel unused at that node, considering
    only retunes that keep the rule satisfied and do not worsen the metric.
    Duplicates with no acceptable alternative stay put. Never increases the
    co-located duplicate count and never worsens the score.
    """
    work = dict(ca)
    m = topo.radios_per_node
    c = topo.channel_count
    cur_score = score(metric, topo, work, x)
    for n in sorted(nd.id for nd in topo.nodes):
        stuck: set[int] = set()
        while True:
            node_chans = [work[(n, r)] for r in range(m)]
            dup = None
            seen: set[int] = set()
            for r in range(m):
                if node_chans[r] in seen and r not in stuck:
                    dup = r
                    break
                seen.add(node_chans[r])
            if dup is None:
                break
            used = set(node_chans)
            best_ch = None
            best_score = None
            old_ch = work[(n, dup)]
            for ch in range(c):
                if ch in used:
                    continue
                work[(n, dup)] = ch
                if _rule_ok(topo, work, connectivity_rule):
                    cand = score(metric, topo, work, x)
                    if not better(cur_score, cand):  # candidate not worse
                        if best_score is None or better(cand, best_score):
                            best_ch, best_score = ch, cand
                work[(n, dup)] = old_ch
            if best_ch is None:
                stuck.add(dup)
            else:
                work[(n, dup)] = best_ch
                cur_score = best_score
    return work


def bio_assign(
    topo: Topology, cfg: SchemeConfig
) -> tuple[ChannelAssignment, IemScore, bool]:
    """Enumerate all c^(n*m) assignments and keep the best feasible one.

    Assignments are visited in lexicographic radio order, so score ties
    resolve to the lexicographically smallest assignment. If nothing is
    feasible the best infeasible assignment is returned with a False flag.
    Raises BudgetExceededError when the space exceeds cfg.bio_budget.
    """
    rlist = radios(topo)
    space = topo.channel_count ** len(rlist)
    if space > cfg.bio_budget:
        raise BudgetExceededError(space, cfg.bio_budget)
    best = best_score = None
    fallback = fallback_score = None
    work: ChannelAssignment = {}
    for combo in itertools.product(range(topo.channel_count), repeat=len(rlist)):
        for radio, ch in zip(rlist, combo):
            work[radio] = ch
        if _rule_ok(topo, work, cfg.connectivity_rule):
            s = score(cfg.metric, topo, work, cfg.x)
            if best_score is None or better(s, best_score):
                best, best_score = dict(work), s
        elif best is None:  # fallback only matters while nothing feasible exists
            s = score(cfg.metric, topo, work, cfg.x)
            if fallback_score is None or better(s, fallback_score):
                fallback, fallback_score = dict(work), s
    if best is not None:
        return best, best_score, True
    return fallback, fallback_score, False


def run_scheme(
    topo: Topology, cfg: SchemeConfig
) -> tuple[ChannelAssignment, IemScore, OptimizationTrace]:
    """Run one scheme end to end and return (assignment, score, trace)."""
    check_topology(topo)
    metric = canonical_metric(cfg.metric)

    if cfg.scheme == "bio":
        ca, final, feasible = bio_assign(topo, cfg)
        trace = OptimizationTrace(
            metric=metric,
            direction=final.direction,
            initial_score=final.value,
            records=[],
            feasible=feasible,
        )
        return ca, final, trace

    ca, _ = initial_assignment(topo, cfg.seed, cfg.connectivity_rule)
    initial = score(metric, topo, ca, cfg.x)
    trace = OptimizationTrace(
        metric=metric, direction=initial.direction, initial_score=initial.value
    )
    iteration = 0
    asc_order = radios(topo)

    def record(new_ca: ChannelAssignment) -> ChannelAssignment:
        nonlocal iteration, ca
        iteration += 1
        moves = _count_moves(ca, new_ca)
        s = score(metric, topo, new_ca, cfg.x)
        trace.records.append(TraceRecord(iteration, s.value, moves))
        ca = new_ca
        return new_ca

    def sweep_to_fixpoint(order_fn, budget: int) -> int:
        used = 0
        while used < budget:
            new_ca, improved = improve_sweep(
                topo, ca, metric, order_fn(), cfg.connectivity_rule, cfg.x
            )
            record(new_ca)
            used += 1
            if not improved:
                break
        return used

    if cfg.scheme == "pio":
        new_ca, _ = improve_sweep(
            topo, ca, metric, asc_order, cfg.connectivity_rule, cfg.x
        )
        record(new_ca)
    elif cfg.scheme == "ko":
        sweep_to_fixpoint(lambda: asc_order, cfg.max_iterations)
    else:  # ho: the ko trajectory, then co-location cleanup, then hot-first sweeps
        used = sweep_to_fixpoint(lambda: asc_order, cfg.max_iterations)
        record(rci_mitigate(topo, ca, metric, cfg.connectivity_rule, cfg.x))

        def hot_first_order():
            hot = eiz_detect(topo, ca)
            hot_set = set(hot)
            m = topo.radios_per_node
            prioritized = [(n, r) for n in hot for r in range(m)]
            rest = [radio for radio in asc_order if radio[0] not in hot_set]
            return prioritized + rest

        sweep_to_fixpoint(hot_first_order, cfg.max_iterations - used)

    final = score(metric, topo, ca, cfg.x)
    trace.feasible = _rule_ok(topo, ca, cfg.connectivity_rule)
    _check_monotone(trace)
    return ca, final, trace


def _check_monotone(trace: OptimizationTrace) -> None:
    seq = trace.scores()
    for prev, cur in zip(seq, seq[1:]):
        worsened = cur < prev if trace.direction == MAXIMIZE else cur > prev
        if worsened:
            raise RuntimeError(
                f"internal error: optimization trace worsened from {prev} to {cur}"
            )
