"""Independent brute-force reference implementations for the three metrics.

Everything here recomputes from first principles with plain nested loops --
no reuse of the package's derivation helpers -- so the optimized
implementations can be checked against these on small instances.
"""

import itertools
import math


def _dist(p, q):
    return math.hypot(p[0] - q[0], p[1] - q[1])


def adjacency(topo):
    pts = {n.id: (n.x, n.y) for n in topo.nodes}
    ids = sorted(pts)
    pairs = []
    for i, u in enumerate(ids):
        for v in ids[i + 1:]:
            if _dist(pts[u], pts[v]) <= topo.tx_range:
                pairs.append((u, v))
    return pairs


def links(topo, ca):
    """Every (u, ru, v, rv, channel) with matching channels, u < v."""
    out = []
    for u, v in adjacency(topo):
        for ru in range(topo.radios_per_node):
            for rv in range(topo.radios_per_node):
                if ca[(u, ru)] == ca[(v, rv)]:
                    out.append((u, ru, v, rv, ca[(u, ru)]))
    return out


def conflicting(topo, la, lb):
    if la[4] != lb[4]:
        return False
    pts = {n.id: (n.x, n.y) for n in topo.nodes}
    reach = topo.interference_x * topo.tx_range
    dmin = min(
        _dist(pts[a], pts[b]) for a in (la[0], la[2]) for b in (lb[0], lb[2])
    )
    return dmin <= reach


def interference_degrees(topo, ca):
    lks = links(topo, ca)
    degs = [0] * len(lks)
    for i in range(len(lks)):
        for j in range(i + 1, len(lks)):
            if conflicting(topo, lks[i], lks[j]):
                degs[i] += 1
                degs[j] += 1
    return lks, degs


def tid_value(topo, ca):
    _, degs = interference_degrees(topo, ca)
    return float(sum(degs))


def cdal_value(topo, ca):
    loads = [0.0] * topo.channel_count
    per_pair = {}
    for u, ru, v, rv, ch in links(topo, ca):
        per_pair.setdefault((u, v), []).append(ch)
    for chans in per_pair.values():
        for ch in chans:
            loads[ch] += 1.0 / len(chans)
    mean = sum(loads) / len(loads)
    return math.sqrt(sum((x - mean) ** 2 for x in loads) / len(loads))


def paths(topo, x):
    """All simple x-hop paths (first id < last id) via permutation filtering."""
    adj = set(adjacency(topo))

    def adjacent(a, b):
        return (a, b) in adj or (b, a) in adj

    ids = [n.id for n in topo.nodes]
    found = set()
    for perm in itertools.permutations(ids, x + 1):
        if perm[0] < perm[-1] and all(
            adjacent(a, b) for a, b in zip(perm, perm[1:])
        ):
            found.add(perm)
    return sorted(found)


def xls_weight_value(topo, ca, path):
    options = []
    for a, b in zip(path, path[1:]):
        u, v = min(a, b), max(a, b)
        chans = [
            ca[(u, ru)]
            for ru in range(topo.radios_per_node)
            for rv in range(topo.radios_per_node)
            if ca[(u, ru)] == ca[(v, rv)]
        ]
        if not chans:
            return 0.0
        options.append(chans)
    weights = []
    for combo in itertools.product(*options):
        weights.append(sum(1 for ch in combo if combo.count(ch) == 1))
    return sum(weights) / len(weights)


def cxls_value(topo, ca, x):
    return float(sum(xls_weight_value(topo, ca, p) for p in paths(topo, x)))
