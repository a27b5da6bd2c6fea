"""Slow, obviously-correct reference implementations used only by the tests."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import networkx as nx

from cacaug.cactus import Instance


def cut_masks_by_subsets(instance: Instance) -> set[int]:
    """Every C ⊆ V - r with exactly two cactus edges leaving it, by subset enumeration."""
    n, r = instance.n, instance.root
    others = [v for v in range(n) if v != r]
    edges = instance.cactus.edges()
    out = set()
    for mask_bits in range(1, 1 << len(others)):
        mask = 0
        for k, v in enumerate(others):
            if mask_bits >> k & 1:
                mask |= 1 << v
        leaving = sum(1 for u, v, _, _ in edges if (mask >> u & 1) != (mask >> v & 1))
        if leaving == 2:
            out.add(mask)
    return out


def multigraph(instance: Instance) -> nx.MultiGraph:
    g = nx.MultiGraph()
    g.add_nodes_from(range(instance.n))
    for u, v, _, _ in instance.cactus.edges():
        g.add_edge(u, v)
    return g


def must_pass_by_paths(instance: Instance, u: int, v: int) -> frozenset[int]:
    g = nx.Graph(multigraph(instance))
    common = None
    for path in nx.all_simple_paths(g, u, v):
        common = set(path) if common is None else common & set(path)
    return frozenset(common if common is not None else {u, v})


def covers_pair(mask: int, a: int, b: int) -> bool:
    return (mask >> a & 1) != (mask >> b & 1)


def feasible_by_definition(instance: Instance, ids) -> bool:
    links = [instance.links[i] for i in ids]
    return all(any(covers_pair(m, l.u, l.v) for l in links) for m in cut_masks_by_subsets(instance))


def opt_by_combinations(instance: Instance, max_size: int | None = None):
    """Smallest feasible link set by increasing-size search over itertools.combinations."""
    ids = range(len(instance.links))
    cuts = [c.mask for c in instance.two_cuts]
    links = instance.links
    top = len(links) if max_size is None else max_size
    for k in range(top + 1):
        for combo in combinations(ids, k):
            if all(any(covers_pair(m, links[i].u, links[i].v) for i in combo) for m in cuts):
                return k, frozenset(combo)
    return None


def weighted_min_by_combinations(instance: Instance, weight) -> Fraction:
    """Min over feasible H of weight(H); ``weight`` maps a link id tuple to a number."""
    cuts = [c.mask for c in instance.two_cuts]
    links = instance.links
    best = None
    n = len(links)
    for bits in range(1 << n):
        combo = [i for i in range(n) if bits >> i & 1]
        if all(any(covers_pair(m, links[i].u, links[i].v) for i in combo) for m in cuts):
            w = weight(combo)
            if best is None or w < best:
                best = w
    return best


def min_cover_by_combinations(universe: int, sets: list[int]):
    for k in range(len(sets) + 1):
        for combo in combinations(range(len(sets)), k):
            acc = 0
            for i in combo:
                acc |= sets[i]
            if acc & universe == universe:
                return k
    return None


def terminal_set(instance: Instance, mask: int) -> set[int]:
    out = set()
    for l in instance.links:
        if covers_pair(mask, l.u, l.v):
            out |= {x for x in l.endpoints if mask >> x & 1 and x in instance.leaves}
    return out


def bad_by_definition(instance: Instance) -> set[int]:
    cuts = cut_masks_by_subsets(instance)
    out = set()
    for l in instance.links:
        for m in cuts:
            if m >> l.u & 1 and m >> l.v & 1 and terminal_set(instance, m) <= {l.u, l.v}:
                out.add(l.id)
                break
    return out
