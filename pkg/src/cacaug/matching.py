"""Bad links, eligible links and the maximum-weight leaf matching."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import networkx as nx

from .cactus import Instance, LinkKind, TwoCut, iter_bits

IN_WEIGHT = 1
CROSS_WEIGHT = 2


@dataclass(frozen=True)
class Matching:
    link_ids: frozenset[int]
    covered_leaves: frozenset[int]
    in_count: int
    cross_count: int
    terminal_count: int  # |T|, all leaves of the cactus

    @property
    def size(self) -> int:
        return len(self.link_ids)

    @property
    def weight(self) -> int:
        """Scaled weight: 2 per cross-link, 1 per in-link."""
        return CROSS_WEIGHT * self.cross_count + IN_WEIGHT * self.in_count

    @property
    def objective(self) -> Fraction:
        """``|M| + |M_in|/2 + (|T| - 2|M|)``."""
        return self.size + Fraction(self.in_count, 2) + (self.terminal_count - 2 * self.size)


def make_matching(instance: Instance, link_ids: Iterable[int]) -> Matching:
    ids = frozenset(link_ids)
    seen: set[int] = set()
    n_in = 0
    for i in sorted(ids):
        l = instance.link(i)
        if l.u in seen or l.v in seen:
            raise ValueError(f"link {i} shares an endpoint with another matching link")
        seen.update(l.endpoints)
        n_in += instance.link_kinds[i] is LinkKind.IN
    return Matching(ids, frozenset(seen), n_in, len(ids) - n_in, len(instance.leaves))


def _terminal_masks(instance: Instance) -> list[int]:
    """Per cut index, the bitset ``T_C``."""
    out = [0] * len(instance.two_cuts)
    leaf_mask = instance.leaf_mask
    for l, cov in zip(instance.links, instance.link_coverage):
        for idx in iter_bits(cov):
            out[idx] |= l.mask & instance.two_cuts[idx].mask & leaf_mask
    return out


def cut_terminal_set(instance: Instance, cut: TwoCut) -> frozenset[int]:
    """Leaves inside ``cut`` that are endpoints of a link covering it."""
    mask = 0
    for l in instance.links:
        if (cut.mask >> l.u & 1) != (cut.mask >> l.v & 1):
            mask |= l.mask & cut.mask & instance.leaf_mask
    return frozenset(iter_bits(mask))


def bad_link_witnesses(instance: Instance) -> dict[int, TwoCut]:
    """Map each bad link id to the first cut ``C`` with ``T_C ⊆ {u,v} ⊆ C``."""
    terms = _terminal_masks(instance)
    out: dict[int, TwoCut] = {}
    for l in instance.links:
        m = l.mask
        for idx, cut in enumerate(instance.two_cuts):
            if m & ~cut.mask == 0 and terms[idx] & ~m == 0:
                out[l.id] = cut
                break
    return out


def bad_links(instance: Instance) -> frozenset[int]:
    return frozenset(bad_link_witnesses(instance))


def eligible_links(instance: Instance) -> frozenset[int]:
    bad = bad_links(instance)
    leaves = instance.leaves
    return frozenset(
        l.id for l in instance.links if l.id not in bad and l.u in leaves and l.v in leaves
    )


def _link_weight(instance: Instance, i: int) -> int:
    return CROSS_WEIGHT if instance.link_kinds[i] is LinkKind.CROSS else IN_WEIGHT


def max_weight_matching(instance: Instance, candidates: Iterable[int] | None = None) -> Matching:
    """Maximum-weight matching over eligible links (or over ``candidates``).

    Weights are 2 for cross-links and 1 for in-links.  Among maximisers the
    set preferring lower link ids is returned: each link gets a bonus
    ``2**(L-1-id)`` below the resolution of the primary weight.
    """
    ids = sorted(eligible_links(instance) if candidates is None else set(candidates))
    if not ids:
        return make_matching(instance, ())
    big = len(instance.links)
    scale = 1 << big
    g = nx.Graph()
    for i in ids:
        l = instance.links[i]
        w = _link_weight(instance, i) * scale + (1 << (big - 1 - i))
        # parallel links: equal primary weight, the lower id has the larger bonus
        if g.has_edge(l.u, l.v) and g[l.u][l.v]["weight"] >= w:
            continue
        g.add_edge(l.u, l.v, weight=w, id=i)
    mate = nx.max_weight_matching(g, maxcardinality=False)
    return make_matching(instance, (g[a][b]["id"] for a, b in mate))


def exhaustive_max_weight(instance: Instance, candidates: Iterable[int] | None = None) -> tuple[int, frozenset[int]]:
    """Oracle: enumerate all matchings, return the best scaled weight and one argmax."""
    ids = sorted(eligible_links(instance) if candidates is None else set(candidates))
    links = [instance.links[i] for i in ids]
    weights = [_link_weight(instance, i) for i in ids]
    best = [0, frozenset()]

    def rec(k: int, used: int, w: int, chosen: list[int]) -> None:
        if w > best[0]:
            best[0], best[1] = w, frozenset(chosen)
        for j in range(k, len(links)):
            m = links[j].mask
            if used & m:
                continue
            chosen.append(links[j].id)
            rec(j + 1, used | m, w + weights[j], chosen)
            chosen.pop()

    rec(0, 0, 0, [])
    return best[0], best[1]


def max_cardinality_leaf_matching(instance: Instance) -> Matching:
    """Maximum-cardinality matching over all leaf-to-leaf links, bad ones included."""
    leaves = instance.leaves
    ids = [l.id for l in instance.links if l.u in leaves and l.v in leaves]
    if not ids:
        return make_matching(instance, ())
    big = len(instance.links)
    g = nx.Graph()
    for i in ids:
        l = instance.links[i]
        w = (1 << big) + (1 << (big - 1 - i))
        if g.has_edge(l.u, l.v) and g[l.u][l.v]["weight"] >= w:
            continue
        g.add_edge(l.u, l.v, weight=w, id=i)
    mate = nx.max_weight_matching(g, maxcardinality=True)
    return make_matching(instance, (g[a][b]["id"] for a, b in mate))
