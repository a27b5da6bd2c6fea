"""Cactus / instance data model, 2-cut enumeration and solution verification.

Vertices are dense integers ``0..n-1``.  A cactus is given by its cycles; a
2-element cycle ``(a, b)`` is a pair of parallel edges.  Vertex sets (2-cuts,
subtrees) are Python ints used as bitsets, so ``covers`` is two shifts.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import networkx as nx

from .errors import (
    DegenerateCycle,
    Disconnected,
    EdgeInTwoCycles,
    Infeasible,
    UnknownLinkId,
    ValidationError,
)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Cactus:
    vertex_count: int
    cycles: tuple[tuple[int, ...], ...]

    @cached_property
    def degree(self) -> tuple[int, ...]:
        deg = [0] * self.vertex_count
        for cyc in self.cycles:
            for v in cyc:
                deg[v] += 2
        return tuple(deg)

    @cached_property
    def cycles_at(self) -> tuple[tuple[int, ...], ...]:
        """Cycle ids through each vertex."""
        at: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for cid, cyc in enumerate(self.cycles):
            for v in cyc:
                at[v].append(cid)
        return tuple(tuple(c) for c in at)

    def edges(self) -> list[tuple[int, int, int, int]]:
        """All edges as ``(u, v, cycle_id, position)``; parallel edges are listed twice."""
        out = []
        for cid, cyc in enumerate(self.cycles):
            k = len(cyc)
            for i in range(k):
                out.append((cyc[i], cyc[(i + 1) % k], cid, i))
        return out

    @property
    def vertices(self) -> range:
        return range(self.vertex_count)


def validate_cactus(vertex_count: int, cycles: Sequence[Sequence[int]]) -> Cactus:
    """Check the cactus invariants and return a frozen :class:`Cactus`.

    Raises DegenerateCycle, EdgeInTwoCycles or Disconnected naming the first
    violated invariant.
    """
    if not isinstance(vertex_count, int) or vertex_count < 1:
        raise ValidationError(f"vertex count must be a positive integer, got {vertex_count!r}")
    norm: list[tuple[int, ...]] = []
    for cid, cyc in enumerate(cycles):
        cyc = tuple(cyc)
        if len(cyc) < 2:
            raise DegenerateCycle(f"cycle {cid} has length {len(cyc)} < 2")
        if len(set(cyc)) != len(cyc):
            raise DegenerateCycle(f"cycle {cid} repeats a vertex: {list(cyc)}")
        for v in cyc:
            if not isinstance(v, int) or not 0 <= v < vertex_count:
                raise ValidationError(f"cycle {cid} has vertex {v!r} outside 0..{vertex_count - 1}")
        norm.append(cyc)

    owner: dict[int, list[int]] = {}
    for cid, cyc in enumerate(norm):
        for v in cyc:
            owner.setdefault(v, []).append(cid)
    shared: dict[tuple[int, int], int] = {}
    for v, cids in owner.items():
        for i in range(len(cids)):
            for j in range(i + 1, len(cids)):
                key = (cids[i], cids[j])
                shared[key] = shared.get(key, 0) + 1
                if shared[key] >= 2:
                    raise EdgeInTwoCycles(
                        f"cycles {cids[i]} and {cids[j]} share two or more vertices"
                    )

    # vertex-cycle incidence graph must be a spanning tree
    parent = list(range(vertex_count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cycle_in_block = False
    for cyc in norm:
        a = find(cyc[0])
        for v in cyc[1:]:
            b = find(v)
            if a == b:
                cycle_in_block = True
            parent[b] = a
    roots = {find(v) for v in range(vertex_count)}
    if len(roots) > 1:
        raise Disconnected(f"cactus has {len(roots)} connected components")
    if cycle_in_block:
        raise EdgeInTwoCycles("cycles close a larger cycle; some edge lies in two cycles")
    return Cactus(vertex_count, tuple(norm))


def leaves(cactus: Cactus) -> frozenset[int]:
    """Vertices of total degree 2 (edge multiplicity counted)."""
    return frozenset(v for v, d in enumerate(cactus.degree) if d == 2)


@dataclass(frozen=True)
class Link:
    u: int
    v: int
    id: int

    @property
    def endpoints(self) -> tuple[int, int]:
        return (self.u, self.v)

    @property
    def mask(self) -> int:
        return (1 << self.u) | (1 << self.v)


@dataclass(frozen=True)
class TwoCut:
    """Root-free side ``C`` of a pair of edges of one cycle, as a bitset."""

    mask: int
    cycle: int
    cut_edges: tuple[int, int]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.mask))

    def __contains__(self, v: int) -> bool:
        return bool(self.mask >> v & 1)

    def __len__(self) -> int:
        return self.mask.bit_count() if hasattr(int, "bit_count") else bin(self.mask).count("1")


class LinkKind(enum.Enum):
    IN = "in"
    CROSS = "cross"


@dataclass(frozen=True)
class VertexMap:
    """Provenance of a derived instance.

    ``forward`` maps original vertices to new ones; ``merged_groups`` lists the
    original vertex sets that became supernodes; ``link_origin[i]`` is the
    original id of new link ``i``.
    """

    forward: dict[int, int]
    merged_groups: tuple[frozenset[int], ...]
    link_origin: tuple[int, ...]

    def preimage(self) -> dict[int, frozenset[int]]:
        back: dict[int, set[int]] = {}
        for old, new in self.forward.items():
            back.setdefault(new, set()).add(old)
        return {k: frozenset(v) for k, v in back.items()}

    def then(self, other: "VertexMap") -> "VertexMap":
        """Compose: apply ``self`` first, then ``other``."""
        forward = {old: other.forward[mid] for old, mid in self.forward.items() if mid in other.forward}
        back: dict[int, set[int]] = {}
        for old, new in forward.items():
            back.setdefault(new, set()).add(old)
        groups = tuple(sorted((frozenset(g) for g in back.values() if len(g) > 1), key=min))
        link_origin = tuple(self.link_origin[i] for i in other.link_origin)
        return VertexMap(forward, groups, link_origin)

    @staticmethod
    def identity(n: int, link_count: int) -> "VertexMap":
        return VertexMap({v: v for v in range(n)}, (), tuple(range(link_count)))


@dataclass(frozen=True)
class Instance:
    cactus: Cactus
    links: tuple[Link, ...]
    root: int = 0

    @property
    def n(self) -> int:
        return self.cactus.vertex_count

    def link(self, link_id: int) -> Link:
        if not isinstance(link_id, int) or not 0 <= link_id < len(self.links):
            raise UnknownLinkId(link_id)
        return self.links[link_id]

    @cached_property
    def leaves(self) -> frozenset[int]:
        return leaves(self.cactus)

    @cached_property
    def leaf_mask(self) -> int:
        return mask_of(self.leaves)

    @cached_property
    def _rooted(self) -> tuple[dict[int, tuple[int, ...]], tuple[int, ...]]:
        """Root the vertex-cycle tree; return per-cycle rotated order and subtree masks."""
        cac = self.cactus
        rotated: dict[int, tuple[int, ...]] = {}
        order: list[int] = []
        seen_cycle = [False] * len(cac.cycles)
        queue = deque([self.root])
        while queue:
            v = queue.popleft()
            order.append(v)
            for cid in cac.cycles_at[v]:
                if seen_cycle[cid]:
                    continue
                seen_cycle[cid] = True
                cyc = cac.cycles[cid]
                off = cyc.index(v)
                rot = cyc[off:] + cyc[:off]
                rotated[cid] = rot
                queue.extend(rot[1:])
        sub = [1 << v for v in range(cac.vertex_count)]
        child_cycles: dict[int, list[int]] = {}
        for cid, rot in rotated.items():
            child_cycles.setdefault(rot[0], []).append(cid)
        for v in reversed(order):
            for cid in child_cycles.get(v, ()):
                for w in rotated[cid][1:]:
                    sub[v] |= sub[w]
        return rotated, tuple(sub)

    @cached_property
    def subtree_masks(self) -> tuple[int, ...]:
        return self._rooted[1]

    @cached_property
    def two_cuts(self) -> tuple[TwoCut, ...]:
        rotated, sub = self._rooted
        cuts = []
        for cid in range(len(self.cactus.cycles)):
            rot = rotated[cid]
            k = len(rot)
            off = self.cactus.cycles[cid].index(rot[0])
            for i in range(k):
                acc = 0
                for j in range(i + 1, k):
                    acc |= sub[rot[j]]
                    # removing rotated edges i and j isolates rot[i+1..j]
                    edges = tuple(sorted(((off + i) % k, (off + j) % k)))
                    cuts.append(TwoCut(acc, cid, edges))
        return tuple(cuts)

    @cached_property
    def full_cut_mask(self) -> int:
        return (1 << len(self.two_cuts)) - 1

    @cached_property
    def link_coverage(self) -> tuple[int, ...]:
        """Per link, the bitset (over ``two_cuts`` indices) of cuts it covers."""
        return tuple(self.pair_coverage(l.u, l.v) for l in self.links)

    def pair_coverage(self, u: int, v: int) -> int:
        cov = 0
        for idx, cut in enumerate(self.two_cuts):
            if (cut.mask >> u & 1) != (cut.mask >> v & 1):
                cov |= 1 << idx
        return cov

    @cached_property
    def component(self) -> tuple[int, ...]:
        """Component id of each vertex in G - r; the root gets -1."""
        comp = [-1] * self.n
        cac, r = self.cactus, self.root
        nxt = 0
        for start in range(self.n):
            if start == r or comp[start] != -1:
                continue
            comp[start] = nxt
            stack = [start]
            while stack:
                v = stack.pop()
                for cid in cac.cycles_at[v]:
                    cyc = cac.cycles[cid]
                    i = cyc.index(v)
                    for w in (cyc[i - 1], cyc[(i + 1) % len(cyc)]):
                        if w != r and comp[w] == -1:
                            comp[w] = nxt
                            stack.append(w)
            nxt += 1
        return tuple(comp)

    @cached_property
    def link_kinds(self) -> tuple[LinkKind, ...]:
        return tuple(classify_link(self, l) for l in self.links)


def make_instance(cactus: Cactus, links: Iterable[Sequence[int]], root: int = 0) -> Instance:
    """Build an instance; link ids are assigned densely in input order."""
    if not isinstance(root, int) or not 0 <= root < cactus.vertex_count:
        raise ValidationError(f"root {root!r} is not a vertex")
    out = []
    for i, pair in enumerate(links):
        u, v = pair
        for x in (u, v):
            if not isinstance(x, int) or not 0 <= x < cactus.vertex_count:
                raise ValidationError(f"link {i} endpoint {x!r} is not a vertex")
        if u == v:
            raise ValidationError(f"link {i} is a self-loop at {u}")
        out.append(Link(u, v, i))
    return Instance(cactus, tuple(out), root)


def enumerate_two_cuts(instance: Instance) -> tuple[TwoCut, ...]:
    return instance.two_cuts


def covers(link: Link, cut: TwoCut) -> bool:
    return (cut.mask >> link.u & 1) != (cut.mask >> link.v & 1)


def classify_link(instance: Instance, link: Link) -> LinkKind:
    r = instance.root
    if r in (link.u, link.v):
        return LinkKind.CROSS
    comp = instance.component
    return LinkKind.IN if comp[link.u] == comp[link.v] else LinkKind.CROSS


def is_leaf_to_leaf(instance: Instance) -> bool:
    lv = instance.leaves
    return all(l.u in lv and l.v in lv for l in instance.links)


def is_leaf_to_leaf_plus(instance: Instance) -> bool:
    ok = instance.leaves | {instance.root}
    return all(l.u in ok and l.v in ok for l in instance.links)


@dataclass(frozen=True)
class Solution:
    link_ids: frozenset[int]
    in_count: int
    cross_count: int
    algorithm: str = ""
    stats: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def size(self) -> int:
        return len(self.link_ids)


def make_solution(instance: Instance, link_ids: Iterable[int], algorithm: str = "", stats: dict | None = None) -> Solution:
    ids = frozenset(link_ids)
    kinds = instance.link_kinds
    for i in ids:
        instance.link(i)
    n_in = sum(1 for i in ids if kinds[i] is LinkKind.IN)
    return Solution(ids, n_in, len(ids) - n_in, algorithm, dict(stats or {}))


def coverage_of(instance: Instance, link_ids: Iterable[int]) -> int:
    cov = 0
    table = instance.link_coverage
    for i in link_ids:
        instance.link(i)
        cov |= table[i]
    return cov


def uncovered_cut(instance: Instance, link_ids: Iterable[int]) -> TwoCut | None:
    missing = instance.full_cut_mask & ~coverage_of(instance, link_ids)
    if not missing:
        return None
    return instance.two_cuts[(missing & -missing).bit_length() - 1]


def is_feasible(instance: Instance, link_ids: Iterable[int]) -> bool:
    return uncovered_cut(instance, link_ids) is None


def check_solution(instance: Instance, link_ids: Iterable[int]) -> Solution:
    """Return the :class:`Solution` for ``link_ids`` or raise :class:`Infeasible`.

    The raised error carries an uncovered 2-cut as ``witness``.
    """
    ids = list(link_ids)
    witness = uncovered_cut(instance, ids)
    if witness is not None:
        raise Infeasible(f"2-cut {list(witness.vertices)} is not covered", witness)
    return make_solution(instance, ids)


def three_edge_connected_with(instance: Instance, link_ids: Iterable[int]) -> bool:
    """Independent check: global min cut of cactus + chosen links is at least 3."""
    if instance.n == 1:
        return True
    g = nx.Graph()
    g.add_nodes_from(range(instance.n))

    def bump(a: int, b: int) -> None:
        if g.has_edge(a, b):
            g[a][b]["weight"] += 1
        else:
            g.add_edge(a, b, weight=1)

    for u, v, _, _ in instance.cactus.edges():
        bump(u, v)
    for i in link_ids:
        l = instance.link(i)
        bump(l.u, l.v)
    cut_value, _ = nx.stoer_wagner(g)
    return cut_value >= 3


def k_wideness(instance: Instance) -> int:
    comp = instance.component
    counts: dict[int, int] = {}
    for v in instance.leaves:
        if comp[v] >= 0:
            counts[comp[v]] = counts.get(comp[v], 0) + 1
    return max(counts.values(), default=0)


@dataclass(frozen=True)
class Subcactus:
    vertices: frozenset[int]  # W, a component of G - r
    instance: Instance  # induced on W + r, root relabelled
    vertex_map: VertexMap  # defined on W + r only

    @property
    def leaf_count(self) -> int:
        return sum(1 for v in self.vertices if self.vertex_map.forward[v] in self.instance.leaves)


def principal_subcacti(instance: Instance) -> list[Subcactus]:
    """Split at the root into the principal subcacti ``G[W + r]``.

    Each sub-instance gets every link with an endpoint in ``W``; an endpoint
    outside ``W + r`` is moved to the root.
    """
    comp = instance.component
    r = instance.root
    groups: dict[int, list[int]] = {}
    for v in range(instance.n):
        if v != r:
            groups.setdefault(comp[v], []).append(v)
    out = []
    for cid in sorted(groups):
        w = groups[cid]
        keep = [r] + w
        fwd = {old: new for new, old in enumerate(keep)}
        cycles = [
            tuple(fwd[v] for v in cyc)
            for cyc in instance.cactus.cycles
            if any(v != r and comp[v] == cid for v in cyc)
        ]
        cactus = validate_cactus(len(keep), cycles)
        pairs, origin = [], []
        for l in instance.links:
            a_in = l.u != r and comp[l.u] == cid
            b_in = l.v != r and comp[l.v] == cid
            if not (a_in or b_in):
                continue
            pairs.append((fwd.get(l.u, 0), fwd.get(l.v, 0)))
            origin.append(l.id)
        # a link whose far endpoint is remapped onto r stays a valid pair since one end is in W
        sub = make_instance(cactus, pairs, root=0)
        out.append(Subcactus(frozenset(w), sub, VertexMap(fwd, (), tuple(origin))))
    return out
