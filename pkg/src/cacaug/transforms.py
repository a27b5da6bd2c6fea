"""Instance-to-instance operations: TAP doubling, splitting, contraction,
residual instances, root-shadow completion and supernode leafification."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .cactus import (
    Cactus,
    Instance,
    LinkKind,
    TwoCut,
    VertexMap,
    is_feasible,
    is_leaf_to_leaf_plus,
    iter_bits,
    make_instance,
    validate_cactus,
)
from .errors import InfeasibleInstance, NotATree, NotATwoCut, NotLeafToLeafPlus


@dataclass(frozen=True)
class TapInstance:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    links: tuple[tuple[int, int], ...]
    root: int = 0


def _check_tree(n: int, edges: Sequence[tuple[int, int]]) -> None:
    if n < 1:
        raise NotATree("a tree needs at least one vertex")
    if len(edges) != n - 1:
        raise NotATree(f"{n} vertices need {n - 1} tree edges, got {len(edges)}")
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, (a, b) in enumerate(edges):
        for x in (a, b):
            if not isinstance(x, int) or not 0 <= x < n:
                raise NotATree(f"edge {i} endpoint {x!r} is not a vertex")
        ra, rb = find(a), find(b)
        if ra == rb:
            raise NotATree(f"edge {i} ({a}, {b}) closes a cycle")
        parent[ra] = rb


def tap_to_cacap(tap: TapInstance) -> Instance:
    """Double every tree edge into a 2-cycle; links and root are unchanged."""
    edges = [tuple(e) for e in tap.edges]
    _check_tree(tap.vertex_count, edges)
    cactus = validate_cactus(tap.vertex_count, edges)
    return make_instance(cactus, tap.links, tap.root)


def _split_walk(walk: list[int]) -> list[tuple[int, ...]]:
    """Split a closed walk into simple cycles of length >= 2."""
    walk = [v for i, v in enumerate(walk) if v != walk[i - 1]] if len(walk) > 1 else []
    # the cyclic dedup above can leave a new equal pair at the seam only if all equal
    if len(walk) < 2:
        return []
    out: list[tuple[int, ...]] = []
    stack: list[int] = []
    for v in walk + [walk[0]]:
        if v in stack:
            seg = []
            while stack[-1] != v:
                seg.append(stack.pop())
            if seg:
                out.append(tuple([v] + seg[::-1]))
        else:
            stack.append(v)
    return out


def quotient(
    instance: Instance,
    groups: Iterable[Iterable[int]],
    root: int | None = None,
) -> tuple[Instance, VertexMap]:
    """Contract each vertex group into one supernode.

    Untouched vertices keep their relative order; supernodes get the next ids
    in order of their smallest member.  Links that become self-loops are
    dropped, parallel links are kept.  ``root`` (an original vertex) selects
    the new root; default is the image of the old root.
    """
    groups = sorted((frozenset(g) for g in groups if len(frozenset(g)) > 1), key=min)
    merged = set()
    for g in groups:
        if merged & g:
            raise ValueError("contraction groups must be disjoint")
        merged |= g
    forward: dict[int, int] = {}
    nxt = 0
    for v in range(instance.n):
        if v not in merged:
            forward[v] = nxt
            nxt += 1
    for g in groups:
        for v in g:
            forward[v] = nxt
        nxt += 1
    cycles = []
    for cyc in instance.cactus.cycles:
        cycles.extend(_split_walk([forward[v] for v in cyc]))
    cactus = validate_cactus(nxt, cycles)
    pairs, origin = [], []
    for l in instance.links:
        a, b = forward[l.u], forward[l.v]
        if a != b:
            pairs.append((a, b))
            origin.append(l.id)
    new_root = forward[instance.root if root is None else root]
    new = make_instance(cactus, pairs, new_root)
    return new, VertexMap(forward, tuple(groups), tuple(origin))


def split_at(instance: Instance, cut: TwoCut | Iterable[int]):
    """Split at a 2-cut ``C``.

    Returns ``(I_C, I_rest, map_C, map_rest)``.  ``I_C`` contracts everything
    outside ``C`` into a new root leaf; ``I_rest`` contracts ``C`` into a leaf.
    """
    mask = cut.mask if isinstance(cut, TwoCut) else sum(1 << v for v in set(cut))
    if not any(c.mask == mask for c in instance.two_cuts):
        raise NotATwoCut(f"{sorted(iter_bits(mask))} is not a 2-cut of the instance")
    inside = set(iter_bits(mask))
    outside = [v for v in range(instance.n) if v not in inside]
    side_c, map_c = quotient(instance, [outside], root=instance.root)
    rest, map_rest = quotient(instance, [inside])
    return side_c, rest, map_c, map_rest


def must_pass_vertices(cactus: Cactus, u: int, v: int) -> frozenset[int]:
    """Vertices on every u-v path: the vertex nodes on the block-tree path."""
    if u == v:
        return frozenset([u])
    # BFS over the bipartite vertex/cycle tree; cycle nodes are encoded as ~cid
    prev: dict[int, int | None] = {u: None}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == v:
            break
        if x >= 0:
            nbrs = [~c for c in cactus.cycles_at[x]]
        else:
            nbrs = list(cactus.cycles[~x])
        for y in nbrs:
            if y not in prev:
                prev[y] = x
                queue.append(y)
    out = set()
    x: int | None = v
    while x is not None:
        if x >= 0:
            out.add(x)
        x = prev[x]
    return frozenset(out)


def contract_link(instance: Instance, link) -> tuple[Instance, VertexMap]:
    """Merge the must-pass set of ``link`` into a single supernode."""
    group = must_pass_vertices(instance.cactus, link.u, link.v)
    return quotient(instance, [group])


def residual_instance(instance: Instance, link_ids: Iterable[int], order: Sequence[int] | None = None) -> tuple[Instance, VertexMap]:
    """Contract the links of ``link_ids`` one after another.

    The default order is increasing id; ``order`` overrides it (used by the
    order-independence tests).  A link that already became a self-loop is
    skipped.
    """
    ids = sorted(set(link_ids)) if order is None else list(order)
    for i in ids:
        instance.link(i)
    cur = instance
    vm = VertexMap.identity(instance.n, len(instance.links))
    for orig in ids:
        try:
            pos = vm.link_origin.index(orig)
        except ValueError:
            continue
        cur, step = contract_link(cur, cur.links[pos])
        vm = vm.then(step)
    return cur, vm


def labelled_form(instance: Instance, vertex_map: VertexMap):
    """Canonical description of a derived instance in terms of original vertices.

    Every vertex is named by the set of original vertices mapped onto it, so two
    derived instances with equal forms are isomorphic via the identity on names.
    """
    pre = vertex_map.preimage()
    name = {v: tuple(sorted(pre.get(v, ()))) or (-1 - v,) for v in range(instance.n)}
    cycles = []
    for cyc in instance.cactus.cycles:
        seq = [name[v] for v in cyc]
        k = len(seq)
        variants = []
        for s in (seq, seq[::-1]):
            variants.extend(tuple(s[i:] + s[:i]) for i in range(k))
        cycles.append(min(variants))
    links = sorted(
        (tuple(sorted((name[l.u], name[l.v]))), vertex_map.link_origin[l.id]) for l in instance.links
    )
    return (name[instance.root], tuple(sorted(cycles)), tuple(links))


def root_shadow_completion(instance: Instance) -> Instance:
    """Add ``{u, r}`` and ``{v, r}`` for every cross-link ``{u, v}`` when missing."""
    if not is_leaf_to_leaf_plus(instance):
        raise NotLeafToLeafPlus("root-shadow completion needs a leaf-to-leaf+ instance")
    r = instance.root
    present = {frozenset(l.endpoints) for l in instance.links}
    pairs = [l.endpoints for l in instance.links]
    for l, kind in zip(instance.links, instance.link_kinds):
        if kind is not LinkKind.CROSS:
            continue
        for x in l.endpoints:
            key = frozenset((x, r))
            if x != r and key not in present:
                present.add(key)
                pairs.append((x, r))
    if len(pairs) == len(instance.links):
        return instance
    return make_instance(instance.cactus, pairs, r)


def non_leaf_endpoint_count(instance: Instance) -> int:
    leaves = instance.leaves
    ends = {x for l in instance.links for x in l.endpoints}
    return sum(1 for x in ends if x not in leaves)


class Leafification(NamedTuple):
    x_links: tuple[int, ...]  # contracted original link ids, in contraction order
    instance: Instance  # the leaf-to-leaf instance
    vertex_map: VertexMap  # original vertices -> vertices of ``instance``; link_origin into the input


def construct_X_and_leafify(instance: Instance) -> Leafification:
    """Contract links until every non-leaf link endpoint sits in a supernode that
    holds a leaf (or has no links left), then hang an auxiliary leaf off each
    supernode with links and move those links onto it."""
    if not is_feasible(instance, range(len(instance.links))):
        raise InfeasibleInstance("instance is infeasible")
    leaves = instance.leaves
    bad = {x for l in instance.links for x in l.endpoints if x not in leaves}
    cur = instance
    vm = VertexMap.identity(instance.n, len(instance.links))
    xs: list[int] = []
    while True:
        pre = vm.preimage()
        incident: dict[int, list[int]] = {}
        for l in cur.links:
            incident.setdefault(l.u, []).append(l.id)
            incident.setdefault(l.v, []).append(l.id)
        violating = []
        for v, group in pre.items():
            if len(group) == 1:
                if next(iter(group)) in bad:
                    violating.append(v)
            elif not (group & leaves) and incident.get(v):
                violating.append(v)
        if not violating:
            break
        v = min(violating, key=lambda x: min(pre[x]))
        pos = min(incident[v], key=lambda i: vm.link_origin[i])
        xs.append(vm.link_origin[pos])
        cur, step = contract_link(cur, cur.links[pos])
        vm = vm.then(step)

    pre = vm.preimage()
    has_link = {x for l in cur.links for x in l.endpoints}
    supers = sorted((v for v, g in pre.items() if len(g) > 1 and v in has_link), key=lambda x: min(pre[x]))
    aux = {s: cur.n + i for i, s in enumerate(supers)}
    cycles = list(cur.cactus.cycles) + [(s, t) for s, t in aux.items()]
    cactus = validate_cactus(cur.n + len(aux), cycles)
    pairs = [(aux.get(l.u, l.u), aux.get(l.v, l.v)) for l in cur.links]
    tilde = make_instance(cactus, pairs, cur.root)
    return Leafification(tuple(xs), tilde, VertexMap(dict(vm.forward), vm.merged_groups, vm.link_origin))


def lift_solution(result: Leafification, link_ids: Iterable[int]) -> frozenset[int]:
    """Map a solution of the leafified instance back and add ``X``."""
    return frozenset(result.vertex_map.link_origin[i] for i in link_ids) | frozenset(result.x_links)


__all__ = [
    "TapInstance",
    "tap_to_cacap",
    "quotient",
    "split_at",
    "must_pass_vertices",
    "contract_link",
    "residual_instance",
    "labelled_form",
    "root_shadow_completion",
    "non_leaf_endpoint_count",
    "Leafification",
    "construct_X_and_leafify",
    "lift_solution",
]
