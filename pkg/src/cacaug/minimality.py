"""Shadows and the coverage-minimality predicates on cross-links."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .cactus import Instance, Link, LinkKind
from .exact import brute_force_opt
from .transforms import must_pass_vertices


def shadows(instance: Instance, link: Link) -> frozenset[frozenset[int]]:
    """All vertex pairs drawn from the must-pass set of ``link``, the link itself included."""
    mp = must_pass_vertices(instance.cactus, link.u, link.v)
    return frozenset(frozenset(p) for p in combinations(sorted(mp), 2))


def strict_shadows(instance: Instance, link: Link) -> frozenset[frozenset[int]]:
    return shadows(instance, link) - {frozenset(link.endpoints)}


def coverage(instance: Instance, pairs: Iterable[Iterable[int]]) -> int:
    """Bitset over cut indices of the cuts crossed by any of ``pairs``."""
    cov = 0
    for p in pairs:
        u, v = tuple(p)
        cov |= instance.pair_coverage(u, v)
    return cov


def _strict_subset(a: int, b: int) -> bool:
    return a & ~b == 0 and a != b


def is_minimal_wrt(instance: Instance, l1: Link, l2: Link) -> bool:
    both = instance.link_coverage[l1.id] | instance.link_coverage[l2.id]
    c2 = instance.link_coverage[l2.id]
    if not _strict_subset(c2, both):
        return False
    for s in strict_shadows(instance, l1):
        if not _strict_subset(coverage(instance, [s]) | c2, both):
            return False
    return True


def is_weakly_cross_minimal(instance: Instance, link_ids: Iterable[int]) -> bool:
    cross = [instance.link(i) for i in sorted(set(link_ids)) if instance.link_kinds[i] is LinkKind.CROSS]
    for a in cross:
        for b in cross:
            if a.id != b.id and not is_minimal_wrt(instance, a, b):
                return False
    return True


def exists_weakly_minimal_optimum(instance: Instance, link_budget: int = 20) -> bool:
    cert = brute_force_opt(instance, link_budget)
    return any(is_weakly_cross_minimal(instance, opt) for opt in cert.all_optima)
