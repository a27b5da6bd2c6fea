"""Exact minimum-cardinality set cover by branch and bound.

Elements and sets are bitmasks.  Used for the directed cut-covering problem
and for the per-subcactus exact solver.
"""

from __future__ import annotations

from typing import Sequence

from .cactus import iter_bits


def _prune(sets: Sequence[int], universe: int) -> list[int]:
    """Indices of sets that are neither empty nor dominated (ties keep the lowest index)."""
    masks = [s & universe for s in sets]
    keep = []
    for i, m in enumerate(masks):
        if not m:
            continue
        dominated = False
        for j, o in enumerate(masks):
            if j == i or m & ~o:
                continue
            if o != m or j < i:
                dominated = True
                break
        if not dominated:
            keep.append(i)
    return keep


def uncoverable(universe: int, sets: Sequence[int]) -> int:
    """Elements of ``universe`` contained in no set."""
    reach = 0
    for s in sets:
        reach |= s
    return universe & ~reach


def min_cover(universe: int, sets: Sequence[int]) -> list[int] | None:
    """Smallest list of set indices whose union contains ``universe``.

    Returns ``None`` if no cover exists.  Among optima the search returns the
    first one found, which is deterministic for fixed input order.
    """
    if not universe:
        return []
    if uncoverable(universe, sets):
        return None
    idx = _prune(sets, universe)
    masks = [sets[i] & universe for i in idx]
    holders: dict[int, list[int]] = {e: [] for e in iter_bits(universe)}
    for k, m in enumerate(masks):
        for e in iter_bits(m):
            holders[e].append(k)
    reach = {e: 0 for e in holders}
    for e, hs in holders.items():
        for k in hs:
            reach[e] |= masks[k]

    # greedy upper bound
    best: list[int] = []
    covered = 0
    while covered != universe:
        k = max(range(len(masks)), key=lambda j: (masks[j] & ~covered).bit_count())
        best.append(k)
        covered |= masks[k]
    best_len = [len(best)]
    best_sol = [best]

    def lower_bound(uncovered: int) -> int:
        blocked = 0
        count = 0
        for e in sorted(iter_bits(uncovered), key=lambda x: len(holders[x])):
            if not blocked >> e & 1:
                count += 1
                blocked |= reach[e]
        return count

    def search(covered: int, chosen: list[int]) -> None:
        uncovered = universe & ~covered
        if not uncovered:
            if len(chosen) < best_len[0]:
                best_len[0] = len(chosen)
                best_sol[0] = list(chosen)
            return
        if len(chosen) + lower_bound(uncovered) >= best_len[0]:
            return
        e = min(iter_bits(uncovered), key=lambda x: len(holders[x]))
        options = sorted(holders[e], key=lambda k: -(masks[k] & uncovered).bit_count())
        for k in options:
            chosen.append(k)
            search(covered | masks[k], chosen)
            chosen.pop()

    search(0, [])
    return sorted(idx[k] for k in best_sol[0])
