"""Deterministic instance generators: the tower family and seeded random profiles."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .cactus import Instance, k_wideness, make_instance, uncovered_cut, validate_cactus
from .errors import GenerationFailed
from .transforms import TapInstance, tap_to_cacap


def fig3_layout(m: int) -> dict[str, int]:
    """Vertex ids of the tower family by name, towers numbered from 1.

    Tower ``j`` has a top-row vertex ``"j.top"``, a middle vertex ``"j.mid"``
    and two leaves ``"j.a"``, ``"j.b"``.  ``"1.top"`` is the root.
    """
    out = {}
    for j in range(m):
        base = 4 * j
        for k, part in enumerate(("top", "mid", "a", "b")):
            out[f"{j + 1}.{part}"] = base + k
    return out


def fig3_tap(m: int) -> TapInstance:
    """Tower family as a TAP instance.

    Links ``0..m-1`` pair the two leaves of each tower; links ``m..2m-2``
    join leaf ``b`` of tower ``j`` to leaf ``a`` of tower ``j+1``.
    """
    if m < 2:
        raise ValueError("the tower family needs m >= 2")
    v = fig3_layout(m)
    edges = []
    for j in range(1, m + 1):
        if j > 1:
            edges.append((v[f"{j - 1}.top"], v[f"{j}.top"]))
        edges += [(v[f"{j}.top"], v[f"{j}.mid"]), (v[f"{j}.mid"], v[f"{j}.a"]), (v[f"{j}.mid"], v[f"{j}.b"])]
    links = [(v[f"{j}.a"], v[f"{j}.b"]) for j in range(1, m + 1)]
    links += [(v[f"{j}.b"], v[f"{j + 1}.a"]) for j in range(1, m)]
    return TapInstance(4 * m, tuple(edges), tuple(links), root=0)


def gen_fig3(m: int = 6) -> Instance:
    return tap_to_cacap(fig3_tap(m))


def fig3_optimum(m: int) -> list[int]:
    """The chain links plus the two end pair links: a feasible set of size m + 1."""
    return [0, m - 1] + list(range(m, 2 * m - 1))


@dataclass(frozen=True)
class RandomProfile:
    n_range: tuple[int, int] = (4, 12)
    k_cap: int = 3
    link_count: tuple[int, int] = (2, 9)
    endpoints: str = "leaf_to_leaf"  # or "leaf_to_leaf_plus" or "any"
    ensure_feasible: bool = True
    max_cycle_len: int = 4
    retries: int = 500


def _random_cactus(rng: random.Random, n: int, max_len: int):
    cycles = []
    count = 1
    while count < n:
        length = rng.randint(2, min(max_len, n - count + 1))
        anchor = rng.randrange(count)
        new = list(range(count, count + length - 1))
        cycles.append(tuple([anchor] + new))
        count += length - 1
    return validate_cactus(n, cycles)


def _fix_feasibility(rng: random.Random, inst: Instance, pairs: list, endpoints: str) -> list:
    leaves = sorted(inst.leaves)
    while True:
        trial = make_instance(inst.cactus, pairs, inst.root)
        cut = uncovered_cut(trial, range(len(pairs)))
        if cut is None:
            return pairs
        inside = [t for t in leaves if t in cut]
        if endpoints == "leaf_to_leaf":
            outside = [t for t in leaves if t not in cut]
            pairs.append((rng.choice(inside), rng.choice(outside)))
        else:
            pairs.append((rng.choice(inside), inst.root))


def gen_random(profile: RandomProfile = RandomProfile(), seed: int = 0) -> Instance:
    """Random rooted cactus with at most ``k_cap`` leaves per component of G - r.

    Links are drawn between allowed endpoints; with ``ensure_feasible`` each
    uncovered cut gets a link from one of its leaves to the root (or to a leaf
    outside the cut for leaf-to-leaf profiles).  Draws that break the caps
    are retried.
    """
    rng = random.Random(seed)
    lo_l, hi_l = profile.link_count
    for _ in range(profile.retries):
        n = rng.randint(*profile.n_range)
        cactus = _random_cactus(rng, n, profile.max_cycle_len)
        base = make_instance(cactus, [], 0)
        if k_wideness(base) > profile.k_cap:
            continue
        leaves = sorted(base.leaves)
        if profile.endpoints == "leaf_to_leaf":
            pool = leaves
        elif profile.endpoints == "leaf_to_leaf_plus":
            pool = sorted(set(leaves) | {0})
        else:
            pool = list(range(n))
        if len(pool) < 2:
            continue
        pairs = []
        for _ in range(rng.randint(lo_l, hi_l)):
            u, v = rng.sample(pool, 2)
            pairs.append((u, v))
        if profile.ensure_feasible:
            pairs = _fix_feasibility(rng, base, pairs, profile.endpoints)
        if len(pairs) > hi_l:
            continue
        return make_instance(cactus, pairs, 0)
    raise GenerationFailed(f"no instance matched the profile after {profile.retries} draws")


def gen_random_tap(profile: RandomProfile = RandomProfile(), seed: int = 0) -> TapInstance:
    """Random spanning tree with leaf-to-leaf links, feasible unless disabled."""
    rng = random.Random(seed)
    lo_l, hi_l = profile.link_count
    for _ in range(profile.retries):
        n = rng.randint(max(3, profile.n_range[0]), max(3, profile.n_range[1]))
        edges = tuple((rng.randrange(v), v) for v in range(1, n))
        base = tap_to_cacap(TapInstance(n, edges, ()))
        if k_wideness(base) > profile.k_cap:
            continue
        leaves = sorted(base.leaves)
        pairs = [tuple(rng.sample(leaves, 2)) for _ in range(rng.randint(lo_l, hi_l))]
        if profile.ensure_feasible:
            pairs = _fix_feasibility(rng, base, pairs, "leaf_to_leaf")
        if len(pairs) > hi_l:
            continue
        return TapInstance(n, edges, tuple(pairs))
    raise GenerationFailed(f"no tree matched the profile after {profile.retries} draws")


def random_subset(rng: random.Random, size: int) -> list[int]:
    return [i for i in range(size) if rng.random() < 0.5]


__all__ = [
    "fig3_layout",
    "fig3_tap",
    "fig3_optimum",
    "gen_fig3",
    "RandomProfile",
    "gen_random",
    "gen_random_tap",
    "random_subset",
]
