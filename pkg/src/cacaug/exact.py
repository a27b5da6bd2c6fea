"""Exact solvers: the brute-force oracle, per-subcactus optimum and the better-of-two combination."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cactus import (
    Instance,
    LinkKind,
    Solution,
    check_solution,
    make_solution,
    principal_subcacti,
    uncovered_cut,
)
from .completion import run_matching_algorithm
from .covering import min_cover
from .errors import BudgetExceeded, InfeasibleInstance, SubcactusTooLarge

DEFAULT_LEAF_CAP = 8
MAX_RECORDED_OPTIMA = 4096


@dataclass(frozen=True)
class OptCertificate:
    opt_value: int
    optimum: frozenset[int]
    all_optima: tuple[frozenset[int], ...]  # truncated at MAX_RECORDED_OPTIMA
    min_half_in: Fraction  # min over feasible H of |H| + |H_in|/2
    min_plus_cross: int  # min over feasible H of |H| + |H_cross|


def _coverage_words(instance: Instance, ids: list[int]) -> np.ndarray:
    words = max(1, (len(instance.two_cuts) + 63) // 64)
    out = np.zeros((len(ids), words), dtype=np.uint64)
    for row, i in enumerate(ids):
        cov = instance.link_coverage[i]
        for w in range(words):
            out[row, w] = (cov >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    return out


def brute_force_opt(instance: Instance, link_budget: int = 20) -> OptCertificate:
    """Enumerate every link subset (links covering no cut are ignored).

    Raises :class:`BudgetExceeded` if more than ``link_budget`` useful links
    remain and :class:`InfeasibleInstance` if the full link set is infeasible.
    """
    all_ids = range(len(instance.links))
    witness = uncovered_cut(instance, all_ids)
    if witness is not None:
        raise InfeasibleInstance(f"2-cut {list(witness.vertices)} has no covering link", witness)
    ids = [i for i in all_ids if instance.link_coverage[i]]
    if len(ids) > link_budget:
        raise BudgetExceeded(f"{len(ids)} links exceed the budget of {link_budget}")
    cov = _coverage_words(instance, ids)
    words = cov.shape[1]
    full = np.zeros(words, dtype=np.uint64)
    for w in range(words):
        full[w] = (instance.full_cut_mask >> (64 * w)) & 0xFFFFFFFFFFFFFFFF

    acc = np.zeros((1, words), dtype=np.uint64)
    size = np.zeros(1, dtype=np.int64)
    n_in = np.zeros(1, dtype=np.int64)
    kinds = instance.link_kinds
    for row, i in enumerate(ids):
        is_in = int(kinds[i] is LinkKind.IN)
        acc = np.concatenate([acc, acc | cov[row]])
        size = np.concatenate([size, size + 1])
        n_in = np.concatenate([n_in, n_in + is_in])
    feasible = np.all(acc == full, axis=1)
    n_cross = size - n_in

    opt = int(size[feasible].min())
    optimal = np.flatnonzero(feasible & (size == opt))

    def as_set(code: int) -> frozenset[int]:
        return frozenset(ids[b] for b in range(len(ids)) if code >> b & 1)

    optima = tuple(as_set(int(c)) for c in optimal[:MAX_RECORDED_OPTIMA])
    half_in = int((2 * size + n_in)[feasible].min())
    plus_cross = int((size + n_cross)[feasible].min())
    return OptCertificate(opt, optima[0], optima, Fraction(half_in, 2), plus_cross)


def _optimal_cover(instance: Instance) -> frozenset[int]:
    sets = list(instance.link_coverage)
    chosen = min_cover(instance.full_cut_mask, sets)
    if chosen is None:
        witness = uncovered_cut(instance, range(len(instance.links)))
        raise InfeasibleInstance("instance is infeasible", witness)
    return frozenset(chosen)


def solve_subcacti(instance: Instance, leaf_cap: int = DEFAULT_LEAF_CAP) -> Solution:
    """Union of optimal solutions of the principal subcacti."""
    subs = principal_subcacti(instance)
    for sub in subs:
        if sub.leaf_count > leaf_cap:
            raise SubcactusTooLarge(
                f"subcactus with {sub.leaf_count} leaves exceeds the cap of {leaf_cap}"
            )
    chosen: set[int] = set()
    for sub in subs:
        part = _optimal_cover(sub.instance)
        chosen.update(sub.vertex_map.link_origin[i] for i in part)
    sol = check_solution(instance, chosen)
    return make_solution(instance, sol.link_ids, "subcactus", {"subcacti": len(subs)})


def solve_combined(instance: Instance, leaf_cap: int = DEFAULT_LEAF_CAP) -> Solution:
    """The smaller of the matching solution and the subcactus solution (ties keep the former)."""
    f1 = run_matching_algorithm(instance)
    f2 = solve_subcacti(instance, leaf_cap)
    best = f1 if f1.size <= f2.size else f2
    stats = dict(best.stats)
    stats.update({"matching_solution": f1.size, "subcactus_solution": f2.size, "picked": best.algorithm})
    for key in ("matching_links", "objective_bound", "completion_bound", "arcs", "matching_size", "matching_in", "terminals"):
        if key in f1.stats:
            stats[key] = f1.stats[key]
    return make_solution(instance, best.link_ids, "combined", stats)


def solve_exact(instance: Instance, link_budget: int) -> Solution:
    cert = brute_force_opt(instance, link_budget)
    return make_solution(instance, cert.optimum, "exact", {"opt": cert.opt_value})
