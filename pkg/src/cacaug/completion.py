"""Completing a leaf matching by an optimal directed cut cover."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .cactus import (
    Instance,
    Solution,
    TwoCut,
    check_solution,
    coverage_of,
    is_feasible,
    is_leaf_to_leaf_plus,
    make_solution,
    uncovered_cut,
)
from .covering import min_cover
from .errors import GuaranteeViolated, Infeasible, InfeasibleInstance, NotLeafToLeafPlus
from .matching import Matching, max_cardinality_leaf_matching, max_weight_matching


@dataclass(frozen=True)
class DirectedLink:
    tail: int
    head: int
    source_link: int

    def enters(self, cut: TwoCut) -> bool:
        return cut.mask >> self.head & 1 == 1 and cut.mask >> self.tail & 1 == 0


@dataclass(frozen=True)
class CoverProblem:
    cuts: tuple[TwoCut, ...]
    arcs: tuple[DirectedLink, ...]
    incidence: tuple[frozenset[int], ...]  # per cut, indices of entering arcs

    @staticmethod
    def build(cuts: Sequence[TwoCut], arcs: Sequence[DirectedLink]) -> "CoverProblem":
        cuts, arcs = tuple(cuts), tuple(arcs)
        inc = tuple(frozenset(j for j, a in enumerate(arcs) if a.enters(c)) for c in cuts)
        return CoverProblem(cuts, arcs, inc)


def both_orientations(instance: Instance, link_ids: Iterable[int] | None = None) -> list[DirectedLink]:
    ids = range(len(instance.links)) if link_ids is None else sorted(link_ids)
    out = []
    for i in ids:
        l = instance.link(i)
        out.append(DirectedLink(l.u, l.v, i))
        out.append(DirectedLink(l.v, l.u, i))
    return out


def uncovered_cuts(instance: Instance, link_ids: Iterable[int]) -> list[TwoCut]:
    cov = coverage_of(instance, link_ids)
    return [c for idx, c in enumerate(instance.two_cuts) if not cov >> idx & 1]


def solve_cover_problem(problem: CoverProblem) -> list[int]:
    """Indices of a minimum number of arcs such that every cut has an entering arc."""
    for c, inc in zip(problem.cuts, problem.incidence):
        if not inc:
            raise Infeasible(f"no arc enters cut {list(c.vertices)}", c)
    sets = [0] * len(problem.arcs)
    for k, inc in enumerate(problem.incidence):
        for j in inc:
            sets[j] |= 1 << k
    chosen = min_cover((1 << len(problem.cuts)) - 1, sets)
    assert chosen is not None
    return chosen


def min_directed_cover(problem: CoverProblem) -> frozenset[int]:
    """Source links of an optimal arc cover (orientations are discarded)."""
    return frozenset(problem.arcs[j].source_link for j in solve_cover_problem(problem))


def complete_matching(instance: Instance, matching: Matching) -> Solution:
    """``F = M ∪ U`` where ``U`` comes from an optimal cover of the cuts ``M`` misses.

    Raises :class:`GuaranteeViolated` if the cover uses more than
    ``|M_in|/2 + |T| - 2|M|`` arcs.
    """
    if not is_feasible(instance, range(len(instance.links))):
        raise InfeasibleInstance("instance is infeasible", uncovered_cut(instance, range(len(instance.links))))
    cuts = uncovered_cuts(instance, matching.link_ids)
    problem = CoverProblem.build(cuts, both_orientations(instance))
    arcs = solve_cover_problem(problem)
    u = frozenset(problem.arcs[j].source_link for j in arcs)
    t = len(instance.leaves)
    slack2 = matching.in_count + 2 * (t - 2 * matching.size)
    if 2 * len(arcs) > slack2:
        raise GuaranteeViolated(
            f"completion used {len(arcs)} arcs, bound is {slack2 / 2}"
        )
    sol = check_solution(instance, matching.link_ids | u)
    stats = {
        "matching_links": sorted(matching.link_ids),
        "matching_size": matching.size,
        "matching_in": matching.in_count,
        "matching_cross": matching.cross_count,
        "terminals": t,
        "uncovered_cuts": len(cuts),
        "arcs": len(arcs),
        "completion_size": len(u),
        "completion_bound": slack2 / 2,
        "objective_bound": matching.size + slack2 / 2,
    }
    return make_solution(instance, sol.link_ids, "matching", stats)


def run_matching_algorithm(instance: Instance) -> Solution:
    """Leaf matching of maximum weight, completed by an optimal directed cover."""
    if not is_leaf_to_leaf_plus(instance):
        raise NotLeafToLeafPlus("the matching algorithm needs a leaf-to-leaf+ instance")
    return complete_matching(instance, max_weight_matching(instance))


def naive_completion(instance: Instance) -> Solution:
    """Maximum-cardinality leaf matching (bad links allowed) plus a cheapest
    undirected completion.  Only used to illustrate why bad links are excluded."""
    m = max_cardinality_leaf_matching(instance)
    cuts = uncovered_cuts(instance, m.link_ids)
    index = {c.mask: k for k, c in enumerate(cuts)}
    sets = []
    for l in instance.links:
        s = 0
        for c in cuts:
            if (c.mask >> l.u & 1) != (c.mask >> l.v & 1):
                s |= 1 << index[c.mask]
        sets.append(s)
    chosen = min_cover((1 << len(cuts)) - 1, sets)
    if chosen is None:
        raise InfeasibleInstance("instance is infeasible")
    sol = check_solution(instance, m.link_ids | frozenset(chosen))
    return make_solution(instance, sol.link_ids, "naive", {"matching_size": m.size, "completion_size": len(chosen)})
