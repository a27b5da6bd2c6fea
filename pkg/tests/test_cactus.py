from __future__ import annotations

import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from cacaug.cactus import (
    Link,
    LinkKind,
    check_solution,
    classify_link,
    covers,
    enumerate_two_cuts,
    is_feasible,
    is_leaf_to_leaf,
    is_leaf_to_leaf_plus,
    k_wideness,
    leaves,
    make_instance,
    principal_subcacti,
    three_edge_connected_with,
    validate_cactus,
)
from cacaug.errors import (
    DegenerateCycle,
    Disconnected,
    EdgeInTwoCycles,
    Infeasible,
    UnknownLinkId,
    ValidationError,
)
from cacaug.generators import RandomProfile, fig3_layout, fig3_optimum, gen_fig3, gen_random

from conftest import inst
from oracles import cut_masks_by_subsets, feasible_by_definition

ANY = RandomProfile(n_range=(2, 10), k_cap=10, link_count=(0, 8), endpoints="any", ensure_feasible=False)


def test_validate_smallest_cactus():
    c = validate_cactus(2, [[0, 1]])
    assert c.degree == (2, 2)


def test_validate_triangle_with_pendant():
    c = validate_cactus(4, [[0, 1, 2], [2, 3]])
    assert c.degree == (2, 2, 4, 2)


def test_validate_rejects_shared_pair():
    with pytest.raises(EdgeInTwoCycles):
        validate_cactus(4, [[0, 1, 2], [0, 1, 3]])


def test_validate_rejects_larger_block():
    # three 2-cycles forming a triangle of blocks: the triangle edges lie in a bigger cycle
    with pytest.raises(EdgeInTwoCycles):
        validate_cactus(3, [[0, 1], [1, 2], [2, 0]])


@pytest.mark.parametrize("cycles", [[[0]], [[0, 1, 0]], []])
def test_validate_rejects_degenerate(cycles):
    with pytest.raises((DegenerateCycle, Disconnected)):
        validate_cactus(2, cycles)


def test_validate_rejects_disconnected():
    with pytest.raises(Disconnected):
        validate_cactus(4, [[0, 1], [2, 3]])


def test_validate_rejects_out_of_range():
    with pytest.raises(ValidationError):
        validate_cactus(2, [[0, 2]])


def test_single_vertex_is_a_cactus():
    i = make_instance(validate_cactus(1, []), [])
    assert enumerate_two_cuts(i) == ()
    assert three_edge_connected_with(i, [])


def test_leaves_examples():
    assert leaves(validate_cactus(2, [[0, 1]])) == {0, 1}
    assert leaves(validate_cactus(4, [[0, 1, 2], [2, 3]])) == {0, 1, 3}
    assert len(gen_fig3(6).leaves) == 12


def test_two_cuts_examples():
    i = inst(2, [[0, 1]])
    assert [c.vertices for c in enumerate_two_cuts(i)] == [(1,)]
    t = inst(3, [[0, 1, 2]])
    assert sorted(c.vertices for c in enumerate_two_cuts(t)) == [(1,), (1, 2), (2,)]
    assert len(enumerate_two_cuts(gen_fig3(6))) == 23


def test_two_cut_edges_are_the_leaving_edges():
    i = inst(5, [[0, 1, 2, 3], [2, 4]], root=0)
    for cut in enumerate_two_cuts(i):
        cyc = i.cactus.cycles[cut.cycle]
        k = len(cyc)
        leaving = {p for p in range(k) if (cyc[p] in cut) != (cyc[(p + 1) % k] in cut)}
        assert leaving == set(cut.cut_edges)


def test_covers_examples():
    t = inst(4, [[0, 1, 2], [2, 3]])
    cut1 = next(c for c in t.two_cuts if c.vertices == (1,))
    cut12 = next(c for c in t.two_cuts if c.vertices == (1, 2, 3))
    assert covers(Link(0, 1, 0), cut1)
    assert not covers(Link(1, 2, 0), cut12)
    assert not covers(Link(0, 0, 0), cut12)


def test_classify_examples():
    i = gen_fig3(6)
    v = fig3_layout(6)
    assert classify_link(i, Link(0, v["3.a"], 0)) is LinkKind.CROSS
    assert classify_link(i, Link(v["2.a"], v["3.b"], 0)) is LinkKind.IN
    assert classify_link(i, Link(v["1.a"], v["2.b"], 0)) is LinkKind.CROSS


def test_leaf_to_leaf_predicates():
    base = validate_cactus(4, [[0, 1, 2], [2, 3]])
    plain = make_instance(base, [(1, 3)], 0)
    assert (is_leaf_to_leaf(plain), is_leaf_to_leaf_plus(plain)) == (True, True)
    root_link = make_instance(base, [(1, 3), (2, 3)], root=2)
    assert (is_leaf_to_leaf(root_link), is_leaf_to_leaf_plus(root_link)) == (False, True)
    inner = make_instance(base, [(2, 3)], root=0)
    assert (is_leaf_to_leaf(inner), is_leaf_to_leaf_plus(inner)) == (False, False)


def test_check_solution_examples(two_cycle):
    sol = check_solution(two_cycle, [0])
    assert sol.cross_count == 1 and sol.in_count == 0
    t = inst(3, [[0, 1, 2]], [(1, 2)])
    with pytest.raises(Infeasible) as exc:
        check_solution(t, [0])
    assert exc.value.witness.vertices == (1, 2)
    assert check_solution(gen_fig3(6), fig3_optimum(6)).size == 7


def test_check_solution_unknown_id(two_cycle):
    with pytest.raises(UnknownLinkId):
        check_solution(two_cycle, [3])


def test_three_edge_connected_examples(two_cycle):
    assert three_edge_connected_with(two_cycle, [0])
    assert not three_edge_connected_with(inst(3, [[0, 1, 2]]), [])


def test_k_wideness_examples(two_cycle, triangle):
    assert k_wideness(two_cycle) == 1
    assert [s.vertices for s in principal_subcacti(two_cycle)] == [frozenset({1})]
    assert k_wideness(triangle) == 2
    assert [s.vertices for s in principal_subcacti(triangle)] == [frozenset({1, 2})]


def test_k_wideness_generator_respects_cap():
    for seed in range(40):
        i = gen_random(RandomProfile(k_cap=3), seed)
        assert k_wideness(i) <= 3


def test_subcacti_partition_and_links():
    for seed in range(40):
        i = gen_random(RandomProfile(n_range=(4, 12), k_cap=6, endpoints="any"), seed)
        subs = principal_subcacti(i)
        union = set()
        for s in subs:
            assert not union & s.vertices
            union |= s.vertices
            for new_id, orig in enumerate(s.vertex_map.link_origin):
                l = i.links[orig]
                assert l.u in s.vertices or l.v in s.vertices
                nl = s.instance.links[new_id]
                for old, new in ((l.u, nl.u), (l.v, nl.v)):
                    assert new == s.vertex_map.forward.get(old, 0)
        assert union == set(range(i.n)) - {i.root}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_cut_enumeration_matches_subset_oracle(seed):
    i = gen_random(ANY, seed)
    cuts = enumerate_two_cuts(i)
    masks = [c.mask for c in cuts]
    assert len(masks) == len(set(masks))
    assert len(cuts) == sum(comb(len(c), 2) for c in i.cactus.cycles)
    assert all(not c.mask >> i.root & 1 and c.mask for c in cuts)
    assert set(masks) == cut_masks_by_subsets(i)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_verifiers_agree(seed, subset_seed):
    i = gen_random(ANY, seed)
    rng = random.Random(subset_seed)
    ids = [k for k in range(len(i.links)) if rng.random() < 0.6]
    verdict = is_feasible(i, ids)
    assert verdict == three_edge_connected_with(i, ids) == feasible_by_definition(i, ids)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_classification_partition(seed):
    i = gen_random(ANY, seed)
    for l, kind in zip(i.links, i.link_kinds):
        assert kind in (LinkKind.IN, LinkKind.CROSS)
        if i.root in l.endpoints:
            assert kind is LinkKind.CROSS


def test_solution_counts_agree_with_classification():
    i = gen_fig3(6)
    sol = check_solution(i, fig3_optimum(6))
    assert sol.in_count + sol.cross_count == sol.size
    assert sol.cross_count == sum(1 for k in sol.link_ids if i.link_kinds[k] is LinkKind.CROSS)
