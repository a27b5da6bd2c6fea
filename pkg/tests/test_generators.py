from __future__ import annotations

import logging

import pytest
from hypothesis import given, settings, strategies as st

from cacaug.cactus import is_feasible, is_leaf_to_leaf, is_leaf_to_leaf_plus, k_wideness
from cacaug.completion import naive_completion
from cacaug.errors import GenerationFailed
from cacaug.exact import brute_force_opt
from cacaug.generators import RandomProfile, fig3_optimum, fig3_tap, gen_fig3, gen_random, gen_random_tap
from cacaug.transforms import tap_to_cacap

log = logging.getLogger(__name__)


def test_tower_shape():
    tap = fig3_tap(6)
    i = gen_fig3(6)
    assert len(tap.edges) == 23 and len(i.cactus.cycles) == 23
    assert len(i.leaves) == 12 and len(i.links) == 11
    assert is_leaf_to_leaf(i)
    assert is_feasible(i, fig3_optimum(6)) and len(fig3_optimum(6)) == 7


def test_tower_smallest_member():
    i = gen_fig3(2)
    assert is_leaf_to_leaf(i) and brute_force_opt(i).opt_value == 3
    with pytest.raises(ValueError):
        fig3_tap(1)


def test_tower_naive_ratio_trend():
    ratios = []
    for m in (2, 4, 6, 8, 10):
        i = gen_fig3(m)
        ratios.append(naive_completion(i).size / brute_force_opt(i).opt_value)
    log.info("naive completion / OPT on the tower family, m = 2..10: %s", [round(r, 3) for r in ratios])
    assert ratios == sorted(ratios) and ratios[-1] > 1.7


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["leaf_to_leaf", "leaf_to_leaf_plus", "any"]))
def test_seed_determinism(seed, endpoints):
    p = RandomProfile(endpoints=endpoints)
    a, b = gen_random(p, seed), gen_random(p, seed)
    assert a.cactus == b.cactus and a.links == b.links
    assert gen_random_tap(p, seed) == gen_random_tap(p, seed)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6))
def test_profile_predicates(seed, k):
    for endpoints, pred in (("leaf_to_leaf", is_leaf_to_leaf), ("leaf_to_leaf_plus", is_leaf_to_leaf_plus)):
        p = RandomProfile(n_range=(3, 12), k_cap=k, link_count=(1, 9), endpoints=endpoints)
        i = gen_random(p, seed)
        assert k_wideness(i) <= k
        assert pred(i)
        assert is_feasible(i, range(len(i.links)))
        assert len(i.links) <= 9


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_random_tap_is_feasible_leaf_to_leaf(seed):
    i = tap_to_cacap(gen_random_tap(RandomProfile(), seed))
    assert is_leaf_to_leaf(i) and is_feasible(i, range(len(i.links)))


def test_impossible_profile_fails():
    with pytest.raises(GenerationFailed):
        gen_random(RandomProfile(n_range=(10, 12), k_cap=1, retries=20), 0)
