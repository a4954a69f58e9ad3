import itertools
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from degproc.cli import load_switch_pair
from degproc.confgraph import ConfigGraph, from_vertex_edges, small_edge_count
from degproc.process import make_rng, sample_config_graph
from degproc.switching import (
    AnchorError,
    SwitchAnchor,
    anchors_of,
    cluster_key,
    count_lower,
    count_upper,
    enumerate_cluster,
    is_good_cluster,
    is_good_sequence,
    kind_of,
    pattern_injection,
    switch_graph,
    switching_partner,
    unswitch_graph,
    verify_cluster_switch,
    zeta,
)
from degproc.switching.counting import (
    count_lower_bruteforce,
    count_upper_bruteforce,
    good_weight,
    good_weight_bruteforce,
    lower_count_bounds,
)
from degproc.switching.fixtures import random_anchored_instance
from degproc.switching.patterns import (
    PatternError,
    first_count,
    first_words,
    in_first,
    in_second,
    second_count,
    second_words,
)
from degproc.switching.verify import literal_upper_clusters, run_suite

ANCHOR = SwitchAnchor((0, 0), (1, 0), (2, 0), (3, 0))


def small_pair_cluster_graph():
    # A, B degree 1; X, Y degree 2; X's and Y's other points go to pendants P, Q
    d = (1, 1, 2, 2, 1, 1)
    return ConfigGraph(d, [((0, 0), (1, 0)), ((2, 0), (3, 0)), ((2, 1), (4, 0)), ((3, 1), (5, 0))])


# -- switching and clusters -------------------------------------------------------------

def test_switch_and_back_is_identity():
    G = small_pair_cluster_graph()
    H = switch_graph(G, ANCHOR, 1)
    assert kind_of(H, ANCHOR) == "lower"
    assert unswitch_graph(H, ANCHOR, 1) == G
    assert small_edge_count(G, 1) == small_edge_count(H, 1) + 1


def test_anchor_validation():
    G = small_pair_cluster_graph()
    with pytest.raises(AnchorError):
        switch_graph(G, SwitchAnchor((0, 0), (0, 0), (2, 0), (3, 0)))
    with pytest.raises(AnchorError):
        switch_graph(G, ANCHOR, 2)
    with pytest.raises(AnchorError):
        switch_graph(G, SwitchAnchor((0, 0), (1, 0), (2, 1), (3, 1)), 1)


def test_fixture_pair_switch():
    pair = load_switch_pair()
    assert small_edge_count(pair.upper, 2) == small_edge_count(pair.lower, 2) + 1
    assert count_upper(pair.upper, 2) == 16
    assert count_upper_bruteforce(pair.upper, 2) == 16


def test_two_member_cluster():
    C = enumerate_cluster(small_pair_cluster_graph(), ANCHOR, "upper")
    assert len(C) == 2


def test_singleton_cluster():
    G = ConfigGraph((1, 1, 2, 2), [((0, 0), (1, 0)), ((2, 0), (3, 0)), ((2, 1), (3, 1))])
    assert len(enumerate_cluster(G, ANCHOR, "upper")) == 1


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_cluster_is_an_equivalence_class(seed):
    inst = random_anchored_instance(make_rng(seed), 8, 4)
    C = enumerate_cluster(inst.graph, inst.anchor, "upper")
    key = cluster_key(inst.graph, inst.anchor)
    for g in C.sorted_members()[:5]:
        assert cluster_key(g, inst.anchor) == key
        assert enumerate_cluster(g, inst.anchor, "upper").members == C.members


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_partner_is_involutive_bijection(seed):
    inst = random_anchored_instance(make_rng(seed), 8, 4)
    k = max(inst.degrees[0], inst.degrees[1])
    C = enumerate_cluster(inst.graph, inst.anchor, "upper")
    D = switching_partner(C)
    assert len(D) == len(C) and D.kind == "lower"
    assert switching_partner(D).members == C.members
    for g in C.members:
        assert small_edge_count(switch_graph(g, inst.anchor, k), k) == small_edge_count(g, k) - 1


def test_cluster_switch_exhaustive_small():
    for C in literal_upper_clusters(4, 3):
        assert verify_cluster_switch(C)["pass"]


def test_single_graph_ratio_below_one_but_cluster_ratio_not():
    pair = load_switch_pair()
    from degproc.exact import graph_weight
    assert graph_weight(pair.upper) < graph_weight(pair.lower)
    C = enumerate_cluster(pair.upper, pair.anchor, "upper")
    rep = verify_cluster_switch(C)
    assert rep["pass"] and rep["ratio"] >= 1


def test_switch_drift_suite():
    assert list(run_suite("small-edge-drift", count=40, seed=3))[-1]["pass"]


# -- counting ----------------------------------------------------------------------------

degree_lists = st.lists(st.integers(1, 4), min_size=4, max_size=12)


@settings(max_examples=60, deadline=None)
@given(degree_lists, st.integers(0, 2**32 - 1))
def test_cluster_counts_match_literal_counts(degs, seed):
    if sum(degs) % 2 or sum(degs) > 20 or 2 * max(degs) > sum(degs) or max(degs) == min(degs):
        return
    try:
        G = sample_config_graph(degs, seed, max_retries=500)
    except RuntimeError:
        return
    for k in range(min(degs), max(degs)):
        assert count_upper(G, k) == count_upper_bruteforce(G, k)
        L = count_lower(G, k)
        assert L == count_lower_bruteforce(G, k)
        lo, hi = lower_count_bounds(G, k)
        assert lo <= L // 2 <= hi


def test_upper_count_zero_without_small_edges():
    G = from_vertex_edges((1, 3, 3, 1), [(0, 1), (1, 2), (1, 2), (2, 3)])
    assert small_edge_count(G, 1) == 0 and count_upper(G, 1) == 0


# -- good sequences and clusters -----------------------------------------------------------

def test_zeta_value():
    assert zeta(Fraction(1, 2), 2) == Fraction(1, 512)


def test_adjacent_sides_are_never_good():
    d = (2, 2, 3, 3, 2, 2)
    G = ConfigGraph(d, [((0, 0), (1, 0)), ((2, 0), (3, 0)), ((0, 1), (2, 1)), ((1, 1), (4, 0)),
                        ((2, 2), (5, 0)), ((3, 1), (4, 1)), ((3, 2), (5, 1))])
    for order in itertools.permutations(G.pairs):
        assert not is_good_sequence(order, d, ANCHOR, Fraction(1, 100))
    C = enumerate_cluster(G, ANCHOR, "upper")
    if all(any({p.vertex, q.vertex} & {0, 1} and {p.vertex, q.vertex} & {2, 3}
               for p, q in g.pairs if (p, q) not in ANCHOR.upper_edges()) for g in C.members):
        assert not is_good_cluster(C, Fraction(1, 100))


def test_early_saturation_is_good():
    G = small_pair_cluster_graph()
    seq = G.pairs
    ab = ANCHOR.upper_edges()[0]
    order = (ab,) + tuple(e for e in seq if e != ab)
    assert is_good_sequence(order, G.degrees, ANCHOR, Fraction(1, 100))
    late = tuple(e for e in seq if e != ab) + (ab,)
    assert not is_good_sequence(late, G.degrees, ANCHOR, Fraction(1, 100))


def test_singleton_all_good_cluster():
    G = ConfigGraph((1, 1, 2, 2), [((0, 0), (1, 0)), ((2, 0), (3, 0)), ((2, 1), (3, 1))])
    # ab finishes A and B; with a generous cutoff every order is good
    assert is_good_cluster(enumerate_cluster(G, ANCHOR, "upper"), Fraction(0))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([Fraction(1, 10), Fraction(1, 4), Fraction(1, 2)]))
def test_good_weight_dp_matches_permutations(seed, z):
    inst = random_anchored_instance(make_rng(seed), 7, 4)
    assert good_weight(inst.graph, inst.anchor, z) == good_weight_bruteforce(inst.graph, inst.anchor, z)


# -- pattern words -------------------------------------------------------------------------

def test_pattern_counts_example():
    assert len(first_words(6, 3, 5)) == comb(5, 4) == 5
    assert len(second_words(6, 3, 5)) == comb(5, 2) == 10


def test_example_words():
    s1 = "XBXXXXBB"
    assert in_first(s1, 6, 3, 5)
    assert in_second(pattern_injection(6, 3, 5, s1), 6, 3, 5)
    assert in_second("XBXBXBXX", 6, 3, 5)


def test_injection_exhaustive():
    for total in range(3, 13):
        for n_low in range(1, total):
            n_high = total - n_low
            if n_low >= n_high:
                continue
            for t in range(n_high, total):
                src = first_words(t, n_low, n_high)
                assert len(src) == first_count(t, n_low, n_high)
                assert len(second_words(t, n_low, n_high)) == second_count(t, n_low, n_high)
                img = {pattern_injection(t, n_low, n_high, w) for w in src}
                assert len(img) == len(src)
                assert all(in_second(w, t, n_low, n_high) for w in img)


def test_pattern_parameter_errors():
    with pytest.raises(PatternError):
        first_words(3, 3, 3)
    with pytest.raises(PatternError):
        pattern_injection(6, 3, 5, "BBBXXXXX")


def test_anchors_of_respects_split():
    pair = load_switch_pair()
    found = list(anchors_of(pair.upper, "upper", 2))
    assert pair.anchor in found
    assert len(found) == count_upper(pair.upper, 2)
