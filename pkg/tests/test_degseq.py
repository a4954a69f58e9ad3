import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from degproc.degseq import (
    DegreeSequence,
    DegreeSequenceError,
    as_sequence,
    degree_counts,
    in_window,
    is_graphic,
    parse_degrees,
    small_edge_mean,
)

degree_lists = st.lists(st.integers(1, 7), min_size=1, max_size=30)


def test_degree_counts_examples():
    assert degree_counts((2, 2, 2, 2)) == {2: 4}
    assert degree_counts((2, 2, 2, 2, 2, 3, 3, 4)) == {2: 5, 3: 2, 4: 1}
    assert degree_counts((1, 1)) == {1: 2}


@given(degree_lists)
def test_counts_sum_to_n_and_degree_sum(degs):
    c = degree_counts(degs)
    assert sum(c.values()) == len(degs)
    assert sum(j * nj for j, nj in c.items()) == sum(degs)


def test_is_graphic_examples():
    assert is_graphic((2, 2, 2, 2))
    assert not is_graphic((1, 1, 1))
    assert not is_graphic((3, 3, 1, 1))


def _realizable_sequences(n):
    """Sorted degree vectors of every simple graph on n labelled vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    inc = np.zeros((len(pairs), n), dtype=np.int64)
    for i, (u, v) in enumerate(pairs):
        inc[i, u] = inc[i, v] = 1
    seen = set()
    total = 1 << len(pairs)
    chunk = 1 << 16
    for start in range(0, total, chunk):
        masks = np.arange(start, min(total, start + chunk), dtype=np.int64)
        bits = (masks[:, None] >> np.arange(len(pairs))) & 1
        degs = np.sort(bits @ inc, axis=1)
        seen.update(map(tuple, np.unique(degs, axis=0)))
    return seen


@pytest.mark.parametrize("n", range(1, 8))
def test_is_graphic_matches_exhaustive_search(n):
    real = _realizable_sequences(n)
    for d in itertools.combinations_with_replacement(range(n), n):
        assert is_graphic(d) == (d in real), d


def test_small_edge_mean_examples():
    assert small_edge_mean((2, 2, 2, 2, 2, 3, 3, 4), 2) == Fraction(5, 2)
    with pytest.raises(DegreeSequenceError):
        small_edge_mean((1, 1), 1)


def test_small_edge_mean_half_one_half_seven_scales_like_n_over_32():
    for n in (100, 1000, 10_000):
        d = DegreeSequence.from_counts({1: n // 2, 7: n // 2})
        assert small_edge_mean(d, 1) / n == Fraction(1, 32)


@given(degree_lists.filter(lambda d: sum(d) % 2 == 0 and max(d) > 1), st.integers(1, 6))
def test_small_edge_mean_at_most_edge_count(degs, k):
    d = DegreeSequence(tuple(degs))
    if k >= d.max_degree:
        return
    assert small_edge_mean(d, k) <= d.m


def test_window_examples():
    assert in_window(DegreeSequence.from_counts({1: 50, 7: 50}), 1, Fraction(1, 4))
    assert not in_window(DegreeSequence.from_counts({2: 100}), 1, Fraction(1, 10))
    assert in_window((2, 2, 2, 2, 2, 3, 3, 4), 2, Fraction(1, 4))


def test_parse_degrees_forms():
    assert parse_degrees("1:2 3").degrees == (1, 1, 3)
    assert parse_degrees("2 2 2 2").m == 4
    with pytest.raises(DegreeSequenceError):
        parse_degrees("0 2")
    assert parse_degrees("0 2 2", allow_zero=True).degrees == (0, 2, 2)
    with pytest.raises(DegreeSequenceError):
        parse_degrees("")


def test_mapping_input_is_degree_counts():
    d = as_sequence({7: 2, 1: 3})
    assert sorted(d.degrees) == [1, 1, 1, 7, 7]
    assert degree_counts(d) == {1: 3, 7: 2}
