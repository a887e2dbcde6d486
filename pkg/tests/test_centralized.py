from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import EXAMPLE1, EXAMPLE2, line
from kgreedy import (
    Price,
    Topology,
    centralized_greedy,
    higher_interfering_remaining,
    interference_set,
    is_k_valid_matching,
    is_maximal,
)
from test_topology import topologies


def keys(links):
    return {l.key for l in links}


def test_example1():
    s = centralized_greedy(line(EXAMPLE1))
    assert keys(s.chosen) == {(1, 2), (4, 5)}
    assert s.total_price == Price.parse(16)
    assert [l.key for l in s.order] == [(1, 2), (4, 5)]


def test_example2():
    s = centralized_greedy(line(EXAMPLE2))
    assert [l.key for l in s.order] == [(4, 5), (1, 2)]
    assert s.total_price == Price.parse(18)


def test_single_link_and_empty():
    assert keys(centralized_greedy(Topology.from_triples(2, [(3, 4, 1)])).chosen) == {(3, 4)}
    empty = centralized_greedy(Topology([], 2))
    assert empty.chosen == frozenset() and empty.total_price == Price(0)


def test_ties_broken_by_pair():
    t = Topology.from_triples(1, [(2, 3, 5), (1, 2, 5)])
    assert keys(centralized_greedy(t).chosen) == {(1, 2)}


class TestHigherInterfering:
    def test_global_max(self, ex1):
        assert higher_interfering_remaining(ex1, ex1.links, (1, 2)) == frozenset()

    def test_example1_45(self, ex1):
        assert keys(higher_interfering_remaining(ex1, ex1.links, (4, 5))) == {(3, 4)}

    def test_singleton(self, ex2):
        assert higher_interfering_remaining(ex2, [(1, 2)], (1, 2)) == frozenset()

    def test_not_in_remaining(self, ex1):
        with pytest.raises(ValueError):
            higher_interfering_remaining(ex1, [(2, 3)], (1, 2))


@given(topologies())
def test_output_is_maximal_valid_and_ordered(t):
    s = centralized_greedy(t)
    assert is_k_valid_matching(t, s.chosen)
    assert is_maximal(t, s.chosen)
    assert list(s.order) == [l for l in t.ranked if l in s.chosen]
    if t.links:
        assert s.order[0] == t.ranked[0]


@given(topologies(), st.integers(2, 50))
def test_scale_invariance(t, factor):
    scaled = t.with_prices({l.key: l.price * factor for l in t.links})
    assert keys(centralized_greedy(t).chosen) == keys(centralized_greedy(scaled).chosen)


@given(topologies())
def test_remaining_set_recursion(t):
    # Each chosen link has no higher interfering link left once its
    # predecessors and everything they interfere with are removed.
    remaining = set(t.links)
    for chosen in centralized_greedy(t).order:
        assert chosen in remaining
        assert higher_interfering_remaining(t, remaining, chosen) == frozenset()
        remaining -= interference_set(t, chosen)
    assert remaining == set()
