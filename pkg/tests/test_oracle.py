from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import EXAMPLE1, EXAMPLE2, line
from kgreedy import (
    Family,
    GenSpec,
    Price,
    Topology,
    approximation_report,
    brute_force_optimal,
    centralized_greedy,
    generate,
    is_k_valid_matching,
    is_maximal,
    naive_optimal,
    random_suite,
)
from kgreedy.oracle import InstanceTooLarge
from test_topology import topologies

NAIVE_CAP = 12  # default cap of naive_optimal


def keys(links):
    return {l.key for l in links}


class TestBruteForce:
    def test_example1(self):
        opt = brute_force_optimal(line(EXAMPLE1))
        assert keys(opt.best) == {(1, 2), (4, 5)} and opt.best_weight == Price.parse(16)

    def test_example2(self):
        opt = brute_force_optimal(line(EXAMPLE2))
        assert keys(opt.best) == {(4, 5), (1, 2)} and opt.best_weight == Price.parse(18)

    def test_empty(self):
        opt = brute_force_optimal(Topology([], 2))
        assert opt.best == frozenset() and opt.best_weight == Price(0)

    def test_cap(self):
        t = Topology.from_triples(1, [(i, i + 1, 1) for i in range(1, 23)])
        with pytest.raises(InstanceTooLarge):
            brute_force_optimal(t)

    def test_beats_greedy_on_k1_line(self):
        t = line({(1, 2): 6, (2, 3): 10, (3, 4): 6}, k=1)
        opt = brute_force_optimal(t)
        assert keys(opt.best) == {(1, 2), (3, 4)} and opt.best_weight == Price.parse(12)

    @settings(max_examples=60)
    @given(topologies(max_links=NAIVE_CAP))
    def test_agrees_with_enumeration(self, t):
        opt = brute_force_optimal(t)
        _, weight = naive_optimal(t)
        assert opt.best_weight == weight
        assert is_k_valid_matching(t, opt.best) and is_maximal(t, opt.best)
        assert sum((l.price for l in opt.best), Price(0)) == opt.best_weight
        assert opt.best_weight >= centralized_greedy(t).total_price


class TestGenerate:
    def test_line(self):
        t = generate(GenSpec(Family.LINE, n=7))
        assert len(t.nodes) == 7 and [l.key for l in t.links] == [(i, i + 1) for i in range(1, 7)]

    def test_ring(self):
        t = generate(GenSpec(Family.RING, n=5))
        assert len(t.links) == 5 and t.links[-1].key == (1, 5)

    def test_grid(self):
        t = generate(GenSpec(Family.GRID, rows=2, cols=2))
        assert len(t.nodes) == 4 and keys(t.links) == {(1, 2), (3, 4), (1, 3), (2, 4)}

    def test_random_p0(self):
        t = generate(GenSpec(Family.RANDOM, n=10, p=0))
        assert len(t.nodes) == 10 and t.links == ()

    def test_random_p1_complete(self):
        assert len(generate(GenSpec(Family.RANDOM, n=6, p=1)).links) == 15

    @pytest.mark.parametrize(
        "spec",
        [GenSpec(Family.LINE, n=1), GenSpec(Family.RANDOM, n=5, p=1.5), GenSpec(Family.RANDOM, n=5, p=-0.1)],
    )
    def test_invalid(self, spec):
        with pytest.raises(ValueError):
            generate(spec)

    def test_deterministic(self):
        spec = GenSpec(Family.RANDOM, n=15, p=0.3, seed=11)
        assert generate(spec) == generate(spec)

    def test_seeds_differ(self):
        a = generate(GenSpec(Family.RANDOM, n=15, p=0.3, seed=1))
        b = generate(GenSpec(Family.RANDOM, n=15, p=0.3, seed=2))
        assert a != b

    def test_distinct_prices(self):
        t = generate(GenSpec(Family.RANDOM, n=20, p=0.5, seed=3, price_hi=2))
        prices = [l.price for l in t.links]
        assert len(set(prices)) == len(prices)

    def test_ties_requested(self):
        t = generate(GenSpec(Family.RANDOM, n=20, p=0.5, seed=3, price_hi=3, ties=True))
        assert len({l.price for l in t.links}) <= 3

    def test_suite_shape(self):
        specs = random_suite(120)
        assert {s.family for s in specs} == set(Family)
        assert {s.k for s in specs} == {1, 2, 3}
        assert {s.ties for s in specs} == {False, True}
        assert all(len(generate(s).nodes) <= 25 for s in specs)


class TestApproximation:
    def test_example1(self):
        assert approximation_report(line(EXAMPLE1)).ratio == 1

    def test_single_link(self):
        assert approximation_report(Topology.from_triples(2, [(1, 2, 3)])).ratio == 1

    def test_k1_line_optimal_greedy(self):
        rep = approximation_report(line({(1, 2): 1, (2, 3): 10, (3, 4): 1}, k=1))
        assert keys(rep.greedy.chosen) == {(2, 3)} == keys(rep.optimal.best)
        assert rep.ratio == 1

    def test_k1_line_gap(self):
        rep = approximation_report(line({(1, 2): 6, (2, 3): 10, (3, 4): 6}, k=1))
        assert keys(rep.greedy.chosen) == {(2, 3)}
        assert keys(rep.optimal.best) == {(1, 2), (3, 4)}
        assert rep.ratio == Fraction(10, 12)
