"""Exact optimum by branch and bound, seeded instance generators."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .centralized import Schedule, centralized_greedy
from .topology import ZERO, Link, Price, Topology, _interferes, is_maximal

BRUTE_FORCE_CAP = 20


class InstanceTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class OptimalResult:
    best: frozenset[Link]
    best_weight: Price
    explored: int


def _conflict_masks(t: Topology, links: tuple[Link, ...]) -> list[int]:
    masks = []
    for i, a in enumerate(links):
        m = 0
        for j, b in enumerate(links):
            if i != j and _interferes(t, a, b):
                m |= 1 << j
        masks.append(m)
    return masks


def _check_cap(t: Topology, cap: int) -> None:
    if len(t.links) > cap:
        raise InstanceTooLarge(f"{len(t.links)} links exceeds the cap of {cap}")


def brute_force_optimal(t: Topology, cap: int = BRUTE_FORCE_CAP) -> OptimalResult:
    """Maximum-weight K-valid matching.

    Depth-first include/exclude search over links in tie-break order, pruned
    when the current weight plus every remaining price cannot beat the best.
    """
    _check_cap(t, cap)
    links = t.ranked
    n = len(links)
    prices = [l.price.scaled for l in links]
    conflicts = _conflict_masks(t, links)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + prices[i]

    best_w = -1
    best_mask = 0
    explored = 0

    def search(i: int, mask: int, weight: int) -> None:
        nonlocal best_w, best_mask, explored
        explored += 1
        if weight + suffix[i] <= best_w:
            return
        if i == n:
            best_w, best_mask = weight, mask
            return
        if not conflicts[i] & mask:
            search(i + 1, mask | (1 << i), weight + prices[i])
        search(i + 1, mask, weight)

    search(0, 0, 0)
    # weights are positive, so an optimum is already maximal; extend anyway
    for i in range(n):
        if not best_mask >> i & 1 and not conflicts[i] & best_mask:
            best_mask |= 1 << i
            best_w += prices[i]
    best = frozenset(links[i] for i in range(n) if best_mask >> i & 1)
    return OptimalResult(best, Price(max(best_w, 0)), explored)


def naive_optimal(t: Topology, cap: int = 12) -> tuple[frozenset[Link], Price]:
    """Enumerate every subset; the check for ``brute_force_optimal``."""
    _check_cap(t, cap)
    links = t.links
    best: frozenset[Link] = frozenset()
    best_w = 0
    for r in range(1, len(links) + 1):
        for combo in combinations(links, r):
            if any(_interferes(t, a, b) for a, b in combinations(combo, 2)):
                continue
            w = sum(l.price.scaled for l in combo)
            if w > best_w:
                best, best_w = frozenset(combo), w
    return best, Price(best_w)


class Family(enum.Enum):
    LINE = "line"
    RING = "ring"
    GRID = "grid"
    RANDOM = "random"


@dataclass(frozen=True)
class GenSpec:
    """Recipe for a reproducible topology.

    ``n`` is the node count for LINE, RING and RANDOM; GRID uses ``rows`` and
    ``cols``. Prices are drawn uniformly from ``[price_lo, price_hi]`` at
    six-digit resolution and made distinct, unless ``ties`` is set, in which
    case whole-number prices are drawn so that repeats are common.
    """

    family: Family
    n: int = 0
    rows: int = 0
    cols: int = 0
    p: float = 0.3
    seed: int = 0
    k: int = 2
    price_lo: int = 1
    price_hi: int = 100
    ties: bool = False


def _pairs(spec: GenSpec, rng: random.Random) -> tuple[list[int], list[tuple[int, int]]]:
    fam = spec.family
    if fam is Family.GRID:
        if spec.rows < 1 or spec.cols < 1 or spec.rows * spec.cols < 2:
            raise ValueError("grid needs rows, cols >= 1 and at least 2 nodes")
        r, c = spec.rows, spec.cols
        nodes = list(range(1, r * c + 1))
        pairs = []
        for i in range(r):
            for j in range(c):
                a = i * c + j + 1
                if j + 1 < c:
                    pairs.append((a, a + 1))
                if i + 1 < r:
                    pairs.append((a, a + c))
        return nodes, sorted(pairs)
    n = spec.n
    if n < 2:
        raise ValueError("need at least 2 nodes")
    nodes = list(range(1, n + 1))
    if fam is Family.LINE:
        return nodes, [(i, i + 1) for i in range(1, n)]
    if fam is Family.RING:
        if n < 3:
            raise ValueError("ring needs at least 3 nodes")
        return nodes, [(i, i + 1) for i in range(1, n)] + [(1, n)]
    if not 0.0 <= spec.p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    return nodes, [(i, j) for i in nodes for j in nodes if i < j and rng.random() < spec.p]


def generate(spec: GenSpec) -> Topology:
    if spec.price_lo < 1 or spec.price_hi < spec.price_lo:
        raise ValueError("price range must satisfy 1 <= lo <= hi")
    rng = random.Random(spec.seed)
    nodes, pairs = _pairs(spec, rng)
    if spec.ties:
        prices = [Price.parse(rng.randint(spec.price_lo, spec.price_hi)) for _ in pairs]
    else:
        lo, hi = spec.price_lo * Price.SCALE, spec.price_hi * Price.SCALE
        used: set[int] = set()
        prices = []
        for _ in pairs:
            v = rng.randint(lo, hi)
            while v in used:
                v += 1
            used.add(v)
            prices.append(Price(v))
    return Topology.from_triples(spec.k, [(a, b, p) for (a, b), p in zip(pairs, prices)], nodes)


def random_suite(count: int = 1000, seed: int = 20240501, max_nodes: int = 25) -> list[GenSpec]:
    """Mixed-family instances cycling through K in {1, 2, 3}, half with ties."""
    rng = random.Random(seed)
    fams = list(Family)
    specs = []
    for i in range(count):
        fam = fams[i % len(fams)]
        k = 1 + (i // len(fams)) % 3
        ties = (i // (3 * len(fams))) % 2 == 1
        s = rng.getrandbits(63)
        if fam is Family.GRID:
            rows = rng.randint(1, 5)
            cols = rng.randint(2 if rows == 1 else 1, max_nodes // rows)
            specs.append(GenSpec(fam, rows=rows, cols=cols, seed=s, k=k, ties=ties, price_hi=5 if ties else 100))
        else:
            n = rng.randint(3, max_nodes)
            p = rng.uniform(0.05, 0.5)
            specs.append(GenSpec(fam, n=n, p=p, seed=s, k=k, ties=ties, price_hi=5 if ties else 100))
    return specs


@dataclass(frozen=True)
class ApproximationReport:
    ratio: Fraction
    greedy: Schedule
    optimal: OptimalResult


def approximation_report(t: Topology, cap: int = BRUTE_FORCE_CAP) -> ApproximationReport:
    """Greedy weight over optimal weight; 1 for an instance with no links."""
    opt = brute_force_optimal(t, cap)
    greedy = centralized_greedy(t)
    if greedy.total_price > opt.best_weight:
        raise AssertionError("greedy beat the exact optimum")
    if not is_maximal(t, greedy.chosen):
        raise AssertionError("greedy schedule is not maximal")
    if opt.best_weight == ZERO:
        ratio = Fraction(1)
    else:
        ratio = Fraction(greedy.total_price.scaled, opt.best_weight.scaled)
    return ApproximationReport(ratio, greedy, opt)
