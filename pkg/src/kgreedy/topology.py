"""Network graph with exact hop distances and K-hop interference queries.

Data links are directed, but every distance is measured on the undirected
support graph: control messages may travel against the direction of a link.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import ClassVar, Iterable, Union

UNREACHABLE = math.inf

_PRICE_RE = re.compile(r"^\d+(\.\d+)?$")


class TopologyError(ValueError):
    """Invalid topology construction."""


class UnknownNodeError(KeyError):
    pass


class UnknownLinkError(KeyError):
    pass


@dataclass(frozen=True, order=True)
class Price:
    """Exact decimal with at most six fractional digits, stored scaled."""

    scaled: int
    SCALE: ClassVar[int] = 10**6
    DIGITS: ClassVar[int] = 6

    @classmethod
    def parse(cls, value: Union[str, int, Decimal, "Price"]) -> Price:
        if isinstance(value, Price):
            return value
        if isinstance(value, bool):
            raise TypeError("price cannot be a bool")
        if isinstance(value, int):
            return cls(value * cls.SCALE)
        if isinstance(value, str):
            text = value.strip()
            if not _PRICE_RE.match(text):
                raise ValueError(f"malformed price {value!r}")
            value = Decimal(text)
        if not isinstance(value, Decimal):
            raise TypeError(f"unsupported price type {type(value).__name__}")
        try:
            scaled = value.scaleb(cls.DIGITS)
        except InvalidOperation as exc:
            raise ValueError(f"malformed price {value!r}") from exc
        if not scaled.is_finite() or scaled != scaled.to_integral_value():
            raise ValueError(f"price {value} has more than {cls.DIGITS} fractional digits")
        return cls(int(scaled))

    def __add__(self, other: Price) -> Price:
        return Price(self.scaled + other.scaled)

    def __mul__(self, factor: int) -> Price:
        return Price(self.scaled * factor)

    __rmul__ = __mul__

    def as_decimal(self) -> Decimal:
        return Decimal(self.scaled).scaleb(-self.DIGITS)

    def __str__(self) -> str:
        whole, frac = divmod(self.scaled, self.SCALE)
        if frac == 0:
            return str(whole)
        return f"{whole}.{frac:06d}".rstrip("0")


ZERO = Price(0)


@dataclass(frozen=True)
class Link:
    src: int
    dst: int
    price: Price

    @property
    def key(self) -> tuple[int, int]:
        return (self.src, self.dst)

    def __str__(self) -> str:
        return f"({self.src},{self.dst})"


def rank_key(link: Link) -> tuple[int, int, int]:
    """Global tie-break order: higher price first, then smaller (src, dst)."""
    return (-link.price.scaled, link.src, link.dst)


def precedes(a: Link, b: Link) -> bool:
    return rank_key(a) < rank_key(b)


LinkRef = Union[Link, "tuple[int, int]"]
LinkSet = frozenset  # frozenset[Link]


class Topology:
    """Nodes, directed priced links in declaration order, and the parameter K.

    Read-only after construction. Node-to-node distances are computed once by
    breadth-first search from every node.
    """

    def __init__(self, links: Iterable[Link], k: int, nodes: Iterable[int] = ()):
        if isinstance(k, bool) or not isinstance(k, int) or k < 1:
            raise TopologyError(f"K must be an integer >= 1, got {k!r}")
        self.k = k
        node_set: set[int] = set()
        for n in nodes:
            _check_node_id(n)
            node_set.add(n)
        self.links: tuple[Link, ...] = tuple(links)
        self._by_key: dict[tuple[int, int], Link] = {}
        for link in self.links:
            _check_node_id(link.src)
            _check_node_id(link.dst)
            if link.src == link.dst:
                raise TopologyError(f"self-loop {link}")
            if link.key in self._by_key:
                raise TopologyError(f"duplicate link {link}")
            if link.price.scaled <= 0:
                raise TopologyError(f"non-positive price on {link}")
            self._by_key[link.key] = link
            node_set.update(link.key)
        self.nodes: tuple[int, ...] = tuple(sorted(node_set))
        self.ranked: tuple[Link, ...] = tuple(sorted(self.links, key=rank_key))

        self.adjacency: dict[int, tuple[int, ...]] = {}
        nbrs: dict[int, set[int]] = {n: set() for n in self.nodes}
        for link in self.links:
            nbrs[link.src].add(link.dst)
            nbrs[link.dst].add(link.src)
        self.adjacency = {n: tuple(sorted(v)) for n, v in nbrs.items()}
        self._dist = {n: self._bfs(n) for n in self.nodes}

    @classmethod
    def from_triples(cls, k: int, triples: Iterable[tuple], nodes: Iterable[int] = ()) -> Topology:
        """Build from ``(src, dst, price)`` tuples."""
        return cls([Link(s, d, Price.parse(p)) for s, d, p in triples], k, nodes)

    def _bfs(self, start: int) -> dict[int, int]:
        dist = {start: 0}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in self.adjacency[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return dist

    def link(self, src: int, dst: int) -> Link:
        try:
            return self._by_key[(src, dst)]
        except KeyError:
            raise UnknownLinkError((src, dst)) from None

    def resolve(self, ref: LinkRef) -> Link:
        if isinstance(ref, Link):
            found = self._by_key.get(ref.key)
            if found != ref:
                raise UnknownLinkError(ref.key)
            return found
        return self.link(*ref)

    def has_node(self, n: int) -> bool:
        return n in self._dist

    def components(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        out = []
        for n in self.nodes:
            if n not in seen:
                comp = frozenset(self._dist[n])
                seen |= comp
                out.append(comp)
        return out

    def with_prices(self, prices: dict[tuple[int, int], Price]) -> Topology:
        links = [Link(l.src, l.dst, prices.get(l.key, l.price)) for l in self.links]
        return Topology(links, self.k, self.nodes)

    def __len__(self) -> int:
        return len(self.links)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Topology):
            return NotImplemented
        return (self.k, self.nodes, self.links) == (other.k, other.nodes, other.links)

    def __hash__(self) -> int:
        return hash((self.k, self.nodes, self.links))

    def __repr__(self) -> str:
        return f"Topology(k={self.k}, nodes={len(self.nodes)}, links={len(self.links)})"


def _check_node_id(n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise TopologyError(f"node id must be a positive integer, got {n!r}")


def node_distance(t: Topology, a: int, b: int) -> float:
    """Hop count between two nodes, or ``UNREACHABLE``."""
    for n in (a, b):
        if not t.has_node(n):
            raise UnknownNodeError(n)
    return t._dist[a].get(b, UNREACHABLE)


def link_distance(t: Topology, l1: LinkRef, l2: LinkRef) -> float:
    """Minimum node distance over the four endpoint pairs of two links."""
    a, b = t.resolve(l1), t.resolve(l2)
    return _link_distance(t, a, b)


def _link_distance(t: Topology, a: Link, b: Link) -> float:
    da, db = t._dist[a.src], t._dist[a.dst]
    return min(
        da.get(b.src, UNREACHABLE),
        da.get(b.dst, UNREACHABLE),
        db.get(b.src, UNREACHABLE),
        db.get(b.dst, UNREACHABLE),
    )


def interferes(t: Topology, l1: LinkRef, l2: LinkRef) -> bool:
    return link_distance(t, l1, l2) < t.k


def _interferes(t: Topology, a: Link, b: Link) -> bool:
    return _link_distance(t, a, b) < t.k


def is_k_valid_matching(t: Topology, s: Iterable[LinkRef]) -> bool:
    links = [t.resolve(r) for r in s]
    for i, a in enumerate(links):
        for b in links[i + 1:]:
            if a != b and _interferes(t, a, b):
                return False
    return True


def is_maximal(t: Topology, s: Iterable[LinkRef]) -> bool:
    """True when no link outside ``s`` can join it without interference.

    Raises ValueError if ``s`` is not itself a K-valid matching.
    """
    chosen = {t.resolve(r) for r in s}
    if not is_k_valid_matching(t, chosen):
        raise ValueError("link set is not a K-valid matching")
    for cand in t.links:
        if cand in chosen:
            continue
        if not any(_interferes(t, cand, c) for c in chosen):
            return False
    return True


def interference_set(t: Topology, y: LinkRef) -> frozenset[Link]:
    """All links within link distance < K of ``y``, ``y`` included."""
    y = t.resolve(y)
    return frozenset(l for l in t.links if _interferes(t, l, y))


def neighborhood(t: Topology, n: int, radius: int) -> frozenset[int]:
    if not t.has_node(n):
        raise UnknownNodeError(n)
    if radius < 0:
        raise ValueError("radius must be non-negative")
    return frozenset(m for m, d in t._dist[n].items() if 0 < d <= radius)
