"""Centralized greedy scheduler: scan links best-first, keep what fits."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .topology import (
    ZERO,
    Link,
    LinkRef,
    Price,
    Topology,
    _interferes,
    precedes,
)


@dataclass(frozen=True)
class Schedule:
    chosen: frozenset[Link]
    order: tuple[Link, ...]
    total_price: Price


def centralized_greedy(t: Topology) -> Schedule:
    """Return the greedy maximal K-valid matching of ``t``.

    Links are visited in the global tie-break order and a link is accepted
    when it interferes with nothing accepted so far.
    """
    order: list[Link] = []
    for cand in t.ranked:
        if not any(_interferes(t, cand, w) for w in order):
            order.append(cand)
    total = ZERO
    for l in order:
        total = total + l.price
    return Schedule(frozenset(order), tuple(order), total)


def higher_interfering_remaining(
    t: Topology, remaining: Iterable[LinkRef], l: LinkRef
) -> frozenset[Link]:
    """Links of ``remaining`` that interfere with ``l`` and rank above it."""
    pool = {t.resolve(r) for r in remaining}
    l = t.resolve(l)
    if l not in pool:
        raise ValueError(f"{l} is not in the remaining set")
    return frozenset(o for o in pool if o != l and precedes(o, l) and _interferes(t, o, l))
