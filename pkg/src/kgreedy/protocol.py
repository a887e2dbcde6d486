"""Per-node decision logic of the distributed greedy protocol.

Each round has three slots. In the link-price slot a node floods the price of
its best OPEN attached link; in the marked slot it floods its MARKED links; in
the status slot unsettled nodes flood a do-not-terminate (DNT) token. The
decisions taken at the end of each slot are pure functions of a node's own
state and what it heard during that slot.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Iterable, Optional

from .topology import Link, Topology, _interferes, precedes, rank_key


class LinkState(enum.Enum):
    OPEN = "O"
    CHECK = "CH"
    MARKED = "M"
    CLOSED = "CL"

    def __str__(self) -> str:
        return self.value


class MessageKind(enum.Enum):
    PRICE = "PRICE"
    MARKED = "MARKED"
    DNT = "DNT"


class CheckRule(enum.Enum):
    """How an unmarked OPEN link decides to defer into CHECK.

    INTERFERING: defer when any received higher-ranked link interferes.
    LITERAL: defer only when the single best received link interferes.
    """

    INTERFERING = "interfering"
    LITERAL = "literal"


LEGAL_TRANSITIONS = frozenset(
    {
        (LinkState.OPEN, LinkState.CHECK),
        (LinkState.CHECK, LinkState.OPEN),
        (LinkState.OPEN, LinkState.MARKED),
        (LinkState.OPEN, LinkState.CLOSED),
        (LinkState.CHECK, LinkState.CLOSED),
    }
)

_UNSETTLED = (LinkState.OPEN, LinkState.CHECK)


@dataclass(frozen=True)
class Message:
    kind: MessageKind
    origin: int
    round: int
    ttl: int
    link: Optional[Link] = None
    seq: int = 0

    @property
    def key(self) -> tuple[int, int, str, int]:
        """Flood deduplication key: one per originated message."""
        return (self.origin, self.round, self.kind.value, self.seq)


@dataclass(frozen=True)
class NodeState:
    node: int
    attached: dict[Link, LinkState]
    inbox_prices: frozenset[Link] = frozenset()
    inbox_marked: frozenset[Link] = frozenset()
    dnt_received: bool = False
    terminated: bool = False
    round: int = 1

    @classmethod
    def initial(cls, node: int, links: Iterable[Link]) -> NodeState:
        own = sorted((l for l in links if l.src == node), key=rank_key)
        return cls(node, {l: LinkState.OPEN for l in own})

    def links_in(self, state: LinkState) -> list[Link]:
        """Attached links in ``state``, best-ranked first."""
        return [l for l, s in self.attached.items() if s is state]

    @property
    def settled(self) -> bool:
        """No attached link is OPEN or CHECK."""
        return not any(s in _UNSETTLED for s in self.attached.values())


def _best(links: Iterable[Link]) -> Optional[Link]:
    return min(links, key=rank_key, default=None)


def emit_price(ns: NodeState, k: int) -> Optional[Message]:
    best = _best(ns.links_in(LinkState.OPEN))
    if best is None:
        return None
    return Message(MessageKind.PRICE, ns.node, ns.round, k + 1, link=best)


def decide_tl(ns: NodeState, t: Topology, check_rule: CheckRule = CheckRule.INTERFERING) -> NodeState:
    """Decision at the end of the link-price slot."""
    for l in ns.inbox_prices:
        t.resolve(l)
    open_links = ns.links_in(LinkState.OPEN)
    if not open_links:
        return replace(ns, inbox_prices=frozenset())
    states = dict(ns.attached)
    own_best = open_links[0]
    rival = _best(ns.inbox_prices)
    if rival is None or precedes(own_best, rival):
        for l in open_links:
            states[l] = LinkState.MARKED if l == own_best else LinkState.CLOSED
    elif check_rule is CheckRule.LITERAL:
        for l in open_links:
            if _interferes(t, l, rival):
                states[l] = LinkState.CHECK
    else:
        for l in open_links:
            if any(precedes(r, l) and _interferes(t, r, l) for r in ns.inbox_prices):
                states[l] = LinkState.CHECK
    return replace(ns, attached=states, inbox_prices=frozenset())


def emit_marked(ns: NodeState, k: int) -> list[Message]:
    """One announcement per MARKED attached link, repeated every round."""
    return [
        Message(MessageKind.MARKED, ns.node, ns.round, k + 1, link=l, seq=i)
        for i, l in enumerate(ns.links_in(LinkState.MARKED))
    ]


def decide_tm(ns: NodeState, t: Topology) -> NodeState:
    """Decision at the end of the marked slot.

    CHECK links near a MARKED link close; the best surviving CHECK link
    reopens. The node's own MARKED links count alongside received ones.
    """
    for l in ns.inbox_marked:
        t.resolve(l)
    states = dict(ns.attached)
    known_marked = list(ns.inbox_marked) + ns.links_in(LinkState.MARKED)
    survivors = []
    for l in ns.links_in(LinkState.CHECK):
        if any(_interferes(t, l, m) for m in known_marked):
            states[l] = LinkState.CLOSED
        else:
            survivors.append(l)
    if survivors:
        states[survivors[0]] = LinkState.OPEN
    return replace(ns, attached=states, inbox_marked=frozenset())


def emit_dnt(ns: NodeState, k: int) -> Optional[Message]:
    if ns.settled and not ns.dnt_received:
        return None
    return Message(MessageKind.DNT, ns.node, ns.round, k + 1)


def decide_tt(ns: NodeState) -> NodeState:
    """Terminate when nothing is pending here and no DNT arrived."""
    if not ns.dnt_received and ns.settled:
        return replace(ns, terminated=True, dnt_received=False)
    return replace(ns, dnt_received=False, round=ns.round + 1)
