"""Deterministic synchronous simulator for the distributed greedy protocol."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from .protocol import (
    LEGAL_TRANSITIONS,
    CheckRule,
    LinkState,
    Message,
    MessageKind,
    NodeState,
    decide_tl,
    decide_tm,
    decide_tt,
    emit_marked,
    emit_price,
)
from .topology import Link, Topology, _interferes, precedes, rank_key


class RoundCapExceeded(RuntimeError):
    """The run did not terminate within the safety cap; a protocol bug."""


class SlotPhase(enum.Enum):
    SEND_LINK_PRICES = "L"
    SEND_MARKED_LINK = "M"
    SEND_STATUS = "T"

    def boundary(self, round_no: int) -> str:
        return f"T{round_no}_{self.value}"


@dataclass(frozen=True)
class Trace:
    links: tuple[Link, ...]
    rows: tuple[tuple[str, tuple[LinkState, ...]], ...]

    def row(self, label: str) -> tuple[LinkState, ...]:
        for name, cells in self.rows:
            if name == label:
                return cells
        raise KeyError(label)

    def round_starts(self) -> list[tuple[int, dict[Link, LinkState]]]:
        """Snapshots before each round: row 0, then each T{m}_M row."""
        out = []
        m = 1
        for name, cells in self.rows:
            if name == "0" or name.endswith("_M"):
                out.append((m, dict(zip(self.links, cells))))
                m += 1
        return out


@dataclass(frozen=True)
class RunConfig:
    check_rule: CheckRule = CheckRule.INTERFERING
    record_trace: bool = True
    round_cap: Optional[int] = None


@dataclass(frozen=True)
class RunResult:
    schedule: frozenset[Link]
    trace: Optional[Trace]
    rounds: int
    messages_sent: int
    round_bound: int
    terminated_at: dict[int, int] = field(compare=False, default_factory=dict)
    final_states: dict[Link, LinkState] = field(compare=False, default_factory=dict)

    @property
    def ordered_schedule(self) -> list[Link]:
        return sorted(self.schedule, key=rank_key)


def _flood(t: Topology, emissions: Iterable[Message]) -> tuple[dict[int, dict], int]:
    """TTL-bounded hop-by-hop flooding. Returns deliveries and broadcast count."""
    delivered: dict[int, dict] = {n: {} for n in t.nodes}
    sent = 0
    done: set = set()
    for msg in emissions:
        if msg.key in done:
            continue
        done.add(msg.key)
        seen = {msg.origin}
        frontier = [msg.origin]
        ttl = msg.ttl
        while frontier and ttl > 0:
            sent += len(frontier)
            ttl -= 1
            nxt = []
            for u in frontier:
                for v in t.adjacency[u]:
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
                        delivered[v][msg.key] = Message(
                            msg.kind, msg.origin, msg.round, ttl, msg.link, msg.seq
                        )
            frontier = nxt
    return delivered, sent


def flood(t: Topology, emissions: Iterable[Message]) -> dict[int, set[Message]]:
    """Deliver each message to every node within its hop budget, once."""
    delivered, _ = _flood(t, emissions)
    return {n: set(msgs.values()) for n, msgs in delivered.items()}


def _dnt_closure(t: Topology, senders: Iterable[int], round_no: int = 0) -> tuple[set[int], int]:
    received: set[int] = set()
    sent_by: set[int] = set()
    wave = sorted(set(senders))
    total = 0
    while wave:
        sent_by.update(wave)
        msgs = [Message(MessageKind.DNT, n, round_no, t.k + 1) for n in wave]
        delivered, sent = _flood(t, msgs)
        total += sent
        for n, got in delivered.items():
            if got:
                received.add(n)
        wave = sorted(received - sent_by)
    return received, total


def dnt_fixpoint(t: Topology, initial_senders: Iterable[int]) -> set[int]:
    """Nodes, other than the initial senders, that hear a DNT once every
    receiver re-originates it. Initial senders stay active on their own."""
    initial = set(initial_senders)
    received, _ = _dnt_closure(t, initial)
    return received - initial


def round_bound(t: Topology) -> int:
    return math.ceil(len(t.links) / t.k)


def run(t: Topology, config: RunConfig = RunConfig()) -> RunResult:
    """Simulate the protocol on ``t`` until every node has terminated."""
    k = t.k
    cap = config.round_cap if config.round_cap is not None else 4 * len(t.links) + 4
    nodes = {n: NodeState.initial(n, t.links) for n in t.nodes}
    rows: list[tuple[str, tuple[LinkState, ...]]] = []

    def snapshot(label: str) -> None:
        if not config.record_trace:
            return
        states: dict[Link, LinkState] = {}
        for ns in nodes.values():
            states.update(ns.attached)
        rows.append((label, tuple(states[l] for l in t.links)))

    snapshot("0")
    sent_total = 0
    terminated_at: dict[int, int] = {}
    m = 0
    while m == 0 or len(terminated_at) < len(nodes):
        m += 1
        if m > cap:
            raise RoundCapExceeded(f"no termination after {cap} rounds")
        active = [n for n in t.nodes if not nodes[n].terminated]

        # link-price slot
        out = [msg for n in active if (msg := emit_price(nodes[n], k)) is not None]
        delivered, sent = _flood(t, out)
        sent_total += sent
        for n in active:
            prices = frozenset(msg.link for msg in delivered[n].values())
            nodes[n] = decide_tl(replace(nodes[n], inbox_prices=prices), t, config.check_rule)
        snapshot(SlotPhase.SEND_LINK_PRICES.boundary(m))

        # marked slot
        out = [msg for n in active for msg in emit_marked(nodes[n], k)]
        delivered, sent = _flood(t, out)
        sent_total += sent
        for n in active:
            marked = frozenset(msg.link for msg in delivered[n].values())
            nodes[n] = decide_tm(replace(nodes[n], inbox_marked=marked), t)
        snapshot(SlotPhase.SEND_MARKED_LINK.boundary(m))

        # status slot
        senders = [n for n in active if not nodes[n].settled]
        heard, sent = _dnt_closure(t, senders, m)
        sent_total += sent
        for n in active:
            nodes[n] = decide_tt(replace(nodes[n], dnt_received=n in heard))
            if nodes[n].terminated:
                terminated_at[n] = m

    final: dict[Link, LinkState] = {}
    for ns in nodes.values():
        final.update(ns.attached)
    final = {l: final[l] for l in t.links}
    schedule = frozenset(l for l, s in final.items() if s is LinkState.MARKED)
    trace = Trace(t.links, tuple(rows)) if config.record_trace else None
    return RunResult(schedule, trace, m, sent_total, round_bound(t), terminated_at, final)


@dataclass(frozen=True)
class Violation:
    check: str
    round: int
    link: Optional[Link]
    detail: str

    def __str__(self) -> str:
        where = f" at {self.link}" if self.link is not None else ""
        return f"{self.check} round {self.round}{where}: {self.detail}"


@dataclass
class LemmaReport:
    violations: list[Violation] = field(default_factory=list)
    snapshots_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


def check_lemma_invariants(result: RunResult, t: Topology) -> LemmaReport:
    """Check the round-boundary invariants behind the correctness argument.

    L2: every CLOSED link has a MARKED link at distance < K.
    L3: every CHECK link is outranked by some OPEN link.
    L4: the best link that is neither CLOSED nor MARKED is OPEN.
    L1: between consecutive round starts with pending links, MARKED grows
        strictly, CLOSED does not shrink and OPEN+CHECK shrinks strictly.
    Also row 0 must be all OPEN and consecutive rows may differ only by
    legal transitions.
    """
    if result.trace is None:
        raise ValueError("run was made without a trace")
    report = LemmaReport()
    trace = result.trace
    bad = report.violations

    if trace.rows and any(s is not LinkState.OPEN for s in trace.rows[0][1]):
        bad.append(Violation("initial", 0, None, "row 0 is not all OPEN"))
    for (prev_label, prev), (label, cur) in zip(trace.rows, trace.rows[1:]):
        for link, a, b in zip(trace.links, prev, cur):
            if a is not b and (a, b) not in LEGAL_TRANSITIONS:
                bad.append(Violation("transition", 0, link, f"{a}->{b} between {prev_label} and {label}"))

    starts = trace.round_starts()
    for m, states in starts:
        report.snapshots_checked += 1
        marked = [l for l, s in states.items() if s is LinkState.MARKED]
        opened = [l for l, s in states.items() if s is LinkState.OPEN]
        for l, s in states.items():
            if s is LinkState.CLOSED and not any(_interferes(t, l, j) for j in marked):
                bad.append(Violation("L2", m, l, "CLOSED without a MARKED link within K"))
            if s is LinkState.CHECK and not any(precedes(j, l) for j in opened):
                bad.append(Violation("L3", m, l, "CHECK without a higher-ranked OPEN link"))
        pending = sorted((l for l, s in states.items() if s in (LinkState.OPEN, LinkState.CHECK)), key=rank_key)
        if pending and states[pending[0]] is not LinkState.OPEN:
            bad.append(Violation("L4", m, pending[0], "best pending link is not OPEN"))

    def of(states, *kinds):
        return {l for l, s in states.items() if s in kinds}

    for (m, before), (_, after) in zip(starts, starts[1:]):
        if not of(before, LinkState.OPEN, LinkState.CHECK):
            continue
        if not of(before, LinkState.MARKED) < of(after, LinkState.MARKED):
            bad.append(Violation("L1", m, None, "MARKED set did not grow strictly"))
        if not of(before, LinkState.CLOSED) <= of(after, LinkState.CLOSED):
            bad.append(Violation("L1", m, None, "CLOSED set shrank"))
        if not of(after, LinkState.OPEN, LinkState.CHECK) < of(before, LinkState.OPEN, LinkState.CHECK):
            bad.append(Violation("L1", m, None, "OPEN+CHECK did not shrink strictly"))
    return report
