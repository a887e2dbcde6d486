"""Line-based topology files, TSV traces and JSON run reports."""

from __future__ import annotations

import json
from typing import Optional

from .engine import RunResult, Trace
from .protocol import CheckRule
from .topology import Link, Price, Topology, TopologyError


class ParseError(ValueError):
    def __init__(self, code: str, line: int, message: str):
        super().__init__(f"line {line}: {code}: {message}")
        self.code = code
        self.line = line


def _int_field(text: str, lineno: int, what: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ParseError("MALFORMED", lineno, f"{what} must be an integer, got {text!r}") from None
    return value


def parse_topology(text: str) -> Topology:
    """Parse the topology file format.

    Grammar, one directive per line::

        k <int>                  exactly once
        node <id>                optional, for nodes without links
        link <src> <dst> <price> declaration order is significant

    Blank lines and lines starting with ``#`` are ignored.
    """
    k: Optional[int] = None
    nodes: list[int] = []
    links: list[Link] = []
    seen: set[tuple[int, int]] = set()
    last = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last = lineno
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        head = parts[0]
        if head == "k":
            if len(parts) != 2:
                raise ParseError("MALFORMED", lineno, "expected 'k <int>'")
            if k is not None:
                raise ParseError("DUPLICATE_K", lineno, "k given more than once")
            k = _int_field(parts[1], lineno, "k")
            if k < 1:
                raise ParseError("BAD_K", lineno, "k must be >= 1")
        elif head == "node":
            if len(parts) != 2:
                raise ParseError("MALFORMED", lineno, "expected 'node <id>'")
            n = _int_field(parts[1], lineno, "node id")
            if n < 1:
                raise ParseError("BAD_NODE", lineno, "node ids are positive integers")
            nodes.append(n)
        elif head == "link":
            if len(parts) != 4:
                raise ParseError("MALFORMED", lineno, "expected 'link <src> <dst> <price>'")
            src = _int_field(parts[1], lineno, "src")
            dst = _int_field(parts[2], lineno, "dst")
            if src < 1 or dst < 1:
                raise ParseError("BAD_NODE", lineno, "node ids are positive integers")
            if src == dst:
                raise ParseError("SELF_LOOP", lineno, f"link {src} {dst} is a self-loop")
            if (src, dst) in seen:
                raise ParseError("DUPLICATE_LINK", lineno, f"link {src} {dst} declared twice")
            try:
                price = Price.parse(parts[3])
            except ValueError as exc:
                raise ParseError("BAD_PRICE", lineno, str(exc)) from None
            if price.scaled <= 0:
                raise ParseError("BAD_PRICE", lineno, "price must be positive")
            seen.add((src, dst))
            links.append(Link(src, dst, price))
        else:
            raise ParseError("MALFORMED", lineno, f"unknown directive {head!r}")
    if k is None:
        raise ParseError("MISSING_K", last, "no 'k' line")
    try:
        return Topology(links, k, nodes)
    except TopologyError as exc:
        raise ParseError("INVALID", last, str(exc)) from None


def serialize_topology(t: Topology) -> str:
    lines = [f"k {t.k}"]
    linked = {n for l in t.links for n in l.key}
    lines += [f"node {n}" for n in t.nodes if n not in linked]
    lines += [f"link {l.src} {l.dst} {l.price}" for l in t.links]
    return "\n".join(lines) + "\n"


def format_trace(trace: Trace) -> str:
    header = "\t".join(["T"] + [str(l) for l in trace.links])
    rows = ["\t".join([label] + [s.value for s in cells]) for label, cells in trace.rows]
    return "\n".join([header] + rows) + "\n"


def _link_json(l: Link) -> dict:
    return {"src": l.src, "dst": l.dst, "price": str(l.price)}


def result_to_json(result: RunResult, t: Topology, check_rule: CheckRule = CheckRule.INTERFERING) -> str:
    doc = {
        "k": t.k,
        "check_rule": check_rule.value,
        "schedule": [_link_json(l) for l in result.ordered_schedule],
        "total_price": str(sum((l.price for l in result.schedule), Price(0))),
        "rounds": result.rounds,
        "round_bound": result.round_bound,
        "messages_sent": result.messages_sent,
        "links": [str(l) for l in t.links],
        "trace": None
        if result.trace is None
        else [{"T": label, "states": [s.value for s in cells]} for label, cells in result.trace.rows],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
