from __future__ import annotations

from pathlib import Path

import pytest

from kgreedy import Topology

DATA = Path(__file__).resolve().parent.parent / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"

# Prices chosen so the distributed run reproduces the two published state tables.
EXAMPLE1 = {(1, 2): 10, (2, 3): 4, (3, 4): 7, (4, 5): 6, (5, 6): 5, (6, 7): 3}
EXAMPLE2 = {(1, 2): 8, (2, 3): 3, (3, 4): 5, (4, 5): 10, (5, 6): 4, (6, 7): 2}


def line(prices: dict, k: int = 2, n: int | None = None) -> Topology:
    nodes = range(1, (n or len(prices) + 1) + 1)
    return Topology.from_triples(k, [(a, b, p) for (a, b), p in prices.items()], nodes)


def line7(k: int = 2) -> Topology:
    return line({(i, i + 1): 1 for i in range(1, 7)}, k)


@pytest.fixture
def ex1() -> Topology:
    return line(EXAMPLE1)


@pytest.fixture
def ex2() -> Topology:
    return line(EXAMPLE2)


_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for text in _acceptance_lines:
            terminalreporter.write_line(text)
