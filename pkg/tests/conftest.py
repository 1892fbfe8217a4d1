import itertools
import random

import pytest
from hypothesis import settings

from hyperham.core import Hypergraph

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def complete(n: int, k: int) -> Hypergraph:
    return Hypergraph(n, k, frozenset(itertools.combinations(range(n), k)))


def random_graph(n: int, k: int, p: float, seed: int) -> Hypergraph:
    rng = random.Random(seed)
    return Hypergraph(n, k, frozenset(e for e in itertools.combinations(range(n), k) if rng.random() < p))


@pytest.fixture
def k6():
    return complete(6, 3)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
