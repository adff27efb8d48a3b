import itertools
import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from c5extremal.graph import SmallGraph

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=1, max_n=10):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.integers(0, (1 << len(pairs)) - 1)) if pairs else 0
    edges = [p for k, p in enumerate(pairs) if mask >> k & 1]
    return SmallGraph.from_edges(n, edges)


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> SmallGraph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return SmallGraph.from_edges(n, edges)


def brute_c5(g: SmallGraph) -> int:
    """Induced 5-cycles by checking every 5-subset: 2-regular and connected."""
    total = 0
    for s in itertools.combinations(range(g.n), 5):
        deg = [sum(g.has_edge(u, v) for v in s if v != u) for u in s]
        if any(d != 2 for d in deg):
            continue
        # the only 2-regular simple graph on five vertices is C5
        total += 1
    return total


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
