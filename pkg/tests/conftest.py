import time
from contextlib import contextmanager

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from cheegerlab.graphs import build_graph

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE: dict[int, tuple[str, str, float]] = {}


@contextmanager
def criterion(number: int, title: str, limit_s: float | None = None):
    """Record one acceptance criterion; the summary hook prints the table."""
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        if limit_s is not None:
            assert elapsed <= limit_s, f"took {elapsed:.1f}s, limit {limit_s}s"
    except BaseException:
        ACCEPTANCE[number] = (title, "FAIL", time.perf_counter() - start)
        raise
    ACCEPTANCE[number] = (title, "PASS", elapsed)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, status, elapsed = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{status}] criterion {number}: {title} ({elapsed:.1f}s)")


@st.composite
def connected_graphs(draw, min_n=2, max_n=9):
    """Random spanning tree plus random extra edges."""
    n = draw(st.integers(min_n, max_n))
    parents = [draw(st.integers(0, v - 1)) for v in range(1, n)]
    edges = [(v, p) for v, p in zip(range(1, n), parents)]
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    extra = draw(st.lists(st.sampled_from(pairs), max_size=2 * n)) if pairs else []
    return build_graph(n, edges + extra, name=f"hyp{n}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
