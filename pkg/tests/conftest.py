from __future__ import annotations

from itertools import combinations
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from varnet.netbuild import DataNetwork
from varnet.synthgen import complete_graph, node_ids, path_graph, star_graph

DATA = Path(__file__).parent / "data"

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def graph(n: int, edges) -> DataNetwork:
    return DataNetwork.from_edges(node_ids(n), edges)


def triangle_pendant() -> DataNetwork:
    # triangle 0-1-2 with pendant 3 hanging off node 0
    return graph(4, [(0, 1), (0, 2), (1, 2), (0, 3)])


def k4_minus_edge() -> DataNetwork:
    return graph(4, [e for e in combinations(range(4), 2) if e != (2, 3)])


SMALL_GRAPHS = {
    "complete5": lambda: complete_graph(5),
    "star3": lambda: star_graph(3),
    "path3": lambda: path_graph(3),
    "triangle_pendant": triangle_pendant,
    "k4_minus_edge": k4_minus_edge,
}


@st.composite
def networks(draw, min_nodes: int = 1, max_nodes: int = 12, connected: bool = False) -> DataNetwork:
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    edges = set(chosen)
    if connected:
        # a random spanning tree keeps the graph connected
        for v in range(1, n):
            u = draw(st.integers(0, v - 1))
            edges.add((u, v))
    return graph(n, edges)


@pytest.fixture
def fixture_path() -> Path:
    return DATA / "fixture.jsonl"


_ACCEPTANCE: list[tuple[str, str, float]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): exit criterion, reported one line per criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE.append((marker.args[0], report.outcome.upper(), report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome, duration in _ACCEPTANCE:
        verdict = "PASS" if outcome == "PASSED" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {label}  ({duration:.2f}s)")
