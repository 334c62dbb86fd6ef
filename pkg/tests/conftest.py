"""
Shared fixtures and the --runslow switch for Monte Carlo checks
"""
import os
import sys

import pytest

# Add parent directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.fixtures.sample_data import counting_example_graph, three_block_kernel
from src.utils.graph_utils import Graph


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run the Monte Carlo checks marked slow")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: Monte Carlo checks, run with --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def counting_graph() -> Graph:
    return counting_example_graph()


@pytest.fixture
def kernel():
    return three_block_kernel()


@pytest.fixture
def two_cliques() -> Graph:
    """Two disjoint K10 on vertices 0-9 and 10-19"""
    edges = [(a + offset, b + offset) for offset in (0, 10)
             for a in range(10) for b in range(a + 1, 10)]
    return Graph.from_edges(20, edges)
