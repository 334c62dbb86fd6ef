"""
Seeded random host graphs for property tests
"""
import numpy as np

from src.models.kernel import stream
from src.utils.graph_utils import Graph


def random_graph(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi graph from a seeded stream"""
    rng = stream(seed, 999)
    upper = np.triu(rng.random((n, n)) < p, k=1)
    rows, cols = np.nonzero(upper)
    return Graph.from_edges(n, zip(rows.tolist(), cols.tolist()))
