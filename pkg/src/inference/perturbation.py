"""
Triadic-closure perturbation used as the alternative in power experiments
"""
import logging
from typing import Dict, List, Tuple

import numpy as np

from ..models.kernel import stream
from ..utils.graph_utils import Graph

logger = logging.getLogger(__name__)

_SELECT_TAG = 21
_CLOSE_TAG = 22


def triadic_closure(graph: Graph, seed: int, vertex_fraction: float = 0.05,
                    closure_probability: float = 0.05) -> Tuple[Graph, Dict]:
    """
    Close open 2-paths centered at a random subset of vertices

    ceil(vertex_fraction * n) vertices are drawn without replacement. For each
    selected vertex, in increasing id order, every pair of its neighbors that
    is non-adjacent in the input graph is joined independently with
    ``closure_probability``. Pairs closed from two centers are added once.

    Returns:
        (perturbed graph, info dict with selected vertices and added edges)
    """
    count = int(np.ceil(vertex_fraction * graph.n)) if graph.n else 0
    selected = np.sort(stream(seed, _SELECT_TAG).choice(graph.n, size=count, replace=False))
    added = set()
    for v in selected.tolist():
        neighbors = graph.neighbors(v)
        open_pairs: List[Tuple[int, int]] = [
            (a, b) for idx, a in enumerate(neighbors) for b in neighbors[idx + 1:]
            if not graph.has_edge(a, b)
        ]
        if not open_pairs:
            continue
        draws = stream(seed, _CLOSE_TAG, v).random(len(open_pairs))
        added.update(pair for pair, u in zip(open_pairs, draws) if u < closure_probability)
    added_edges = sorted(added)
    logger.debug("triadic closure: %d vertices selected, %d edges added", len(selected), len(added_edges))
    return graph.with_edges(added_edges), {
        'selected': selected.tolist(),
        'added_edges': [list(e) for e in added_edges],
    }
