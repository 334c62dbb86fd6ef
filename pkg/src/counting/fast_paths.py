"""
Closed-form per-vertex counts for the small motifs used most often
"""
import logging
from typing import Dict, Iterable, Optional, Sequence

import numpy as np
from scipy import sparse

from ..utils.graph_utils import Graph
from ..utils.motif_utils import RootedMotif, canonical_key, get_motif

logger = logging.getLogger(__name__)

FAST_MOTIFS = ('edge', '2-star', 'cherry', 'triangle', 'square')

# Rows of A @ A materialized at once.
ROW_CHUNK = 512

_FAST_KEYS = {canonical_key(get_motif(name)): name for name in FAST_MOTIFS}


def fast_path_name(motif: RootedMotif) -> Optional[str]:
    """Name of the closed-form counter for a motif, or None"""
    if motif.order > 4:
        return None
    return _FAST_KEYS.get(canonical_key(motif))


def _choose2(x: np.ndarray) -> np.ndarray:
    return x * (x - 1) // 2


def _two_step_rows(adjacency: sparse.csr_matrix, rows: np.ndarray):
    """Per-row triangle and rooted 4-cycle counts from the two-step path matrix"""
    block = adjacency[rows]
    paths = (block @ adjacency).tocsr()
    triangles = np.asarray(paths.multiply(block).sum(axis=1)).ravel() // 2
    pairs = paths.copy()
    pairs.data = _choose2(pairs.data)
    squares = np.asarray(pairs.sum(axis=1)).ravel()
    # P_ii = deg(i) contributes C(deg(i), 2) pairs that are not cycles.
    own = np.asarray(block.sum(axis=1)).ravel()
    squares = squares - _choose2(own)
    return triangles.astype(np.int64), squares.astype(np.int64)


def fast_paths(graph: Graph, names: Iterable[str] = FAST_MOTIFS,
               vertices: Optional[Sequence[int]] = None) -> Dict[str, np.ndarray]:
    """
    Closed-form rooted counts.

    Args:
        graph: Host graph
        names: Subset of FAST_MOTIFS to compute
        vertices: Vertices to compute (default: all, in id order)

    Returns:
        Dict mapping motif name to an int64 count array aligned with ``vertices``
    """
    names = list(names)
    unknown = [n for n in names if n not in FAST_MOTIFS]
    if unknown:
        raise ValueError(f"No closed form for: {', '.join(unknown)}")
    idx = np.arange(graph.n) if vertices is None else np.asarray(vertices, dtype=np.int64)
    adjacency = graph.to_csr()
    degree = graph.degrees()
    result: Dict[str, np.ndarray] = {}

    if 'edge' in names:
        result['edge'] = degree[idx].copy()
    if '2-star' in names:
        result['2-star'] = _choose2(degree[idx])
    if 'cherry' in names:
        neighbor_degree = adjacency @ degree
        result['cherry'] = (neighbor_degree - degree)[idx].astype(np.int64)

    if 'triangle' in names or 'square' in names:
        triangles = np.zeros(len(idx), dtype=np.int64)
        squares = np.zeros(len(idx), dtype=np.int64)
        for start in range(0, len(idx), ROW_CHUNK):
            rows = idx[start:start + ROW_CHUNK]
            t, s = _two_step_rows(adjacency, rows)
            triangles[start:start + len(rows)] = t
            squares[start:start + len(rows)] = s
        if 'triangle' in names:
            result['triangle'] = triangles
        if 'square' in names:
            result['square'] = squares

    return result
