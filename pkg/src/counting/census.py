"""
Per-vertex rooted counts and densities for a set of motifs
"""
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..utils.errors import DegenerateModelError, InputError
from ..utils.graph_utils import Graph
from ..utils.motif_utils import RootedMotif, count_in_complete
from ..utils.parallel import chunked, parallel_map
from .fast_paths import fast_path_name, fast_paths
from .rooted_counts import checked_int64, rooted_count

logger = logging.getLogger(__name__)


class CountVector:
    """Per-vertex rooted counts X_F(G, i) of one motif"""

    def __init__(self, motif: RootedMotif, counts: np.ndarray):
        self.motif = motif
        self.counts = np.asarray(counts, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.counts)

    def __getitem__(self, vertex: int) -> int:
        return int(self.counts[vertex])

    def total(self) -> int:
        return int(self.counts.sum())

    def to_dict(self) -> Dict:
        return {'motif': self.motif.to_dict(), 'counts': self.counts.tolist()}


class DensityMatrix:
    """
    Rooted densities s_i(F_t, G) for n vertices and d motifs.

    ``values[i, t] = rho_hat^(-e(F_t)) * counts[i, t] / count_in_complete(F_t, n)``
    where ``rho_hat = e(G)/e(K_n)`` unless a known sparsity was supplied.
    """

    def __init__(self, motifs: List[RootedMotif], counts: np.ndarray, n: int,
                 edge_count: int, rho: Optional[float] = None):
        self.motifs = list(motifs)
        self.counts = np.asarray(counts, dtype=np.int64).reshape(n, len(self.motifs))
        self.n = n
        self.edge_count = edge_count
        self.rho_hat = edge_count / (n * (n - 1) / 2)
        self.rho = self.rho_hat if rho is None else float(rho)
        complete = np.array([float(count_in_complete(f, n)) for f in self.motifs])
        scale = np.array([self.rho ** (-f.edge_count) for f in self.motifs])
        self.values = self.counts / complete * scale

    @property
    def d(self) -> int:
        return len(self.motifs)

    @property
    def labels(self) -> List[str]:
        return [f.label for f in self.motifs]

    def count_vector(self, t: int) -> CountVector:
        return CountVector(self.motifs[t], self.counts[:, t])

    def count_vectors(self) -> List[CountVector]:
        return [self.count_vector(t) for t in range(self.d)]

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.labels.index(name)]

    def to_dataframe(self) -> pd.DataFrame:
        """Table with vertex id, then raw count and density columns per motif"""
        data = {'vertex_id': np.arange(self.n)}
        for t, label in enumerate(self.labels):
            data[f'{label}_count'] = self.counts[:, t]
            data[f'{label}_density'] = self.values[:, t]
        return pd.DataFrame(data)

    def summary(self) -> Dict:
        return {
            'n': self.n,
            'edges': self.edge_count,
            'rho_hat': self.rho_hat,
            'motifs': self.labels,
            'total_counts': {cv.motif.label: cv.total() for cv in self.count_vectors()},
            'mean_density': {label: float(self.values[:, t].mean())
                             for t, label in enumerate(self.labels)},
        }


def _generic_chunk(job: Tuple[Graph, RootedMotif, List[int]]) -> List[int]:
    graph, motif, vertices = job
    return [rooted_count(graph, v, motif) for v in vertices]


def count_matrix(graph: Graph, motifs: Sequence[RootedMotif], workers: int = 1,
                 vertices: Optional[Sequence[int]] = None) -> np.ndarray:
    """
    Raw rooted counts, one column per motif.

    Motifs with a closed form use it; the others are counted by
    backtracking, partitioned by root vertex across ``workers``.
    """
    idx = list(range(graph.n)) if vertices is None else [int(v) for v in vertices]
    counts = np.zeros((len(idx), len(motifs)), dtype=np.int64)
    fast = {t: fast_path_name(f) for t, f in enumerate(motifs)}
    fast_names = sorted({name for name in fast.values() if name})
    closed = fast_paths(graph, fast_names, vertices=idx) if fast_names else {}

    for t, motif in enumerate(motifs):
        if fast[t]:
            counts[:, t] = closed[fast[t]]
            continue
        jobs = [(graph, motif, part) for part in chunked(idx, max(1, workers) * 4)]
        parts = parallel_map(_generic_chunk, jobs, workers=workers)
        counts[:, t] = checked_int64(c for part in parts for c in part)
        logger.debug("counted %s by backtracking on %d vertices", motif.label, len(idx))
    return counts


def census(graph: Graph, motifs: Sequence[RootedMotif], workers: int = 1,
           rho: Optional[float] = None) -> DensityMatrix:
    """
    Rooted density census of every vertex

    Args:
        graph: Host graph with at least one edge
        motifs: Motifs F_1..F_d
        workers: Worker processes for backtracking counts
        rho: Known sparsity used instead of rho_hat for normalization

    Returns:
        DensityMatrix (n x d), identical for every worker count

    Raises:
        DegenerateModelError: If the graph has no edge
        InputError: If a motif has more vertices than the graph
    """
    if graph.edge_count == 0:
        raise DegenerateModelError("empty graph: rho_hat = 0, densities are undefined")
    if not motifs:
        raise InputError("census needs at least one motif")
    too_big = [f.label for f in motifs if f.order > graph.n]
    if too_big:
        raise InputError(f"motif(s) larger than the graph (n={graph.n}): {', '.join(too_big)}")
    counts = count_matrix(graph, motifs, workers=workers)
    return DensityMatrix(list(motifs), counts, graph.n, graph.edge_count, rho=rho)
