"""
Graph utilities for rooted subgraph counting
"""
import logging
from typing import Dict, Iterable, List, Tuple

import networkx as nx
import numpy as np
import pandas as pd
from scipy import sparse

from .errors import DegenerateModelError, InputError

logger = logging.getLogger(__name__)


class Graph:
    """Undirected simple graph on vertices 0..n-1, immutable after construction"""

    __slots__ = ('n', 'adjacency', 'edge_count', '_neighbor_sets', '_csr')

    def __init__(self, n: int, adjacency: Iterable[Iterable[int]]):
        adj = tuple(tuple(sorted(set(int(v) for v in nbrs))) for nbrs in adjacency)
        if len(adj) != n:
            raise InputError(f"adjacency has {len(adj)} rows for n={n}")
        total = 0
        for i, nbrs in enumerate(adj):
            for j in nbrs:
                if j == i:
                    raise InputError(f"self-loop at vertex {i}")
                if not 0 <= j < n:
                    raise InputError(f"neighbor {j} of vertex {i} out of range")
            total += len(nbrs)
        sets = tuple(frozenset(nbrs) for nbrs in adj)
        for i, nbrs in enumerate(adj):
            for j in nbrs:
                if i not in sets[j]:
                    raise InputError(f"adjacency is not symmetric at ({i}, {j})")
        object.__setattr__(self, 'n', int(n))
        object.__setattr__(self, 'adjacency', adj)
        object.__setattr__(self, 'edge_count', total // 2)
        object.__setattr__(self, '_neighbor_sets', sets)
        object.__setattr__(self, '_csr', None)

    def __setattr__(self, key, value):
        raise AttributeError("Graph is immutable")

    def __reduce__(self):
        return (Graph, (self.n, self.adjacency))

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adjacency == other.adjacency

    def __hash__(self) -> int:
        return hash((self.n, self.adjacency))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count})"

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> 'Graph':
        """Build a graph from an edge iterable; duplicates are merged"""
        adj: List[set] = [set() for _ in range(n)]
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise InputError(f"self-loop at vertex {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise InputError(f"edge ({a}, {b}) outside vertex range 0..{n - 1}")
            adj[a].add(b)
            adj[b].add(a)
        return cls(n, adj)

    @classmethod
    def from_arrays(cls, n: int, sources: np.ndarray, targets: np.ndarray) -> 'Graph':
        """Build a graph from parallel endpoint arrays of distinct i<j pairs"""
        rows = np.concatenate([sources, targets]).astype(np.int64)
        cols = np.concatenate([targets, sources]).astype(np.int64)
        matrix = sparse.csr_matrix((np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=(n, n))
        matrix.sum_duplicates()
        matrix.sort_indices()
        adjacency = [matrix.indices[matrix.indptr[i]:matrix.indptr[i + 1]].tolist() for i in range(n)]
        return cls(n, adjacency)

    @classmethod
    def from_networkx(cls, nx_graph: nx.Graph) -> 'Graph':
        """Convert a networkx graph, relabeling nodes by sorted order"""
        nodes = sorted(nx_graph.nodes())
        index = {v: k for k, v in enumerate(nodes)}
        return cls.from_edges(len(nodes), ((index[a], index[b]) for a, b in nx_graph.edges()))

    @classmethod
    def complete(cls, n: int) -> 'Graph':
        return cls(n, [[j for j in range(n) if j != i] for i in range(n)])

    def has_edge(self, i: int, j: int) -> bool:
        return j in self._neighbor_sets[i]

    def neighbors(self, i: int) -> Tuple[int, ...]:
        return self.adjacency[i]

    def neighbor_set(self, i: int) -> frozenset:
        return self._neighbor_sets[i]

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def degrees(self) -> np.ndarray:
        return np.fromiter((len(a) for a in self.adjacency), dtype=np.int64, count=self.n)

    def edges(self) -> List[Tuple[int, int]]:
        """Edges (i, j) with i < j in lexicographic order"""
        return [(i, j) for i in range(self.n) for j in self.adjacency[i] if j > i]

    @property
    def rho_hat(self) -> float:
        """Empirical edge density e(G)/e(K_n)"""
        if self.n < 2 or self.edge_count == 0:
            raise DegenerateModelError("empty graph: edge density is zero")
        return self.edge_count / (self.n * (self.n - 1) / 2)

    def to_csr(self) -> sparse.csr_matrix:
        """Adjacency matrix in CSR form (int64), cached"""
        if self._csr is None:
            rows = np.repeat(np.arange(self.n), self.degrees())
            cols = np.fromiter((j for nbrs in self.adjacency for j in nbrs), dtype=np.int64,
                               count=2 * self.edge_count)
            data = np.ones(len(cols), dtype=np.int64)
            csr = sparse.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))
            object.__setattr__(self, '_csr', csr)
        return self._csr

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges())
        return g

    def relabel(self, permutation: Iterable[int]) -> 'Graph':
        """Return the graph with vertex v renamed permutation[v]"""
        perm = list(permutation)
        return Graph.from_edges(self.n, ((perm[a], perm[b]) for a, b in self.edges()))

    def with_edges(self, extra: Iterable[Tuple[int, int]]) -> 'Graph':
        return Graph.from_edges(self.n, list(self.edges()) + list(extra))

    def to_dataframe(self) -> pd.DataFrame:
        """Edge table with columns source, target"""
        return pd.DataFrame(self.edges(), columns=['source', 'target'])

    def summary(self) -> Dict:
        deg = self.degrees()
        return {
            'n': self.n,
            'edges': self.edge_count,
            'rho_hat': self.edge_count / (self.n * (self.n - 1) / 2) if self.n > 1 else 0.0,
            'mean_degree': float(deg.mean()) if self.n else 0.0,
            'max_degree': int(deg.max()) if self.n else 0,
        }
