"""
Block-kernel estimation from one observed graph (Louvain partition + edge frequencies)
"""
import logging
import math
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np
from scipy import sparse
from scipy.optimize import linear_sum_assignment
from scipy.special import xlogy

from ..models.kernel import Kernel
from ..utils.errors import DegenerateModelError
from ..utils.graph_utils import Graph

logger = logging.getLogger(__name__)

LOUVAIN_THRESHOLD = 1e-12
K_SCAN_FRACTION = 0.10


class Partition:
    """Louvain result: block labels plus the modularity reached at each level"""

    def __init__(self, labels: np.ndarray, level_modularity: List[float]):
        self.labels = np.asarray(labels, dtype=np.int64)
        self.level_modularity = list(level_modularity)

    @property
    def k(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    @property
    def modularity(self) -> float:
        return self.level_modularity[-1] if self.level_modularity else 0.0

    def blocks(self) -> List[List[int]]:
        return [np.flatnonzero(self.labels == b).tolist() for b in range(self.k)]


def _canonical_labels(communities) -> np.ndarray:
    """Number communities by their smallest vertex id"""
    ordered = sorted((sorted(c) for c in communities), key=lambda c: c[0])
    n = sum(len(c) for c in ordered)
    labels = np.empty(n, dtype=np.int64)
    for b, members in enumerate(ordered):
        labels[members] = b
    return labels


def louvain(graph: Graph, seed: int = 0) -> Partition:
    """
    Modularity-maximizing partition by two-phase Louvain

    Isolated vertices, which Louvain leaves as singletons, are attached to
    the largest community so that every block carries edges.

    Raises:
        DegenerateModelError: If the graph has no edge
    """
    if graph.edge_count == 0:
        raise DegenerateModelError("empty graph: Louvain needs at least one edge")
    nx_graph = graph.to_networkx()
    levels = list(nx.community.louvain_partitions(
        nx_graph, seed=seed, threshold=LOUVAIN_THRESHOLD))
    communities = [set(c) for c in levels[-1]]
    level_modularity = [nx.community.modularity(nx_graph, level) for level in levels]

    isolated = {v for v in range(graph.n) if graph.degree(v) == 0}
    if isolated:
        kept = [c for c in communities if not c <= isolated]
        if kept:
            largest = max(kept, key=lambda c: (len(c), -min(c)))
            largest |= isolated
            communities = [c - isolated if c is not largest else c for c in kept]
    labels = _canonical_labels(communities)
    logger.debug("louvain: %d blocks, modularity %.4f", int(labels.max()) + 1, level_modularity[-1])
    return Partition(labels, level_modularity)


class BlockFit:
    """Fitted blockmodel: assignment, B_hat, likelihood and AIC"""

    def __init__(self, assignment: np.ndarray, B_hat: np.ndarray, log_likelihood: float,
                 modularity: Optional[float] = None):
        self.assignment = np.asarray(assignment, dtype=np.int64)
        self.B_hat = np.asarray(B_hat, dtype=float)
        self.k = self.B_hat.shape[0]
        self.log_likelihood = float(log_likelihood)
        self.aic = 2 * (self.k * (self.k + 1) / 2) - 2 * self.log_likelihood
        self.modularity = modularity
        self.candidates: List[Dict] = []
        self.louvain_k: Optional[int] = None

    @property
    def n(self) -> int:
        return len(self.assignment)

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.k)

    def to_kernel(self) -> Kernel:
        """Kernel with B = B_hat, pi = block shares; sample it with rho = 1"""
        return Kernel(self.B_hat, self.sizes / self.n)

    def to_dict(self) -> Dict:
        return {
            'k': self.k,
            'B_hat': self.B_hat.tolist(),
            'block_sizes': self.sizes.tolist(),
            'log_likelihood': self.log_likelihood,
            'aic': self.aic,
            'modularity': self.modularity,
            'louvain_k': self.louvain_k,
            'candidates': self.candidates,
        }


def _indicator(labels: np.ndarray, k: int) -> sparse.csr_matrix:
    n = len(labels)
    return sparse.csr_matrix((np.ones(n), (np.arange(n), labels)), shape=(n, k))


def block_edge_matrix(graph: Graph, labels: np.ndarray, k: int) -> np.ndarray:
    """M = Z^T A Z: ordered-pair edge counts between blocks (diagonal counts each edge twice)"""
    z = _indicator(labels, k)
    return np.asarray((z.T @ graph.to_csr() @ z).todense(), dtype=float)


def estimate_B(graph: Graph, labels: np.ndarray, k: Optional[int] = None) -> Tuple[np.ndarray, float]:
    """
    Edge frequencies between blocks and the Bernoulli log-likelihood

    B_hat[b, b'] = M[b, b'] / (|P_b| (|P_b'| - 1{b = b'})), with 0 for a
    singleton block's diagonal.

    Raises:
        DegenerateModelError: If a block is empty
    """
    k = int(labels.max()) + 1 if k is None else k
    sizes = np.bincount(labels, minlength=k).astype(float)
    if np.any(sizes == 0):
        empty = np.flatnonzero(sizes == 0).tolist()
        raise DegenerateModelError(f"degenerate partition: empty block(s) {empty}")
    M = block_edge_matrix(graph, labels, k)
    pairs = np.outer(sizes, sizes) - np.diag(sizes)
    B_hat = np.divide(M, pairs, out=np.zeros_like(M), where=pairs > 0)

    # Unordered pair and edge totals per block pair.
    upper = np.triu_indices(k)
    unordered_pairs = pairs[upper] / np.where(upper[0] == upper[1], 2.0, 1.0)
    unordered_edges = M[upper] / np.where(upper[0] == upper[1], 2.0, 1.0)
    p = B_hat[upper]
    log_likelihood = float(np.sum(xlogy(unordered_edges, p)
                                  + xlogy(unordered_pairs - unordered_edges, 1 - p)))
    return B_hat, log_likelihood


def block_modularity(graph: Graph, labels: np.ndarray) -> float:
    """Newman modularity of a labelling, read off the block edge matrix"""
    k = int(labels.max()) + 1
    M = block_edge_matrix(graph, labels, k)
    two_m = 2.0 * graph.edge_count
    return float(np.sum(np.diag(M) / two_m - (M.sum(axis=1) / two_m) ** 2))


def _merge_best_pair(graph: Graph, labels: np.ndarray) -> np.ndarray:
    """Merge the two blocks whose union gains the most modularity"""
    k = int(labels.max()) + 1
    M = block_edge_matrix(graph, labels, k)
    two_m = 2.0 * graph.edge_count
    degree_sum = M.sum(axis=1)
    best, best_pair = -math.inf, None
    for a in range(k):
        for b in range(a + 1, k):
            gain = 2 * (M[a, b] / two_m - degree_sum[a] * degree_sum[b] / two_m ** 2)
            if gain > best:
                best, best_pair = gain, (a, b)
    a, b = best_pair
    merged = np.where(labels == b, a, labels)
    return _canonical_labels([np.flatnonzero(merged == c) for c in np.unique(merged)])


def _split_largest(graph: Graph, labels: np.ndarray, seed: int) -> Optional[np.ndarray]:
    """Kernighan-Lin bisection of the largest block"""
    sizes = np.bincount(labels)
    target = int(np.argmax(sizes))
    members = np.flatnonzero(labels == target)
    if len(members) < 4:
        return None
    sub = graph.to_networkx().subgraph(members.tolist())
    part_a, part_b = nx.community.kernighan_lin_bisection(sub, seed=seed)
    communities = [np.flatnonzero(labels == c) for c in range(len(sizes)) if c != target]
    communities += [sorted(part_a), sorted(part_b)]
    return _canonical_labels(communities)


def fit_blockmodel(graph: Graph, seed: int = 0, scan: bool = True,
                   partition: Optional[Partition] = None) -> BlockFit:
    """
    Fit a blockmodel: Louvain blocks, then a k-scan over merges and splits
    within +/-10% of Louvain's k (at least one step each way). A merge or
    split is a candidate only if it raises modularity; the lowest AIC wins,
    ties to the smaller k.

    Args:
        graph: Observed graph
        seed: Louvain and bisection seed
        scan: Whether to scan k around the Louvain value
        partition: Precomputed Louvain partition

    Returns:
        BlockFit
    """
    partition = partition or louvain(graph, seed=seed)
    base = partition.labels
    k0 = partition.k
    candidates = {k0: base}

    if scan:
        low = max(1, min(k0 - 1, int(math.floor(k0 * (1 - K_SCAN_FRACTION)))))
        high = max(k0 + 1, int(math.ceil(k0 * (1 + K_SCAN_FRACTION))))
        base_q = block_modularity(graph, base)
        # Each direction stops at the first step that does not raise modularity.
        labels, q = base, base_q
        for k in range(k0 - 1, low - 1, -1):
            merged = _merge_best_pair(graph, labels)
            merged_q = block_modularity(graph, merged)
            if merged_q <= q:
                break
            labels, q = merged, merged_q
            candidates[k] = labels
        labels, q = base, base_q
        for k in range(k0 + 1, high + 1):
            split = _split_largest(graph, labels, seed)
            if split is None:
                break
            split_q = block_modularity(graph, split)
            if split_q <= q:
                break
            labels, q = split, split_q
            candidates[k] = labels

    best: Optional[BlockFit] = None
    scanned = []
    for k in sorted(candidates):
        B_hat, loglik = estimate_B(graph, candidates[k], k)
        fit = BlockFit(candidates[k], B_hat, loglik)
        scanned.append({'k': k, 'aic': fit.aic, 'log_likelihood': loglik})
        if best is None or fit.aic < best.aic:
            best = fit
    best.candidates = scanned
    best.louvain_k = k0
    best.modularity = nx.community.modularity(
        graph.to_networkx(), [set(np.flatnonzero(best.assignment == b)) for b in range(best.k)])
    logger.info("blockmodel fit: k=%d (louvain k=%d), AIC %.2f", best.k, k0, best.aic)
    return best


def label_agreement(truth: np.ndarray, found: np.ndarray) -> float:
    """Fraction of vertices whose labels agree under the best one-to-one relabeling"""
    truth = np.asarray(truth, dtype=np.int64)
    found = np.asarray(found, dtype=np.int64)
    size = max(truth.max(), found.max()) + 1
    confusion = np.zeros((size, size), dtype=np.int64)
    np.add.at(confusion, (truth, found), 1)
    rows, cols = linear_sum_assignment(-confusion)
    return float(confusion[rows, cols].sum() / len(truth))
