"""
Blockmodel kernels and seeded sampling of inhomogeneous random graphs
"""
import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..utils.errors import InputError
from ..utils.graph_utils import Graph
from ..utils.parallel import chunked, parallel_map

logger = logging.getLogger(__name__)

LATENT_MODES = ('sample-uniform', 'fixed-grid', 'fixed-list')

# Stream tags mixed into the seed so latent and edge draws never share a stream.
_LATENT_STREAM = 0
_EDGE_STREAM = 1


class Kernel:
    """
    Piecewise-constant symmetric kernel (stochastic blockmodel)

    Block b covers the interval [pi_0 + ... + pi_{b-1}, pi_0 + ... + pi_b) of
    latent positions; kappa(x, y) = B[block(x), block(y)].
    """

    def __init__(self, B, pi=None):
        B = np.atleast_2d(np.asarray(B, dtype=float))
        k = B.shape[0]
        if B.shape != (k, k):
            raise InputError(f"B must be square, got shape {B.shape}")
        if not np.allclose(B, B.T, atol=1e-12):
            raise InputError("B must be symmetric")
        if np.any(B < 0) or np.any(B > 1):
            raise InputError("B entries must lie in [0, 1]")
        pi = np.full(k, 1.0 / k) if pi is None else np.asarray(pi, dtype=float).ravel()
        if pi.shape != (k,):
            raise InputError(f"pi must have {k} entries, got {pi.shape[0]}")
        if np.any(pi <= 0):
            raise InputError("block proportions must be positive")
        if not np.isclose(pi.sum(), 1.0, atol=1e-9):
            raise InputError(f"block proportions sum to {pi.sum():.6g}, expected 1")
        if np.any(B.max(axis=1) <= 0):
            raise InputError("every block needs a positive connection probability")
        self.B = (B + B.T) / 2
        self.pi = pi / pi.sum()
        self.k = k

    @classmethod
    def constant(cls, c: float) -> 'Kernel':
        return cls([[c]], [1.0])

    @classmethod
    def from_function(cls, fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
                      blocks: int) -> 'Kernel':
        """Discretize a symmetric kernel function onto ``blocks`` equal blocks at grid midpoints"""
        mid = (np.arange(blocks) + 0.5) / blocks
        xx, yy = np.meshgrid(mid, mid, indexing='ij')
        values = np.asarray(fn(xx, yy), dtype=float)
        return cls((values + values.T) / 2, np.full(blocks, 1.0 / blocks))

    @classmethod
    def from_dict(cls, data: Dict) -> 'Kernel':
        if 'B' not in data:
            raise InputError("kernel record missing field 'B'")
        B = np.asarray(data['B'], dtype=float)
        k = int(data.get('k', int(round(np.sqrt(B.size)))))
        if B.ndim == 1:
            if B.size != k * k:
                raise InputError(f"B has {B.size} entries, expected k*k = {k * k}")
            B = B.reshape(k, k)
        if B.shape != (k, k):
            raise InputError(f"B has shape {B.shape}, expected ({k}, {k})")
        return cls(B, data.get('pi'))

    def to_dict(self) -> Dict:
        return {'k': self.k, 'B': self.B.tolist(), 'pi': self.pi.tolist()}

    def block_of(self, x) -> np.ndarray:
        """Block labels of latent positions via the cumulative proportions"""
        edges = np.cumsum(self.pi)[:-1]
        return np.searchsorted(edges, np.asarray(x, dtype=float), side='right').astype(np.int64)

    def __call__(self, x, y) -> np.ndarray:
        return self.B[self.block_of(x), self.block_of(y)]

    def block_variance(self, values: np.ndarray) -> float:
        """Variance of a per-block quantity when the block is drawn from pi"""
        values = np.asarray(values, dtype=float)
        mean = float(self.pi @ values)
        return float(self.pi @ (values - mean) ** 2)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Kernel) and self.k == other.k
                and np.array_equal(self.B, other.B) and np.array_equal(self.pi, other.pi))

    def __hash__(self) -> int:
        return hash((self.k, self.B.tobytes(), self.pi.tobytes()))

    def __repr__(self) -> str:
        return f"Kernel(k={self.k})"


class SampleSpec:
    """Sampling parameters for G(rho, kappa) on n vertices"""

    def __init__(self, n: int, rho: float, seed: int, latent_mode: str = 'sample-uniform',
                 latents: Optional[Sequence[float]] = None,
                 fixed: Optional[Dict[int, float]] = None):
        if n < 1:
            raise InputError(f"n must be positive, got {n}")
        if not 0 <= rho <= 1:
            raise InputError(f"rho must lie in [0, 1], got {rho}")
        if latent_mode not in LATENT_MODES:
            raise InputError(
                f"Unknown latent mode: {latent_mode}. Available modes: {', '.join(LATENT_MODES)}")
        if latent_mode == 'fixed-list':
            if latents is None or len(latents) != n:
                raise InputError("fixed-list mode needs exactly n latent positions")
        self.n = int(n)
        self.rho = float(rho)
        self.seed = int(seed)
        self.latent_mode = latent_mode
        self.latents = None if latents is None else np.asarray(latents, dtype=float)
        self.fixed = dict(fixed or {})

    def validate(self, kernel: Kernel):
        if self.rho * kernel.B.max() > 1 + 1e-12:
            raise InputError(
                f"rho * max(B) = {self.rho * kernel.B.max():.4g} exceeds 1")

    def to_dict(self) -> Dict:
        return {'n': self.n, 'rho': self.rho, 'seed': self.seed, 'latent_mode': self.latent_mode}


class LatentAssignment:
    """Latent positions x_i and their block labels"""

    def __init__(self, x: np.ndarray, block: np.ndarray):
        self.x = np.asarray(x, dtype=float)
        self.block = np.asarray(block, dtype=np.int64)

    def to_rows(self) -> List[Tuple[int, float, int]]:
        return [(i, float(x), int(b)) for i, (x, b) in enumerate(zip(self.x, self.block))]


def stream(seed: int, *key: int) -> np.random.Generator:
    """Counter-based generator for the stream identified by (seed, *key)"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *map(int, key)])))


def derive_seed(seed: int, *key: int) -> int:
    """Child seed for the job identified by (seed, *key)"""
    state = np.random.SeedSequence([int(seed), *map(int, key)]).generate_state(1, dtype=np.uint32)
    return int(state[0])


def grid_latents(n: int) -> np.ndarray:
    """x_i = (i+1)/(n+1) for vertices 0..n-1"""
    return np.arange(1, n + 1, dtype=float) / (n + 1)


def draw_latents(kernel: Kernel, spec: SampleSpec) -> LatentAssignment:
    if spec.latent_mode == 'fixed-grid':
        x = grid_latents(spec.n)
    elif spec.latent_mode == 'fixed-list':
        x = spec.latents.copy()
    else:
        x = stream(spec.seed, _LATENT_STREAM).random(spec.n)
    for vertex, value in spec.fixed.items():
        x[int(vertex)] = float(value)
    if np.any(x < 0) or np.any(x > 1):
        raise InputError("latent positions must lie in [0, 1]")
    return LatentAssignment(x, kernel.block_of(x))


def _sample_rows(job) -> Tuple[np.ndarray, np.ndarray]:
    seed, rows, n, probability, block = job
    sources, targets = [], []
    for i in rows:
        if i >= n - 1:
            continue
        # One stream per row; the j-th draw belongs to pair (i, i+1+j).
        u = stream(seed, _EDGE_STREAM, i).random(n - 1 - i)
        p = probability[block[i], block[i + 1:]]
        hits = np.flatnonzero(u < p) + i + 1
        sources.append(np.full(len(hits), i, dtype=np.int64))
        targets.append(hits.astype(np.int64))
    if not sources:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    return np.concatenate(sources), np.concatenate(targets)


def sample_graph(kernel: Kernel, spec: SampleSpec, workers: int = 1) -> Tuple[Graph, LatentAssignment]:
    """
    Sample G(rho, kappa)

    Args:
        kernel: Blockmodel kernel
        spec: Sampling parameters
        workers: Worker processes for row blocks

    Returns:
        (graph, latent assignment); identical for every worker count

    Raises:
        InputError: If rho * max(B) > 1
    """
    spec.validate(kernel)
    latents = draw_latents(kernel, spec)
    probability = spec.rho * kernel.B
    rows = list(range(spec.n))
    jobs = [(spec.seed, part, spec.n, probability, latents.block)
            for part in chunked(rows, max(1, workers) * 4)]
    parts = parallel_map(_sample_rows, jobs, workers=workers)
    sources = np.concatenate([p[0] for p in parts]) if parts else np.zeros(0, dtype=np.int64)
    targets = np.concatenate([p[1] for p in parts]) if parts else np.zeros(0, dtype=np.int64)
    graph = Graph.from_arrays(spec.n, sources, targets)
    logger.debug("sampled %r from %r with rho=%.4g", graph, kernel, spec.rho)
    return graph, latents
