"""
Parametric bootstrap of per-block density moments, standardization and
bootstrap critical values
"""
import logging
import math
import warnings
from typing import Dict, Optional, Sequence, Union

import numpy as np
from scipy import linalg, stats

from ..counting.census import DensityMatrix, census
from ..models.kernel import Kernel, SampleSpec, derive_seed, grid_latents, sample_graph
from ..utils.errors import DegenerateModelError, InputError
from ..utils.motif_utils import RootedMotif
from ..utils.parallel import parallel_map
from .blockmodel_fit import BlockFit

logger = logging.getLogger(__name__)

DEFAULT_REPLICATES = 50
DEFAULT_CRITICAL_REPLICATES = 500
NEAR_SINGULAR_RATIO = 1e-10

# Seed tags separating bootstrap-moment and critical-value replicates.
_MOMENT_TAG = 11
_CRITICAL_TAG = 12


class BootstrapMoments:
    """Per-block bootstrap means (k x d) and covariances (k x d x d)"""

    def __init__(self, motifs: Sequence[RootedMotif], means: np.ndarray, covariances: np.ndarray,
                 replicates: int, active: np.ndarray):
        self.motifs = list(motifs)
        self.means = np.asarray(means, dtype=float)
        self.covariances = np.asarray(covariances, dtype=float)
        self.replicates = int(replicates)
        self.active = np.asarray(active, dtype=bool)

    @property
    def k(self) -> int:
        return self.means.shape[0]

    @property
    def d(self) -> int:
        return self.means.shape[1]

    def to_dict(self) -> Dict:
        return {
            'replicates': self.replicates,
            'motifs': [f.label for f in self.motifs],
            'active_blocks': self.active.tolist(),
            'means': self.means.tolist(),
            'covariances': self.covariances.tolist(),
        }


def _as_kernel(source: Union[BlockFit, Kernel]) -> Kernel:
    return source.to_kernel() if isinstance(source, BlockFit) else source


def _replicate_densities(job) -> np.ndarray:
    kernel, n, rho, seed, motifs = job
    graph, _ = sample_graph(kernel, SampleSpec(n, rho, seed, latent_mode='fixed-grid'))
    return census(graph, motifs).values


def bootstrap_moments(source: Union[BlockFit, Kernel], n: int, N: int,
                      motifs: Sequence[RootedMotif], seed: int, rho: float = 1.0,
                      workers: int = 1, progress: bool = False) -> BootstrapMoments:
    """
    Bootstrap per-block density means and covariances

    Replicates are sampled on the fixed latent grid x_i = i/(n+1), so block
    membership is the same in every replicate. For block b with members P_b:
    mean_b = 1/N sum_t 1/|P_b| sum_i s_i^t and
    cov_b = 1/(N-1) sum_t 1/|P_b| sum_i (s_i^t - mean_b)(s_i^t - mean_b)^T.

    Args:
        source: Fitted blockmodel (sampled with rho = 1) or a kernel
        n: Vertices per replicate
        N: Number of replicates (>= 2)
        motifs: Motifs of the density vector
        seed: Base seed; replicate t uses a seed derived from (seed, t)
        rho: Sparsity applied to a kernel source
        workers: Worker processes
        progress: Show a progress bar

    Returns:
        BootstrapMoments
    """
    if N < 2:
        raise InputError(f"bootstrap needs at least 2 replicates, got {N}")
    kernel = _as_kernel(source)
    if isinstance(source, BlockFit):
        rho = 1.0
    blocks = kernel.block_of(grid_latents(n))
    members = [np.flatnonzero(blocks == b) for b in range(kernel.k)]
    active = np.array([len(m) > 0 for m in members])
    if not active.all():
        message = f"Blocks {np.flatnonzero(~active).tolist()} hold no grid vertex and are excluded"
        logger.warning(message)
        warnings.warn(message)

    jobs = [(kernel, n, rho, derive_seed(seed, _MOMENT_TAG, t), list(motifs)) for t in range(N)]
    replicates = parallel_map(_replicate_densities, jobs, workers=workers,
                              desc="bootstrap", progress=progress)

    d = len(motifs)
    means = np.full((kernel.k, d), np.nan)
    covariances = np.full((kernel.k, d, d), np.nan)
    for b, idx in enumerate(members):
        if not len(idx):
            continue
        block_means = np.zeros(d)
        for values in replicates:
            block_means += values[idx].mean(axis=0)
        block_means /= N
        scatter = np.zeros((d, d))
        for values in replicates:
            centered = values[idx] - block_means
            scatter += centered.T @ centered / len(idx)
        means[b] = block_means
        covariances[b] = scatter / (N - 1)
    return BootstrapMoments(motifs, means, covariances, N, active)


def inverse_sqrt(matrix: np.ndarray, block: Optional[int] = None) -> np.ndarray:
    """
    Symmetric inverse square root by eigendecomposition

    Raises:
        DegenerateModelError: If min eigenvalue < NEAR_SINGULAR_RATIO * max eigenvalue
    """
    values, vectors = linalg.eigh(matrix)
    if values.max() <= 0 or values.min() < NEAR_SINGULAR_RATIO * values.max():
        where = f" for block {block}" if block is not None else ""
        raise DegenerateModelError(f"near-singular covariance{where} (eigenvalues {values.tolist()})")
    return (vectors / np.sqrt(values)) @ vectors.T


def standardize(densities: Union[DensityMatrix, np.ndarray], moments: BootstrapMoments,
                assignment: Sequence[int]) -> np.ndarray:
    """t_i = Sigma_b(i)^(-1/2) (s_i - mean_b(i)), one row per vertex"""
    values = densities.values if isinstance(densities, DensityMatrix) else np.asarray(densities, float)
    assignment = np.asarray(assignment, dtype=np.int64)
    t_hat = np.empty_like(values, dtype=float)
    for b in np.unique(assignment):
        if b >= moments.k or not moments.active[b]:
            raise DegenerateModelError(f"no bootstrap moments for block {b}")
        root = inverse_sqrt(moments.covariances[b], block=int(b))
        rows = assignment == b
        t_hat[rows] = (values[rows] - moments.means[b]) @ root
    return t_hat


def _replicate_statistics(job) -> np.ndarray:
    kernel, n, seed, motifs, moments, blocks = job
    graph, _ = sample_graph(kernel, SampleSpec(n, 1.0, seed, latent_mode='fixed-grid'))
    t_hat = standardize(census(graph, motifs), moments, blocks)
    return np.sum(t_hat ** 2, axis=1)


def replicate_statistics(fit: Union[BlockFit, Kernel], n: int, R: int, seed: int,
                         moments: BootstrapMoments, workers: int = 1,
                         progress: bool = False) -> np.ndarray:
    """R x n matrix of ||t_i||^2 on graphs simulated from the fitted model"""
    kernel = _as_kernel(fit)
    blocks = kernel.block_of(grid_latents(n))
    jobs = [(kernel, n, derive_seed(seed, _CRITICAL_TAG, r), moments.motifs, moments, blocks)
            for r in range(R)]
    return np.vstack(parallel_map(_replicate_statistics, jobs, workers=workers,
                                  desc="critical value", progress=progress))


def order_statistic(values: np.ndarray, alpha: float) -> float:
    """Empirical (1-alpha) quantile as the ceil((1-alpha) R)-th smallest value"""
    ordered = np.sort(np.asarray(values, dtype=float).ravel())
    rank = max(1, math.ceil(round((1 - alpha) * len(ordered), 9)))
    return float(ordered[rank - 1])


def critical_value(fit: Union[BlockFit, Kernel], n: int, alpha: float, R: int, seed: int,
                   moments: BootstrapMoments, pooled: bool = False, workers: int = 1,
                   progress: bool = False, statistics: Optional[np.ndarray] = None) -> float:
    """
    Bootstrap critical value for max_i ||t_i||^2

    By default the (1-alpha) order statistic of the R per-replicate maxima;
    ``pooled`` takes it over all n*R replicate statistics instead.
    """
    if not 0 <= alpha < 1:
        raise InputError(f"alpha must lie in [0, 1), got {alpha}")
    if R < 20 / max(alpha, 1e-12):
        logger.info("R=%d is below the recommended 20/alpha=%.0f", R, 20 / max(alpha, 1e-12))
    if statistics is None:
        statistics = replicate_statistics(fit, n, R, seed, moments, workers=workers, progress=progress)
    if pooled:
        return order_statistic(statistics, alpha)
    return order_statistic(statistics.max(axis=1), alpha)


def bonferroni_critical_value(n: int, alpha: float, d: int) -> float:
    """chi2(d) quantile at 1 - alpha/n"""
    return float(stats.chi2.ppf(1 - alpha / n, d))


def pointwise_critical_value(alpha: float, d: int) -> float:
    return float(stats.chi2.ppf(1 - alpha, d))
