"""
Per-vertex normality of standardized rooted counts
Holds one vertex's latent position fixed, samples many graphs and compares
the standardized counts at that vertex with the standard normal
"""
import logging
import warnings
from typing import Dict, List

import numpy as np
import pandas as pd
from scipy import stats

from ..counting.census import count_matrix
from ..inference.bootstrap import inverse_sqrt
from ..models.kernel import SampleSpec, derive_seed, sample_graph
from ..models.moments import moment_vector, regime_scale, standardized_moment_targets
from ..parsers.motif_parser import parse_motifs
from ..utils.config import (DEFAULT_BATCHES, DEFAULT_RHO_EXPONENT, KS_LEVEL, MAX_MOMENT_ORDER,
                            MC_TOLERANCE_SE, ExperimentConfig)
from ..utils.errors import InputError
from ..utils.parallel import parallel_map
from .base_analyzer import AnalysisResult, AnalyzerFactory, BaseAnalyzer

logger = logging.getLogger(__name__)

_REPLICATE_TAG = 31


def batch_standard_errors(values: np.ndarray, batches: int) -> np.ndarray:
    """
    Batch-means standard error of the column means of ``values`` (L x ...)

    The replicates are cut into ``batches`` contiguous groups of equal size
    (trailing remainder dropped).
    """
    values = np.asarray(values, dtype=float)
    if batches < 2:
        raise InputError(f"need at least 2 batches, got {batches}")
    size = len(values) // batches
    if size < 1:
        raise InputError(f"{len(values)} replicates cannot fill {batches} batches")
    batch_means = values[:size * batches].reshape(batches, size, *values.shape[1:]).mean(axis=1)
    return batch_means.std(axis=0, ddof=1) / np.sqrt(batches)


def qq_table(statistics: np.ndarray, d: int) -> pd.DataFrame:
    """Sorted statistics against chi2(d) quantiles at (i - 0.5)/L"""
    ordered = np.sort(np.asarray(statistics, dtype=float))
    probs = (np.arange(1, len(ordered) + 1) - 0.5) / len(ordered)
    return pd.DataFrame({'probability': probs,
                         'theoretical': stats.chi2.ppf(probs, d),
                         'empirical': ordered})


class MomentReport:
    """Standardized sample moments, their targets, batch SEs, QQ data and KS test"""

    def __init__(self, labels: List[str], t_values: np.ndarray, batches: int,
                 max_order: int = MAX_MOMENT_ORDER, tolerance: float = MC_TOLERANCE_SE):
        self.labels = list(labels)
        self.t_values = np.asarray(t_values, dtype=float)
        self.replicates, self.d = self.t_values.shape
        orders = np.arange(1, max_order + 1)
        powers = self.t_values[:, :, None] ** orders[None, None, :]
        self.orders = orders.tolist()
        self.moments = powers.mean(axis=0)
        self.standard_errors = batch_standard_errors(powers, batches)
        self.targets = np.array([standardized_moment_targets(k) for k in orders])
        self.tolerance = tolerance
        self.statistics = np.sum(self.t_values ** 2, axis=1)
        self.qq = qq_table(self.statistics, self.d)
        ks = stats.kstest(self.statistics, 'chi2', args=(self.d,))
        self.ks_statistic = float(ks.statistic)
        self.ks_pvalue = float(ks.pvalue)

    def within_tolerance(self, order: int) -> np.ndarray:
        """Per coordinate: |moment - target| <= tolerance * SE"""
        j = self.orders.index(order)
        return np.abs(self.moments[:, j] - self.targets[j]) <= self.tolerance * self.standard_errors[:, j]

    def ks_rejected(self, level: float = KS_LEVEL) -> bool:
        return self.ks_pvalue < level

    def to_dataframe(self) -> pd.DataFrame:
        rows = []
        for c, label in enumerate(self.labels):
            for j, k in enumerate(self.orders):
                rows.append({'motif': label, 'order': k, 'moment': self.moments[c, j],
                             'target': self.targets[j], 'se': self.standard_errors[c, j],
                             'within_tolerance': bool(self.within_tolerance(k)[c])})
        return pd.DataFrame(rows)

    def to_dict(self) -> Dict:
        return {
            'replicates': self.replicates,
            'motifs': self.labels,
            'orders': self.orders,
            'moments': self.moments.tolist(),
            'targets': self.targets.tolist(),
            'standard_errors': self.standard_errors.tolist(),
            'ks_statistic': self.ks_statistic,
            'ks_pvalue': self.ks_pvalue,
            'ks_rejected': self.ks_rejected(),
        }


def _target_counts(job) -> np.ndarray:
    kernel, n, rho, seed, x_target, motifs = job
    spec = SampleSpec(n, rho, seed, latent_mode='sample-uniform', fixed={0: x_target})
    graph, _ = sample_graph(kernel, spec)
    return count_matrix(graph, motifs, vertices=[0])[0]


def sample_target_counts(config: ExperimentConfig, progress: bool = False) -> np.ndarray:
    """L x d rooted counts at vertex 0 over independent replicates"""
    x_target = config.target_latent()
    jobs = [(config.kernel, config.n, config.rho, derive_seed(config.seed, _REPLICATE_TAG, r),
             x_target, list(config.motifs)) for r in range(config.replicates)]
    return np.vstack(parallel_map(_target_counts, jobs, workers=config.workers,
                                  desc="replicates", progress=progress))


def vertex_clt_experiment(config: ExperimentConfig, progress: bool = False) -> MomentReport:
    """
    Standardize the target vertex's counts by the exact blockmodel mean and
    covariance and report moments, QQ data and a KS test of ||t||^2 against chi2(d)
    """
    subcritical = [f.label for f in config.motifs if regime_scale(f, config.n, config.rho) <= 1]
    if subcritical:
        message = (f"n rho^m <= 1 for {', '.join(subcritical)}: counts are expected to "
                   f"degenerate at 0 rather than be normal")
        logger.warning(message)
        warnings.warn(message)
    root_block = int(config.kernel.block_of([config.target_latent()])[0])
    mean, cov = moment_vector(config.kernel, config.motifs, root_block, config.n, config.rho, exact=True)
    counts = sample_target_counts(config, progress=progress)
    t_values = (counts - mean) @ inverse_sqrt(cov)
    report = MomentReport([f.label for f in config.motifs], t_values, config.batches)
    report.regime = {f.label: regime_scale(f, config.n, config.rho) for f in config.motifs}
    report.counts = counts
    return report


@AnalyzerFactory.register
class VertexCltAnalyzer(BaseAnalyzer):
    """Monte Carlo check that standardized rooted counts at a vertex are normal"""

    def __init__(self):
        super().__init__(
            name="vertex-clt",
            description="Moments, QQ table and KS test of standardized counts at a fixed vertex"
        )
        self.required_inputs = ['kernel']

        self.questions = [
            {'question': 'Graph size', 'key': 'n', 'type': 'int', 'default': 5000,
             'help': 'Vertices per replicate'},
            {'question': 'Sparsity exponent a (rho = n^-a)', 'key': 'rho_exponent', 'type': 'float',
             'default': DEFAULT_RHO_EXPONENT, 'help': 'Default 1/3'},
            {'question': 'Replicates', 'key': 'replicates', 'type': 'int', 'default': 200,
             'help': 'Independent graphs L'},
            {'question': 'Motifs', 'key': 'motifs', 'type': 'str', 'default': 'triangle,square',
             'help': 'Comma-separated catalog names or motif JSON files'},
            {'question': 'Block of the target vertex', 'key': 'root_block', 'type': 'int',
             'default': 0, 'help': 'The target sits at the midpoint of this block'},
            {'question': 'Batches for standard errors', 'key': 'batches', 'type': 'int',
             'default': DEFAULT_BATCHES, 'help': 'At least 10'},
            {'question': 'Seed', 'key': 'seed', 'type': 'int', 'default': 0, 'help': 'Base seed'},
            {'question': 'Workers', 'key': 'workers', 'type': 'int', 'default': 1,
             'help': 'Worker processes'},
        ]

    def analyze(self, **kwargs) -> AnalysisResult:
        config = experiment_config(kwargs)
        report = vertex_clt_experiment(config, progress=kwargs.get('progress', False))

        result = AnalysisResult(self.name)
        result.payload = {**report.to_dict(), 'regime': report.regime}
        result.metadata = config.to_dict()
        result.detailed_report = report.to_dataframe()
        result.add_table('qq', report.qq)
        result.artifact = report
        failing = [f"{label} order {k}" for k in (2, 3, 4)
                   for label, ok in zip(report.labels, report.within_tolerance(k)) if not ok]
        result.summary = (
            f"KS of ||t||^2 vs chi2({report.d}): p={report.ks_pvalue:.3g} "
            f"({'rejected' if report.ks_rejected() else 'not rejected'} at {KS_LEVEL}); "
            f"moments 2-4 outside {MC_TOLERANCE_SE:g} SE: {', '.join(failing) or 'none'}"
        )
        return result


def experiment_config(kwargs: Dict, replicates_key: str = 'replicates') -> ExperimentConfig:
    """ExperimentConfig from resolved analyzer parameters"""
    motifs = kwargs.get('motifs', 'triangle,square')
    if isinstance(motifs, str):
        motifs = parse_motifs(motifs)
    return ExperimentConfig(
        kernel=kwargs['kernel'],
        n=kwargs['n'],
        rho_exponent=kwargs['rho_exponent'],
        replicates=kwargs[replicates_key],
        motifs=motifs,
        root_block=kwargs.get('root_block', 0),
        root_latent=kwargs.get('root_latent'),
        seed=kwargs['seed'],
        workers=kwargs.get('workers', 1),
        batches=kwargs.get('batches', DEFAULT_BATCHES),
    )
