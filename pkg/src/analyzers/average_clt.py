"""
Averaged statistics of rooted densities
For f Lipschitz in its first argument, sqrt(n) (mean_i f(s_i, y_i) - E f)
is compared with the exact covariance of f(s_x, y) under the blockmodel
"""
import logging
import warnings
from typing import Callable, Dict, Tuple, Union

import numpy as np
import pandas as pd
from scipy import stats

from ..counting.census import census
from ..inference.bootstrap import inverse_sqrt
from ..models.kernel import SampleSpec, derive_seed, sample_graph, stream
from ..models.moments import block_densities, regime_scale
from ..utils.config import KS_LEVEL, ExperimentConfig
from ..utils.errors import DegenerateModelError, InputError
from ..utils.parallel import parallel_map
from .base_analyzer import AnalysisResult, AnalyzerFactory, BaseAnalyzer
from .vertex_clt import experiment_config

logger = logging.getLogger(__name__)

_REPLICATE_TAG = 51
_LABEL_STREAM = 52
_DEGENERATE_VARIANCE = 1e-12

TestFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _identity(s: np.ndarray, y: np.ndarray) -> np.ndarray:
    return s


def _split_by_label(s: np.ndarray, y: np.ndarray) -> np.ndarray:
    y = y[:, None]
    return np.hstack([s * y, s * (1 - y)])


def _clipped(s: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.minimum(s, 2.0)


TEST_FUNCTIONS: Dict[str, TestFunction] = {
    'identity': _identity,
    'label': _split_by_label,
    'clipped': _clipped,
}


def get_test_function(f: Union[str, TestFunction]) -> TestFunction:
    if callable(f):
        return f
    if f not in TEST_FUNCTIONS:
        raise InputError(f"Unknown test function: {f}. Available: {', '.join(TEST_FUNCTIONS)}")
    return TEST_FUNCTIONS[f]


def exact_moments(config: ExperimentConfig, f: TestFunction,
                  label_probability: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    E f(s_x, y) and Cov f(s_x, y) with x ~ U[0,1] and y ~ Bernoulli(p) independent

    s_x is constant on each block, so both moments are finite sums over
    (block, label) pairs.
    """
    s = block_densities(config.kernel, config.motifs)
    weights, rows = [], []
    for label, prob in ((1.0, label_probability), (0.0, 1 - label_probability)):
        if prob <= 0:
            continue
        values = np.asarray(f(s, np.full(len(s), label)), dtype=float)
        rows.append(values.reshape(len(s), -1))
        weights.append(config.kernel.pi * prob)
    values = np.vstack(rows)
    w = np.concatenate(weights)
    mean = w @ values
    centered = values - mean
    return mean, (centered * w[:, None]).T @ centered


def _replicate_average(job) -> np.ndarray:
    kernel, n, rho, seed, motifs, f, p = job
    graph, _ = sample_graph(kernel, SampleSpec(n, rho, seed))
    s = census(graph, motifs, rho=rho).values
    y = (stream(seed, _LABEL_STREAM).random(n) < p).astype(float)
    return np.asarray(f(s, y), dtype=float).reshape(n, -1).mean(axis=0)


class AverageReport:
    """sqrt(n)-scaled deviations of the averaged statistic and their exact covariance"""

    def __init__(self, deviations: np.ndarray, reference: np.ndarray, sigma: np.ndarray):
        self.deviations = np.atleast_2d(deviations)
        self.reference = reference
        self.sigma = sigma
        self.empirical = np.atleast_2d(np.cov(self.deviations, rowvar=False, ddof=1))
        self.degenerate = bool(np.max(np.diag(sigma)) < _DEGENERATE_VARIANCE)
        exact_sd = np.sqrt(np.diag(sigma))
        self.variance_ratio = np.full(len(exact_sd), np.nan)
        self.ks_pvalues = [None] * len(exact_sd)
        self.joint_ks_pvalue = None
        if not self.degenerate:
            positive = exact_sd > np.sqrt(_DEGENERATE_VARIANCE)
            self.variance_ratio[positive] = np.diag(self.empirical)[positive] / np.diag(sigma)[positive]
            for c in np.flatnonzero(positive):
                self.ks_pvalues[c] = float(stats.kstest(self.deviations[:, c] / exact_sd[c], 'norm').pvalue)
            try:
                t = self.deviations @ inverse_sqrt(sigma)
                self.joint_ks_pvalue = float(
                    stats.kstest(np.sum(t ** 2, axis=1), 'chi2', args=(t.shape[1],)).pvalue)
            except DegenerateModelError:
                logger.info("exact covariance is singular; skipping the joint KS test")

    @property
    def max_abs_deviation(self) -> float:
        return float(np.max(np.abs(self.deviations)))

    def normality_rejected(self, level: float = KS_LEVEL) -> bool:
        pvalues = [p for p in self.ks_pvalues if p is not None]
        return any(p < level for p in pvalues)

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame({
            'coordinate': np.arange(len(self.reference)),
            'reference': self.reference,
            'exact_variance': np.diag(self.sigma),
            'empirical_variance': np.diag(self.empirical),
            'variance_ratio': self.variance_ratio,
            'ks_pvalue': self.ks_pvalues,
        })

    def to_dict(self) -> Dict:
        return {
            'replicates': len(self.deviations),
            'reference': self.reference.tolist(),
            'sigma': self.sigma.tolist(),
            'empirical_covariance': self.empirical.tolist(),
            'variance_ratio': [None if np.isnan(v) else float(v) for v in self.variance_ratio],
            'ks_pvalues': self.ks_pvalues,
            'joint_ks_pvalue': self.joint_ks_pvalue,
            'degenerate': self.degenerate,
            'max_abs_deviation': self.max_abs_deviation,
        }


def average_clt_experiment(config: ExperimentConfig, f: Union[str, TestFunction] = 'identity',
                           label_probability: float = 0.5,
                           progress: bool = False) -> AverageReport:
    """
    Replicate sqrt(n) (mean_i f(s_i, y_i) - E f(s_x, y)) over ``config.replicates`` graphs

    Densities use the true rho. Labels y_i are i.i.d. Bernoulli(label_probability).
    A kernel with Var s_x = 0 is reported as degenerate instead of tested.
    """
    function = get_test_function(f)
    low = [m.label for m in config.motifs if m.order >= 3
           and regime_scale(m, config.n, config.rho, averaged=True) <= 1]
    if low:
        message = f"n rho^gamma <= 1 for {', '.join(low)}: the averaged statistic may not be normal"
        logger.warning(message)
        warnings.warn(message)
    reference, sigma = exact_moments(config, function, label_probability)
    if np.max(np.diag(sigma)) < _DEGENERATE_VARIANCE:
        message = ("Var s_x = 0 under this kernel: the sqrt(n)-scaled average collapses "
                   "and no normal limit is tested")
        logger.warning(message)
        warnings.warn(message)

    jobs = [(config.kernel, config.n, config.rho, derive_seed(config.seed, _REPLICATE_TAG, r),
             list(config.motifs), function, label_probability) for r in range(config.replicates)]
    averages = np.vstack(parallel_map(_replicate_average, jobs, workers=config.workers,
                                      desc="replicates", progress=progress))
    deviations = np.sqrt(config.n) * (averages - reference)
    return AverageReport(deviations, reference, sigma)


@AnalyzerFactory.register
class AverageCltAnalyzer(BaseAnalyzer):
    """Monte Carlo check of the averaged-density central limit"""

    def __init__(self):
        super().__init__(
            name="average-clt",
            description="Empirical vs exact covariance of sqrt(n)-scaled averages of f(s_i, y_i)"
        )
        self.required_inputs = ['kernel']

        self.questions = [
            {'question': 'Graph size', 'key': 'n', 'type': 'int', 'default': 4000,
             'help': 'Vertices per replicate'},
            {'question': 'Sparsity exponent a (rho = n^-a)', 'key': 'rho_exponent', 'type': 'float',
             'default': 1.0 / 3.0, 'help': 'Default 1/3'},
            {'question': 'Replicates', 'key': 'replicates', 'type': 'int', 'default': 500,
             'help': 'Independent graphs L'},
            {'question': 'Motifs', 'key': 'motifs', 'type': 'str', 'default': 'triangle',
             'help': 'Comma-separated catalog names or motif JSON files'},
            {'question': 'Test function', 'key': 'function', 'type': 'str', 'default': 'identity',
             'help': 'identity, label (s 1{y=1}, s 1{y=0}) or clipped (min(s, 2))'},
            {'question': 'Label probability', 'key': 'label_probability', 'type': 'float',
             'default': 0.5, 'help': 'P(y_i = 1)'},
            {'question': 'Seed', 'key': 'seed', 'type': 'int', 'default': 0, 'help': 'Base seed'},
            {'question': 'Workers', 'key': 'workers', 'type': 'int', 'default': 1,
             'help': 'Worker processes'},
        ]

    def analyze(self, **kwargs) -> AnalysisResult:
        config = experiment_config(kwargs)
        report = average_clt_experiment(config, kwargs['function'], kwargs['label_probability'],
                                        progress=kwargs.get('progress', False))
        result = AnalysisResult(self.name)
        result.payload = report.to_dict()
        result.detailed_report = report.to_dataframe()
        result.metadata = {**config.to_dict(), 'function': kwargs['function'],
                           'label_probability': kwargs['label_probability']}
        result.artifact = report
        if report.degenerate:
            result.summary = (f"degenerate kernel: max |sqrt(n) deviation| = "
                              f"{report.max_abs_deviation:.4g}")
        else:
            ratios = ', '.join(f"{v:.3f}" for v in report.variance_ratio if not np.isnan(v))
            result.summary = (f"empirical/exact variance: {ratios}; normality "
                              f"{'rejected' if report.normality_rejected() else 'not rejected'} "
                              f"at {KS_LEVEL}")
        return result
