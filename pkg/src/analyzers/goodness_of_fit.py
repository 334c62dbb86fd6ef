"""
Vertex-level goodness-of-fit test
Fits a blockmodel, bootstraps density moments, standardizes every vertex
and compares ||t_i||^2 against a bootstrap critical value for the maximum
"""
import logging
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..counting.census import DensityMatrix, census
from ..inference.blockmodel_fit import BlockFit, fit_blockmodel
from ..inference.bootstrap import (BootstrapMoments, bonferroni_critical_value, bootstrap_moments,
                                   critical_value,
                                   replicate_statistics, standardize)
from ..parsers.motif_parser import parse_motifs
from ..utils.config import DEFAULT_ALPHA, DEFAULT_BOOTSTRAP_REPLICATES, DEFAULT_CRITICAL_REPLICATES
from ..utils.errors import DegenerateModelError
from ..utils.graph_utils import Graph
from ..utils.motif_utils import RootedMotif
from .base_analyzer import AnalysisResult, AnalyzerFactory, BaseAnalyzer

logger = logging.getLogger(__name__)


class GofResult:
    """Per-vertex standardized statistics and the test decision"""

    def __init__(self, t_hat: np.ndarray, critical_value: float, alpha: float,
                 fit: Optional[BlockFit] = None, moments: Optional[BootstrapMoments] = None,
                 densities: Optional[DensityMatrix] = None,
                 replicate_max: Optional[np.ndarray] = None,
                 bonferroni_value: Optional[float] = None, pooled: bool = False):
        self.t_hat = np.asarray(t_hat, dtype=float)
        self.stat = np.sum(self.t_hat ** 2, axis=1)
        self.critical_value = float(critical_value)
        self.alpha = alpha
        self.rejected: List[int] = np.flatnonzero(self.stat > self.critical_value).tolist()
        self.fit = fit
        self.moments = moments
        self.densities = densities
        self.replicate_max = replicate_max
        self.bonferroni_value = bonferroni_value
        self.pooled = pooled

    @property
    def rejected_bonferroni(self) -> List[int]:
        if self.bonferroni_value is None:
            return []
        return np.flatnonzero(self.stat > self.bonferroni_value).tolist()

    @property
    def any_rejected(self) -> bool:
        return bool(self.rejected)

    def to_dataframe(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.t_hat, columns=[f't_{j}' for j in range(self.t_hat.shape[1])])
        if self.densities is not None:
            frame.columns = [f't_{label}' for label in self.densities.labels]
        frame.insert(0, 'vertex_id', np.arange(len(self.stat)))
        if self.fit is not None:
            frame.insert(1, 'block', self.fit.assignment)
        frame['stat'] = self.stat
        frame['rejected'] = self.stat > self.critical_value
        return frame

    def to_dict(self) -> Dict:
        data = {
            'k': self.fit.k if self.fit is not None else None,
            'B_hat': self.fit.B_hat.tolist() if self.fit is not None else None,
            'alpha': self.alpha,
            't_hat': self.t_hat.tolist(),
            'stat': self.stat.tolist(),
            'critical_value': self.critical_value,
            'pooled': self.pooled,
            'rejected': self.rejected,
            'bonferroni_value': self.bonferroni_value,
            'rejected_bonferroni': self.rejected_bonferroni,
        }
        if self.fit is not None:
            data['fit'] = self.fit.to_dict()
        if self.moments is not None:
            data['bootstrap'] = self.moments.to_dict()
        return data


def gof_test(graph: Graph, motifs: Sequence[RootedMotif], alpha: float = DEFAULT_ALPHA,
             replicates: int = DEFAULT_BOOTSTRAP_REPLICATES,
             critical_replicates: int = DEFAULT_CRITICAL_REPLICATES, seed: int = 0,
             pooled: bool = False, scan: bool = True, workers: int = 1,
             progress: bool = False, fit: Optional[BlockFit] = None) -> GofResult:
    """
    Run fit_blockmodel -> bootstrap_moments -> standardize -> critical_value

    Raises:
        DegenerateModelError: On an empty or complete graph, or a near-singular
            bootstrap covariance
    """
    if graph.n >= 2 and graph.edge_count == graph.n * (graph.n - 1) // 2:
        raise DegenerateModelError("complete graph: every density equals 1 and has zero variance")
    densities = census(graph, motifs, workers=workers)
    fit = fit or fit_blockmodel(graph, seed=seed, scan=scan)
    moments = bootstrap_moments(fit, graph.n, replicates, motifs, seed,
                                workers=workers, progress=progress)
    t_hat = standardize(densities, moments, fit.assignment)
    statistics = replicate_statistics(fit, graph.n, critical_replicates, seed, moments,
                                      workers=workers, progress=progress)
    value = critical_value(fit, graph.n, alpha, critical_replicates, seed, moments,
                           pooled=pooled, statistics=statistics)
    result = GofResult(
        t_hat, value, alpha, fit=fit, moments=moments, densities=densities,
        replicate_max=statistics.max(axis=1),
        bonferroni_value=bonferroni_critical_value(graph.n, alpha, len(motifs)),
        pooled=pooled,
    )
    logger.info("gof: %d of %d vertices rejected (critical value %.3f)",
                len(result.rejected), graph.n, value)
    return result


@AnalyzerFactory.register
class GoodnessOfFitAnalyzer(BaseAnalyzer):
    """
    Tests every vertex of an observed graph against the blockmodel fitted to it
    """

    def __init__(self):
        super().__init__(
            name="gof",
            description="Vertex-level goodness-of-fit of a fitted blockmodel using rooted densities"
        )
        self.required_inputs = ['graph']

        self.questions = [
            {
                'question': 'Which rooted motifs form the density vector?',
                'key': 'motifs',
                'type': 'str',
                'default': 'triangle,square',
                'help': 'Comma-separated catalog names or motif JSON files'
            },
            {
                'question': 'Test level',
                'key': 'alpha',
                'type': 'float',
                'default': DEFAULT_ALPHA,
                'help': 'Family-wise level of the max-statistic test'
            },
            {
                'question': 'Bootstrap replicates for the moments',
                'key': 'replicates',
                'type': 'int',
                'default': DEFAULT_BOOTSTRAP_REPLICATES,
                'help': 'N graphs simulated to estimate per-block means and covariances'
            },
            {
                'question': 'Replicates for the critical value',
                'key': 'critical_replicates',
                'type': 'int',
                'default': DEFAULT_CRITICAL_REPLICATES,
                'help': 'R graphs simulated to calibrate the maximum statistic'
            },
            {
                'question': 'Pool all replicate statistics before taking the quantile?',
                'key': 'pooled',
                'type': 'bool',
                'default': False,
                'help': 'Default takes one maximum per replicate'
            },
            {
                'question': 'Scan the number of blocks around the Louvain value?',
                'key': 'scan',
                'type': 'bool',
                'default': True,
                'help': 'Chooses k by AIC among merges and splits of the Louvain blocks'
            },
            {'question': 'Seed', 'key': 'seed', 'type': 'int', 'default': 0, 'help': 'Base seed'},
            {'question': 'Workers', 'key': 'workers', 'type': 'int', 'default': 1,
             'help': 'Worker processes'},
        ]

    def get_suggestions(self, **kwargs) -> List[str]:
        suggestions = []
        alpha = kwargs.get('alpha', DEFAULT_ALPHA)
        R = kwargs.get('critical_replicates', DEFAULT_CRITICAL_REPLICATES)
        if R < 20 / alpha:
            suggestions.append(f"Use at least {int(np.ceil(20 / alpha))} critical-value replicates")
        graph = kwargs.get('graph')
        if graph is not None and graph.n < 100:
            suggestions.append("Small graphs give unstable bootstrap covariances")
        return suggestions

    def analyze(self, **kwargs) -> AnalysisResult:
        """
        Required kwargs:
            graph: Graph - observed graph

        Returns:
            AnalysisResult whose payload is the GofResult dictionary
        """
        graph: Graph = kwargs['graph']
        motifs = kwargs['motifs']
        if isinstance(motifs, str):
            motifs = parse_motifs(motifs)

        gof = gof_test(
            graph, motifs,
            alpha=kwargs['alpha'],
            replicates=kwargs['replicates'],
            critical_replicates=kwargs['critical_replicates'],
            seed=kwargs['seed'],
            pooled=kwargs['pooled'],
            scan=kwargs['scan'],
            workers=kwargs['workers'],
            progress=kwargs.get('progress', False),
            fit=kwargs.get('fit'),
        )

        result = AnalysisResult(self.name)
        result.payload = gof.to_dict()
        result.detailed_report = gof.to_dataframe()
        result.metadata = {
            'n': graph.n,
            'edges': graph.edge_count,
            'motifs': [f.label for f in motifs],
            'k': gof.fit.k,
        }
        result.artifact = gof
        result.summary = (
            f"{len(gof.rejected)} of {graph.n} vertices rejected at alpha={gof.alpha} "
            f"(bootstrap critical value {gof.critical_value:.3f}, "
            f"Bonferroni {gof.bonferroni_value:.3f}, k={gof.fit.k})"
        )
        for s in self.get_suggestions(**kwargs):
            result.add_recommendation(s)
        return result
