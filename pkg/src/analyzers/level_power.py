"""
Level and power of the vertex goodness-of-fit test
Each pipeline samples a graph from a known blockmodel (optionally perturbed
by triadic closure), runs the full test on it and records whether any vertex
is rejected
"""
import logging
from typing import Dict, List, Sequence

import numpy as np
import pandas as pd
from scipy import stats

from ..inference.perturbation import triadic_closure
from ..models.kernel import Kernel, SampleSpec, derive_seed, sample_graph
from ..parsers.motif_parser import parse_motifs
from ..utils.config import DEFAULT_ALPHA, DEFAULT_BOOTSTRAP_REPLICATES, DEFAULT_CRITICAL_REPLICATES
from ..utils.errors import DegenerateModelError
from ..utils.motif_utils import RootedMotif
from ..utils.parallel import parallel_map
from .base_analyzer import AnalysisResult, AnalyzerFactory, BaseAnalyzer
from .goodness_of_fit import gof_test

logger = logging.getLogger(__name__)

_PIPELINE_TAG = 61
_PERTURB_TAG = 62
_BAND_LEVEL = 0.99


def _pipeline(job) -> Dict:
    kernel, n, rho, seed, motifs, alpha, N, R, perturb = job
    graph, _ = sample_graph(kernel, SampleSpec(n, rho, seed))
    added = 0
    if perturb:
        graph, info = triadic_closure(graph, derive_seed(seed, _PERTURB_TAG))
        added = len(info['added_edges'])
    try:
        gof = gof_test(graph, motifs, alpha=alpha, replicates=N, critical_replicates=R, seed=seed)
    except DegenerateModelError as e:
        logger.warning("pipeline with seed %d skipped: %s", seed, e)
        return {'seed': seed, 'skipped': True, 'rejected': False,
                'rejected_bonferroni': False, 'k': None, 'added_edges': added}
    return {
        'seed': seed,
        'skipped': False,
        'rejected': gof.any_rejected,
        'rejected_bonferroni': bool(gof.rejected_bonferroni),
        'k': gof.fit.k,
        'critical_value': gof.critical_value,
        'bonferroni_value': gof.bonferroni_value,
        'max_stat': float(gof.stat.max()),
        'added_edges': added,
    }


def binomial_band(trials: int, p: float, level: float = _BAND_LEVEL) -> List[float]:
    """Central binomial interval for the rejection rate at ``level``"""
    low, high = stats.binom.interval(level, trials, p)
    return [float(low) / trials, float(high) / trials]


class RejectionReport:
    """Rejection rates over pipelines for the bootstrap and Bonferroni critical values"""

    def __init__(self, runs: List[Dict], alpha: float, perturbed: bool):
        self.runs = runs
        self.alpha = alpha
        self.perturbed = perturbed
        used = [r for r in runs if not r['skipped']]
        self.pipelines = len(used)
        self.skipped = len(runs) - len(used)
        self.rate = float(np.mean([r['rejected'] for r in used])) if used else float('nan')
        self.rate_bonferroni = (float(np.mean([r['rejected_bonferroni'] for r in used]))
                                if used else float('nan'))

    @property
    def band(self) -> List[float]:
        return binomial_band(self.pipelines, self.alpha)

    @property
    def compatible(self) -> bool:
        """
        Null: rate inside the 99% binomial band around alpha.
        Perturbed: the 99% Clopper-Pearson upper bound of the rate reaches 0.99.
        """
        if not self.pipelines:
            return False
        if self.perturbed:
            hits = int(round(self.rate * self.pipelines))
            ci = stats.binomtest(hits, self.pipelines).proportion_ci(confidence_level=_BAND_LEVEL)
            return ci.high >= _BAND_LEVEL
        low, high = self.band
        return low <= self.rate <= high

    def describe(self) -> str:
        """One-line summary; skipped pipelines are left out of the rate"""
        target = '1' if self.perturbed else self.alpha
        return (
            f"{'power' if self.perturbed else 'level'}: rejection rate {self.rate:.3f} "
            f"over {self.pipelines} pipelines, {self.skipped} skipped as degenerate "
            f"(Bonferroni {self.rate_bonferroni:.3f}); "
            f"{'compatible' if self.compatible else 'NOT compatible'} with {target}"
        )

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(self.runs)

    def to_dict(self) -> Dict:
        return {
            'perturbed': self.perturbed,
            'alpha': self.alpha,
            'pipelines': self.pipelines,
            'skipped': self.skipped,
            'rejection_rate': self.rate,
            'rejection_rate_bonferroni': self.rate_bonferroni,
            'band': self.band if self.pipelines and not self.perturbed else None,
            'compatible': self.compatible,
        }


def level_power_experiment(kernel: Kernel, n: int, rho: float, motifs: Sequence[RootedMotif],
                           pipelines: int, seed: int, alpha: float = DEFAULT_ALPHA,
                           replicates: int = DEFAULT_BOOTSTRAP_REPLICATES,
                           critical_replicates: int = DEFAULT_CRITICAL_REPLICATES,
                           perturb: bool = False, workers: int = 1,
                           progress: bool = False) -> RejectionReport:
    """
    Run ``pipelines`` independent goodness-of-fit pipelines

    With ``perturb`` every sampled graph goes through triadic closure
    (5% of vertices, closure probability 0.05) before testing, which gives
    the power; without it the rejection rate estimates the level.
    """
    jobs = [(kernel, n, rho, derive_seed(seed, _PIPELINE_TAG, p), list(motifs), alpha,
             replicates, critical_replicates, perturb) for p in range(pipelines)]
    runs = parallel_map(_pipeline, jobs, workers=workers, desc="pipelines", progress=progress)
    report = RejectionReport(runs, alpha, perturb)
    logger.info("%s: rejection rate %.3f over %d pipelines (Bonferroni %.3f)",
                'power' if perturb else 'level', report.rate, report.pipelines,
                report.rate_bonferroni)
    return report


@AnalyzerFactory.register
class LevelPowerAnalyzer(BaseAnalyzer):
    """Realized level (null) or power (triadic closure) of the goodness-of-fit test"""

    def __init__(self):
        super().__init__(
            name="level-power",
            description="Rejection rate of the goodness-of-fit test over simulated pipelines"
        )
        self.required_inputs = ['kernel']

        self.questions = [
            {'question': 'Graph size', 'key': 'n', 'type': 'int', 'default': 200,
             'help': 'Vertices per pipeline'},
            {'question': 'Sparsity exponent a (rho = n^-a)', 'key': 'rho_exponent', 'type': 'float',
             'default': 1.0 / 3.0, 'help': 'Default 1/3'},
            {'question': 'Pipelines', 'key': 'pipelines', 'type': 'int', 'default': 200,
             'help': 'Independent sampled graphs'},
            {'question': 'Perturb by triadic closure?', 'key': 'perturb', 'type': 'bool',
             'default': False, 'help': 'False measures the level, True the power'},
            {'question': 'Motifs', 'key': 'motifs', 'type': 'str', 'default': 'triangle,square',
             'help': 'Comma-separated catalog names or motif JSON files'},
            {'question': 'Test level', 'key': 'alpha', 'type': 'float', 'default': DEFAULT_ALPHA,
             'help': 'Nominal level'},
            {'question': 'Bootstrap replicates', 'key': 'replicates', 'type': 'int',
             'default': DEFAULT_BOOTSTRAP_REPLICATES, 'help': 'N per pipeline'},
            {'question': 'Critical-value replicates', 'key': 'critical_replicates', 'type': 'int',
             'default': DEFAULT_CRITICAL_REPLICATES, 'help': 'R per pipeline'},
            {'question': 'Seed', 'key': 'seed', 'type': 'int', 'default': 0, 'help': 'Base seed'},
            {'question': 'Workers', 'key': 'workers', 'type': 'int', 'default': 1,
             'help': 'Worker processes (one pipeline each)'},
        ]

    def analyze(self, **kwargs) -> AnalysisResult:
        motifs = kwargs['motifs']
        if isinstance(motifs, str):
            motifs = parse_motifs(motifs)
        n = kwargs['n']
        rho = float(n) ** (-kwargs['rho_exponent'])
        report = level_power_experiment(
            kwargs['kernel'], n, rho, motifs, kwargs['pipelines'], kwargs['seed'],
            alpha=kwargs['alpha'], replicates=kwargs['replicates'],
            critical_replicates=kwargs['critical_replicates'], perturb=kwargs['perturb'],
            workers=kwargs['workers'], progress=kwargs.get('progress', False),
        )
        result = AnalysisResult(self.name)
        result.payload = report.to_dict()
        result.detailed_report = report.to_dataframe()
        result.metadata = {'kernel': kwargs['kernel'].to_dict(), 'n': n, 'rho': rho,
                           'motifs': [m.label for m in motifs], 'seed': kwargs['seed']}
        result.artifact = report
        result.summary = report.describe()
        if report.skipped:
            result.add_recommendation(f"{report.skipped} pipelines hit a degenerate fit and were skipped")
        return result
