"""
Degeneracy of rooted counts below the normal regime
When n rho^m -> 0 the count at a fixed vertex is 0 with probability tending
to one; this experiment tracks how often it is positive along a size schedule
"""
import logging
from typing import Dict, List, Sequence

import numpy as np
import pandas as pd

from ..counting.census import count_matrix
from ..models.kernel import Kernel, SampleSpec, derive_seed, sample_graph
from ..models.moments import expected_count, regime_scale
from ..parsers.motif_parser import parse_motifs
from ..utils.errors import InputError
from ..utils.motif_utils import RootedMotif
from ..utils.parallel import parallel_map
from .base_analyzer import AnalysisResult, AnalyzerFactory, BaseAnalyzer

logger = logging.getLogger(__name__)

_REPLICATE_TAG = 41
DEFAULT_SCHEDULE = (500, 1000, 2000, 4000)


def _positive_at_target(job) -> bool:
    kernel, n, rho, seed, motif = job
    spec = SampleSpec(n, rho, seed, latent_mode='sample-uniform', fixed={0: 0.5 * kernel.pi[0]})
    graph, _ = sample_graph(kernel, spec)
    return bool(count_matrix(graph, [motif], vertices=[0])[0, 0] > 0)


class SubcriticalReport:
    """Positive-count frequency per graph size"""

    def __init__(self, motif: RootedMotif, rows: List[Dict]):
        self.motif = motif
        self.rows = rows

    @property
    def frequencies(self) -> List[float]:
        return [row['frequency'] for row in self.rows]

    @property
    def decreasing(self) -> bool:
        """Frequencies non-increasing along the schedule, up to 2 binomial SEs"""
        for a, b in zip(self.rows, self.rows[1:]):
            slack = 2 * np.hypot(a['se'], b['se'])
            if b['frequency'] > a['frequency'] + slack:
                return False
        return True

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows)

    def to_dict(self) -> Dict:
        return {'motif': self.motif.label, 'm': float(self.motif.m),
                'schedule': self.rows, 'decreasing': self.decreasing}


def subcritical_experiment(kernel: Kernel, motif: RootedMotif, rho_exponent: float,
                           schedule: Sequence[int] = DEFAULT_SCHEDULE, replicates: int = 200,
                           seed: int = 0, workers: int = 1,
                           progress: bool = False) -> SubcriticalReport:
    """
    Fraction of replicates with X_F(G, 0) > 0 for each n in ``schedule``

    Vertex 0 sits at the midpoint of block 0; rho = n^(-rho_exponent).
    """
    if not schedule:
        raise InputError("schedule needs at least one graph size")
    rows = []
    for n in schedule:
        rho = float(n) ** (-rho_exponent)
        jobs = [(kernel, int(n), rho, derive_seed(seed, _REPLICATE_TAG, int(n), r), motif)
                for r in range(replicates)]
        hits = parallel_map(_positive_at_target, jobs, workers=workers,
                            desc=f"n={n}", progress=progress)
        frequency = float(np.mean(hits))
        rows.append({
            'n': int(n),
            'rho': rho,
            'regime_scale': regime_scale(motif, int(n), rho),
            'expected_count': expected_count(kernel, motif, 0, int(n), rho),
            'frequency': frequency,
            'se': float(np.sqrt(frequency * (1 - frequency) / replicates)),
        })
        logger.info("subcritical %s n=%d: P(X>0) ~ %.3f", motif.label, n, frequency)
    return SubcriticalReport(motif, rows)


@AnalyzerFactory.register
class SubcriticalAnalyzer(BaseAnalyzer):
    """Checks that counts degenerate at 0 when n rho^m vanishes"""

    def __init__(self):
        super().__init__(
            name="subcritical",
            description="Frequency of a positive rooted count along a graph-size schedule"
        )
        self.required_inputs = ['kernel']

        self.questions = [
            {'question': 'Motif', 'key': 'motifs', 'type': 'str', 'default': 'triangle',
             'help': 'A single catalog name or motif JSON file'},
            {'question': 'Sparsity exponent a (rho = n^-a)', 'key': 'rho_exponent', 'type': 'float',
             'default': 0.8, 'help': 'Subcritical when a > 1/m'},
            {'question': 'Graph sizes', 'key': 'schedule', 'type': 'str',
             'default': ','.join(map(str, DEFAULT_SCHEDULE)), 'help': 'Comma-separated sizes'},
            {'question': 'Replicates per size', 'key': 'replicates', 'type': 'int', 'default': 200,
             'help': 'Independent graphs per size'},
            {'question': 'Seed', 'key': 'seed', 'type': 'int', 'default': 0, 'help': 'Base seed'},
            {'question': 'Workers', 'key': 'workers', 'type': 'int', 'default': 1,
             'help': 'Worker processes'},
        ]

    def analyze(self, **kwargs) -> AnalysisResult:
        motifs = kwargs['motifs']
        if isinstance(motifs, str):
            motifs = parse_motifs(motifs)
        if len(motifs) != 1:
            raise InputError("the subcritical experiment takes exactly one motif")
        try:
            schedule = [int(v) for v in str(kwargs['schedule']).split(',') if v.strip()]
        except ValueError:
            raise InputError(f"cannot read schedule {kwargs['schedule']!r}")

        report = subcritical_experiment(
            kwargs['kernel'], motifs[0], kwargs['rho_exponent'], schedule,
            replicates=kwargs['replicates'], seed=kwargs['seed'], workers=kwargs['workers'],
            progress=kwargs.get('progress', False),
        )
        result = AnalysisResult(self.name)
        result.payload = report.to_dict()
        result.detailed_report = report.to_dataframe()
        result.metadata = {'kernel': kwargs['kernel'].to_dict(), 'seed': kwargs['seed'],
                           'replicates': kwargs['replicates'],
                           'rho_exponent': kwargs['rho_exponent']}
        result.artifact = report
        trend = ', '.join(f"n={r['n']}: {r['frequency']:.3f}" for r in report.rows)
        result.summary = (f"P(X_{motifs[0].label} > 0) {trend} "
                          f"({'decreasing' if report.decreasing else 'NOT decreasing'})")
        if any(r['regime_scale'] > 1 for r in report.rows):
            result.add_recommendation("Some sizes have n rho^m > 1; the frequency need not vanish there")
        return result
