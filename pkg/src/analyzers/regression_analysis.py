"""
Covariate regression on rooted densities
Binary vertex labels regressed on rooted densities and extra covariates
with a logit link, treating vertices as if they were an i.i.d. sample
"""
import logging
from typing import List, Optional, Sequence, Tuple

import pandas as pd

from ..counting.census import census
from ..inference.regression import RegressionFit, design_matrix, logistic_fit
from ..parsers.motif_parser import parse_motifs
from ..utils.errors import InputError
from ..utils.graph_utils import Graph
from ..utils.motif_utils import RootedMotif
from .base_analyzer import AnalysisResult, AnalyzerFactory, BaseAnalyzer

logger = logging.getLogger(__name__)


def regression_frame(graph: Graph, covariates: pd.DataFrame, motifs: Sequence[RootedMotif],
                     extra: Optional[Sequence[str]] = None,
                     workers: int = 1) -> Tuple[pd.DataFrame, List[str]]:
    """
    Join per-vertex densities with the covariate table

    Non-numeric extra columns are expanded into indicator columns (first
    level dropped). Vertices without a covariate row are left out.

    Returns:
        (table indexed by vertex, ordered design column names)
    """
    densities = census(graph, motifs, workers=workers)
    density_columns = [f'density_{label}' for label in densities.labels]
    frame = pd.DataFrame(densities.values, columns=density_columns)
    frame.index.name = 'vertex'
    frame = frame.join(covariates, how='inner')
    if frame.empty:
        raise InputError("no vertex has both a density and a covariate row")

    available = [c for c in covariates.columns if c != 'label']
    chosen = available if extra is None else list(extra)
    unknown = [c for c in chosen if c not in available]
    if unknown:
        raise InputError(f"unknown covariate column(s): {', '.join(unknown)}")
    categorical = [c for c in chosen if not pd.api.types.is_numeric_dtype(frame[c])]
    if categorical:
        frame = pd.get_dummies(frame, columns=categorical, drop_first=True, dtype=float)
    columns = density_columns + [
        c for c in frame.columns
        if c not in density_columns and c != 'label'
        and (c in chosen or any(c.startswith(f'{cat}_') for cat in categorical))
    ]
    return frame, columns


def fit_regression(graph: Graph, covariates: pd.DataFrame, motifs: Sequence[RootedMotif],
                   extra: Optional[Sequence[str]] = None, alpha: float = 0.05,
                   workers: int = 1) -> Tuple[RegressionFit, pd.DataFrame]:
    frame, columns = regression_frame(graph, covariates, motifs, extra=extra, workers=workers)
    X, names = design_matrix(frame, columns, intercept=True)
    fit = logistic_fit(X, frame['label'].to_numpy(), alpha=alpha, names=names)
    return fit, frame


@AnalyzerFactory.register
class RegressionAnalyzer(BaseAnalyzer):
    """Logistic regression of vertex labels on rooted densities"""

    def __init__(self):
        super().__init__(
            name="regress",
            description="Binomial regression with logit link of vertex labels on rooted densities"
        )
        self.required_inputs = ['graph', 'covariates']

        self.questions = [
            {
                'question': 'Which rooted densities enter the regression?',
                'key': 'motifs',
                'type': 'str',
                'default': 'triangle',
                'help': 'Comma-separated catalog names or motif JSON files'
            },
            {
                'question': 'Which extra covariate columns?',
                'key': 'extra',
                'type': 'str',
                'default': '',
                'help': 'Comma-separated column names; empty uses every extra column'
            },
            {
                'question': 'Confidence level complement',
                'key': 'alpha',
                'type': 'float',
                'default': 0.05,
                'help': 'Wald intervals have coverage 1 - alpha'
            },
            {'question': 'Workers', 'key': 'workers', 'type': 'int', 'default': 1,
             'help': 'Worker processes for counting'},
        ]

    def get_suggestions(self, **kwargs) -> List[str]:
        covariates = kwargs.get('covariates')
        if covariates is not None and 'label' in covariates:
            share = covariates['label'].mean()
            if share < 0.05 or share > 0.95:
                return ["Labels are very unbalanced; Wald intervals may be unreliable"]
        return []

    def analyze(self, **kwargs) -> AnalysisResult:
        """
        Required kwargs:
            graph: Graph
            covariates: DataFrame indexed by vertex id with a 0/1 'label' column

        Returns:
            AnalysisResult whose payload is the RegressionFit dictionary
        """
        graph: Graph = kwargs['graph']
        motifs = kwargs['motifs']
        if isinstance(motifs, str):
            motifs = parse_motifs(motifs)
        extra = kwargs.get('extra') or None
        if isinstance(extra, str):
            extra = [c.strip() for c in extra.split(',') if c.strip()]

        fit, frame = fit_regression(graph, kwargs['covariates'], motifs, extra=extra,
                                    alpha=kwargs['alpha'], workers=kwargs['workers'])

        result = AnalysisResult(self.name)
        result.payload = fit.to_dict()
        result.detailed_report = fit.to_dataframe()
        result.artifact = fit
        result.metadata = {
            'observations': len(frame),
            'positives': int(frame['label'].sum()),
            'motifs': [f.label for f in motifs],
        }
        significant = [name for name, p in zip(fit.names, fit.p_values) if p < fit.alpha]
        result.summary = (
            f"Logistic fit on {len(frame)} vertices, "
            f"{'converged' if fit.converged else 'NOT converged'} in {fit.iterations} iterations; "
            f"significant at {fit.alpha}: {', '.join(significant) or 'none'}"
        )
        for s in self.get_suggestions(**kwargs):
            result.add_recommendation(s)
        return result
