"""
Bundled sample data: a small graph with hand-checked rooted counts, the
three-block kernel of the default experiments and a synthetic school-like
covariate dataset with planted regression coefficients
"""
import logging
from pathlib import Path
from typing import Dict, Tuple, Union

import numpy as np
import pandas as pd
from scipy.special import expit

from ..counting.census import census
from ..models.kernel import Kernel, SampleSpec, derive_seed, sample_graph, stream
from ..parsers.edge_list_parser import write_edge_list
from ..parsers.kernel_parser import write_kernel
from ..utils.graph_utils import Graph
from ..utils.motif_utils import get_motif

logger = logging.getLogger(__name__)

# Vertex 0 plays the part of "i" and vertex 1 of "j".
COUNTING_EXAMPLE_EDGES = [
    (2, 3), (3, 4), (2, 5), (5, 6), (5, 7), (2, 7), (3, 6), (8, 4), (9, 7),
    (6, 2), (2, 1), (9, 1), (8, 1), (10, 1), (7, 1), (0, 3), (4, 0), (5, 0),
]

COUNTING_EXAMPLE_COUNTS = {
    0: {'triangle': 1, 'cherry': 8, 'diamond': 0, 'square': 2},
    1: {'triangle': 2, 'cherry': 9, 'diamond': 1, 'square': 2},
}

THREE_BLOCK_B = [[0.8, 0.2, 0.1],
                 [0.2, 0.6, 0.2],
                 [0.1, 0.2, 0.7]]

SCHOOL_GRADES = ('g7', 'g8', 'g9', 'g10')
SCHOOL_B = [[0.9, 0.3, 0.1, 0.05],
            [0.3, 0.9, 0.3, 0.1],
            [0.1, 0.3, 0.9, 0.3],
            [0.05, 0.1, 0.3, 0.9]]
PLANTED_BETA = {'intercept': 0.5, 'density_triangle': 2.0}

_SCHOOL_TAG = 71


def counting_example_graph() -> Graph:
    """11-vertex graph whose rooted counts at vertices 0 and 1 are known"""
    return Graph.from_edges(11, COUNTING_EXAMPLE_EDGES)


def three_block_kernel() -> Kernel:
    """Three equal blocks with assortative connection probabilities"""
    return Kernel(THREE_BLOCK_B, [1 / 3, 1 / 3, 1 / 3])


def school_kernel() -> Kernel:
    """Four equal 'grade' blocks, friendships mostly within and between adjacent grades"""
    return Kernel(SCHOOL_B, np.full(len(SCHOOL_GRADES), 1 / len(SCHOOL_GRADES)))


def school_dataset(n: int = 2000, seed: int = 0, beta: Dict[str, float] = None,
                   rho: float = None) -> Tuple[Graph, pd.DataFrame]:
    """
    Synthetic friendship graph with binary vertex labels

    Labels follow P(y_i = 1) = expit(beta_0 + beta_1 * s_i(triangle)), with
    densities normalized by the estimated sparsity. A 'grade' column carries
    the block label and has no effect on y.

    Returns:
        (graph, covariates indexed by vertex with 'label' and 'grade')
    """
    beta = dict(PLANTED_BETA if beta is None else beta)
    rho = n ** (-1.0 / 3.0) if rho is None else rho
    kernel = school_kernel()
    graph, latents = sample_graph(kernel, SampleSpec(n, rho, derive_seed(seed, _SCHOOL_TAG)))
    densities = census(graph, [get_motif('triangle')]).column('triangle')
    probability = expit(beta['intercept'] + beta['density_triangle'] * densities)
    labels = (stream(seed, _SCHOOL_TAG, 1).random(n) < probability).astype(int)
    covariates = pd.DataFrame({
        'label': labels,
        'grade': [SCHOOL_GRADES[b] for b in latents.block],
    }, index=pd.RangeIndex(n, name='vertex'))
    logger.debug("school dataset: n=%d, %d positive labels", n, labels.sum())
    return graph, covariates


def fixtures() -> Dict[str, object]:
    """All bundled assets keyed by name"""
    graph, covariates = school_dataset()
    return {
        'counting_example': counting_example_graph(),
        'counting_example_counts': COUNTING_EXAMPLE_COUNTS,
        'three_block_kernel': three_block_kernel(),
        'school_graph': graph,
        'school_covariates': covariates,
        'planted_beta': dict(PLANTED_BETA),
    }


def write_fixtures(directory: Union[str, Path], n: int = 2000, seed: int = 0) -> Dict[str, str]:
    """
    Write the sample files used by the command line examples

    Returns:
        Mapping from asset name to written path
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {
        'counting_example': directory / 'counting_example.txt',
        'three_block_kernel': directory / 'three_block_kernel.json',
        'school_graph': directory / 'school_graph.txt',
        'school_covariates': directory / 'school_covariates.csv',
    }
    write_edge_list(counting_example_graph(), paths['counting_example'])
    write_kernel(three_block_kernel(), paths['three_block_kernel'])
    graph, covariates = school_dataset(n=n, seed=seed)
    write_edge_list(graph, paths['school_graph'])
    covariates.rename_axis('vertex_id').reset_index().to_csv(paths['school_covariates'], index=False)
    return {name: str(path) for name, path in paths.items()}
