"""
Readers for graphs, motifs, kernels and vertex covariates
"""

from .covariate_parser import CovariateParser, load_covariates
from .edge_list_parser import EdgeListParser, load_graph, write_edge_list
from .kernel_parser import KernelParser, load_kernel, write_kernel
from .motif_parser import MotifParser, motif_from_dict, parse_motifs

__all__ = [
    'CovariateParser',
    'EdgeListParser',
    'KernelParser',
    'MotifParser',
    'load_covariates',
    'load_graph',
    'load_kernel',
    'motif_from_dict',
    'parse_motifs',
    'write_edge_list',
    'write_kernel',
]
