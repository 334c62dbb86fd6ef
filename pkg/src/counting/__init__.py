"""
Rooted subgraph counting: backtracking counts, closed forms, the per-vertex
census and the overlap-set algebra for products of counts
"""

from .census import CountVector, DensityMatrix, census, count_matrix
from .overlap import OverlapSet, gluing_product, inductive_coefficients, overlap_set, verify_product_identity
from .rooted_counts import embedding_count, rooted_copies, rooted_count

__all__ = [
    'CountVector',
    'DensityMatrix',
    'OverlapSet',
    'census',
    'count_matrix',
    'embedding_count',
    'gluing_product',
    'inductive_coefficients',
    'overlap_set',
    'rooted_copies',
    'rooted_count',
    'verify_product_identity',
]
