"""
Bundled sample graphs, kernels and covariate tables
"""

from .sample_data import (
    COUNTING_EXAMPLE_COUNTS,
    counting_example_graph,
    fixtures,
    school_dataset,
    three_block_kernel,
    write_fixtures,
)

__all__ = [
    'COUNTING_EXAMPLE_COUNTS',
    'counting_example_graph',
    'fixtures',
    'school_dataset',
    'three_block_kernel',
    'write_fixtures',
]
