"""
Blockmodel kernels, seeded graph sampling and exact count moments
"""

from .kernel import Kernel, LatentAssignment, SampleSpec, sample_graph
from .moments import covariance_count, expected_count, moment_vector, theoretical_density, variance_count

__all__ = [
    'Kernel',
    'LatentAssignment',
    'SampleSpec',
    'covariance_count',
    'expected_count',
    'moment_vector',
    'sample_graph',
    'theoretical_density',
    'variance_count',
]
