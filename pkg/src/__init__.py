"""
Rooted subgraph densities, blockmodel inference and goodness-of-fit testing
"""

__version__ = "1.0.0"
