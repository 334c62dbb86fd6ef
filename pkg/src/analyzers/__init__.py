"""
Registered pipelines: goodness of fit, regression and the Monte Carlo experiments
"""

# Importing the pipeline modules registers them on the factory.
from . import average_clt, goodness_of_fit, level_power, regression_analysis, subcritical, vertex_clt
from .base_analyzer import AnalysisResult, AnalyzerFactory, BaseAnalyzer

create_analyzer = AnalyzerFactory.create
get_available_methods = AnalyzerFactory.get_available_methods

__all__ = ['AnalysisResult', 'AnalyzerFactory', 'BaseAnalyzer', 'create_analyzer',
           'get_available_methods']
