"""
Blockmodel fitting, bootstrap standardization and logistic regression
"""

from .blockmodel_fit import BlockFit, fit_blockmodel, label_agreement
from .bootstrap import BootstrapMoments, bootstrap_moments, critical_value, standardize
from .regression import RegressionFit, logistic_fit

__all__ = [
    'BlockFit',
    'BootstrapMoments',
    'RegressionFit',
    'bootstrap_moments',
    'critical_value',
    'fit_blockmodel',
    'label_agreement',
    'logistic_fit',
    'standardize',
]
