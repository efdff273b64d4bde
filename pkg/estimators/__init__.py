"""
LTLS Predict - Estimators
Kernel trimming, the LTLS estimator and test, baseline tests and memory estimators
"""

__version__ = "1.0.0"

from .kernels import ConstantOnAll, GaussianDensityPower, TrimmingScheme, trimming_weights
from .ltls import EstimationResult, RegressionInput, Studentization, ltls_estimate, ltls_tstat, preliminary_ols
from .setups import CustomSetup, SetupId, ltls_test, resolve_setup
from .baselines import BaselineResult, ivx_ttest, ols_ttest
from .memory import MemoryEstimate, elw_estimate, lw_estimate

__all__ = [
    'ConstantOnAll',
    'GaussianDensityPower',
    'TrimmingScheme',
    'trimming_weights',
    'EstimationResult',
    'RegressionInput',
    'Studentization',
    'ltls_estimate',
    'ltls_tstat',
    'preliminary_ols',
    'CustomSetup',
    'SetupId',
    'ltls_test',
    'resolve_setup',
    'BaselineResult',
    'ivx_ttest',
    'ols_ttest',
    'MemoryEstimate',
    'elw_estimate',
    'lw_estimate',
]
