"""
LTLS Predict - Simulation
Data generating processes, random streams and the Monte Carlo engine
"""

from .dgp import DgpSpec, FractionalTypeII, NearIntegrated, SeriesPair, gen_series, regression_pairs
from .montecarlo import McCampaign, McCell, Method, MonteCarloEngine

__all__ = [
    'DgpSpec',
    'FractionalTypeII',
    'NearIntegrated',
    'SeriesPair',
    'gen_series',
    'regression_pairs',
    'McCampaign',
    'McCell',
    'Method',
    'MonteCarloEngine',
]
