"""
LTLS Predict - Empirical application
Market data ingestion and long-horizon predictability analysis
"""

from .dataset import MarketDataset, ingest_csv, ingest_pairs
from .predictability import HorizonScanResult, PredictabilityAnalyzer, long_horizon_returns

__all__ = [
    'MarketDataset',
    'ingest_csv',
    'ingest_pairs',
    'HorizonScanResult',
    'PredictabilityAnalyzer',
    'long_horizon_returns',
]
