"""
Predictability Analysis Module
Long-horizon log returns, LTLS predictability scans across horizons and
memory estimates of returns and predictor
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from scipy import stats

from empirics.dataset import MarketDataset
from estimators.memory import elw_estimate, lw_estimate
from estimators.setups import SetupId, ltls_test, parse_setup
from utils.errors import DomainError, LTLSError
from utils.logger import log_operation_complete, log_operation_start

DEFAULT_SETUPS = (SetupId.S1, SetupId.S2, SetupId.S3)
DEFAULT_B_GRID = (0.55, 0.65, 0.75)
MEMORY_HORIZONS = {'monthly': (1, 12, 24), 'quarterly': (1, 8, 12)}
SCAN_HORIZONS = {'monthly': tuple(range(1, 25)), 'quarterly': tuple(range(1, 17))}


def long_horizon_returns(ds: MarketDataset, m: int) -> np.ndarray:
    """
    r[k] = ln I_{k+m} - ln I_k for k = 0..n-m-1

    Raises:
        DomainError: if m < 1 or m >= n
    """
    n = len(ds)
    if int(m) != m or m < 1:
        raise DomainError(f"horizon must be a positive integer, got {m}")
    if m >= n:
        raise DomainError(f"horizon {m} is not below the sample size {n}")
    log_level = np.log(ds.index_level)
    return log_level[m:] - log_level[:-m]


def horizon_pairs(ds: MarketDataset, m: int):
    """(r_{k+m}, x_k) pairs for the horizon-m predictive regression"""
    returns = long_horizon_returns(ds, m)
    return returns, ds.predictor[:returns.size]


@dataclass(frozen=True)
class HorizonScanResult:
    m: int
    n_effective: int
    t_stats: Dict[str, float] = field(default_factory=dict)
    beta_hats: Dict[str, float] = field(default_factory=dict)
    errors: Dict[str, str] = field(default_factory=dict)


def critical_value(level: float = 0.05) -> float:
    return float(stats.norm.ppf(1.0 - level / 2.0))


def crossing_horizon(results: Sequence[HorizonScanResult], setup: str,
                     level: float = 0.05) -> Optional[int]:
    """
    First horizon from which |T| stays above the two-sided critical value

    Returns:
        The horizon, or None when the last scanned horizon does not reject
    """
    critical = critical_value(level)
    crossing = None
    for result in sorted(results, key=lambda r: r.m):
        t = result.t_stats.get(setup, float('nan'))
        if math.isfinite(t) and abs(t) > critical:
            if crossing is None:
                crossing = result.m
        else:
            crossing = None
    return crossing


class PredictabilityAnalyzer:
    """Runs horizon scans and memory tables on a market dataset"""

    def __init__(self, logger):
        self.logger = logger

    def predictability_scan(self, ds: MarketDataset, m_grid: Optional[Sequence[int]] = None,
                            setups: Sequence = DEFAULT_SETUPS,
                            empirical_kernels: bool = True) -> List[HorizonScanResult]:
        """
        LTLS t-statistics for H0: beta = 0 at every horizon and setup

        Args:
            ds: Market dataset
            m_grid: Horizons; defaults by data frequency
            setups: Setup names or objects
            empirical_kernels: Residual-variance scaled kernels for S1/S2

        Returns:
            One HorizonScanResult per usable horizon
        """
        if m_grid is None:
            m_grid = SCAN_HORIZONS[ds.frequency]
        setups = [parse_setup(s) for s in setups]
        log_operation_start(self.logger, "Predictability scan", horizons=list(m_grid),
                            setups=[getattr(s, 'value', 'custom') for s in setups])

        results = []
        for m in m_grid:
            try:
                y, x = horizon_pairs(ds, m)
            except DomainError as e:
                self.logger.warning(f"Skipping horizon m={m}: {e}")
                continue

            t_stats, beta_hats, errors = {}, {}, {}
            for setup in setups:
                name = getattr(setup, 'value', 'custom')
                try:
                    estimate = ltls_test(y, x, setup, empirical_kernels=empirical_kernels)
                    t_stats[name] = estimate.t_stat
                    beta_hats[name] = estimate.beta_hat
                except LTLSError as e:
                    t_stats[name] = float('nan')
                    beta_hats[name] = float('nan')
                    errors[name] = str(e)
                    self.logger.warning(f"Horizon m={m}, {name}: {e}")

            results.append(HorizonScanResult(m=int(m), n_effective=int(y.size), t_stats=t_stats,
                                             beta_hats=beta_hats, errors=errors))

        log_operation_complete(self.logger, "Predictability scan", horizons=len(results))
        return results

    def scan_frame(self, results: Sequence[HorizonScanResult], level: float = 0.05) -> pd.DataFrame:
        """Long table m, setup, beta_hat, t_stat, n_eff, critical, reject, crossing"""
        critical = critical_value(level)
        setups = sorted({s for r in results for s in r.t_stats})
        crossings = {s: crossing_horizon(results, s, level) for s in setups}
        rows = []
        for result in results:
            for setup in setups:
                t = result.t_stats.get(setup, float('nan'))
                rows.append({
                    'm': result.m,
                    'setup': setup,
                    'beta_hat': result.beta_hats.get(setup, float('nan')),
                    't_stat': t,
                    'n_eff': result.n_effective,
                    'critical': critical,
                    'reject': bool(math.isfinite(t) and abs(t) > critical),
                    'crossing_m': crossings[setup],
                    'error': result.errors.get(setup, ''),
                })
        return pd.DataFrame(rows)

    def memory_table(self, ds: MarketDataset, b_grid: Sequence[float] = DEFAULT_B_GRID,
                     m_grid: Optional[Sequence[int]] = None) -> pd.DataFrame:
        """
        LW and ELW estimates for returns at each horizon and for the predictor

        Returns:
            DataFrame with columns series, horizon, b, method, m_bw, d_hat, error
        """
        if m_grid is None:
            m_grid = MEMORY_HORIZONS[ds.frequency]
        log_operation_start(self.logger, "Memory table", b_grid=list(b_grid), horizons=list(m_grid))

        series = []
        for m in m_grid:
            try:
                series.append(('returns', int(m), long_horizon_returns(ds, m)))
            except DomainError as e:
                self.logger.warning(f"Skipping returns at horizon m={m}: {e}")
        series.append((ds.predictor_name, 0, ds.predictor))

        rows = []
        for name, horizon, values in series:
            for b in b_grid:
                for method, estimator in (('LW', lw_estimate), ('ELW', elw_estimate)):
                    row = {'series': name, 'horizon': horizon, 'b': float(b), 'method': method,
                           'm_bw': None, 'd_hat': float('nan'), 'error': ''}
                    try:
                        estimate = estimator(values, b)
                        row['m_bw'] = estimate.bandwidth_m
                        row['d_hat'] = estimate.d_hat
                    except LTLSError as e:
                        row['error'] = str(e)
                        self.logger.warning(f"{method} for {name} (m={horizon}, b={b}): {e}")
                    rows.append(row)

        table = pd.DataFrame(rows)
        log_operation_complete(self.logger, "Memory table", rows=len(table),
                               failures=int((table['error'] != '').sum()))
        return table
