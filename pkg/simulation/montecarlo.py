"""
Monte Carlo Engine Module
Size and power campaigns over DGP grids with keyed per-replication random
streams, parallel execution and rejection-frequency aggregation
"""

import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from estimators.baselines import IVX_B, IVX_C_Z, ivx_ttest, ols_ttest
from estimators.setups import SetupId, ltls_test
from simulation.dgp import DgpSpec, FractionalTypeII, NearIntegrated, gen_series, regression_pairs
from simulation.rng import cell_key, replication_stream
from utils.errors import DomainError, LTLSError
from utils.logger import log_campaign_info, log_operation_complete, log_operation_start

DESK_REPS = 2000
FULL_REPS = 10000
PROFILES = {'desk': DESK_REPS, 'full': FULL_REPS}
MIN_REPS = 100
CHUNK_SIZE = 250

SAMPLE_SIZES = (250, 500, 750, 1000)
NI_C_VALUES = (0.0, -5.0, -10.0, -20.0, -50.0)
NI_DELTAS = (-0.95, -0.5, 0.0, 0.5, 0.95)
FRACTIONAL_D_VALUES = (0.75, 0.8, 0.9, 1.0, 1.1, 1.2)
FRACTIONAL_DELTAS = (-0.95, -0.5, 0.0)
POWER_DELTAS = (0.0, -0.5, -0.95)
DEFAULT_BETA_GRID = tuple(round(0.005 * i, 3) for i in range(11))

SUMMARY_COLUMNS = ['regime', 'c_or_d', 'delta', 'n', 'beta', 'method',
                   'reps', 'reject_rate', 'mc_se', 'failures']


class Method(str, Enum):
    T1 = 'T1'
    T2 = 'T2'
    T3 = 'T3'
    IVX = 'IVX'
    OLS = 'OLS'


_SETUP_FOR = {Method.T1: SetupId.S1, Method.T2: SetupId.S2, Method.T3: SetupId.S3}


@dataclass(frozen=True)
class McCampaign:
    """Grid of DGPs, methods and slopes evaluated on shared replications"""

    methods: Tuple[Method, ...]
    dgp_grid: Tuple[DgpSpec, ...]
    reps: int = FULL_REPS
    level: float = 0.05
    master_seed: int = 20240101
    beta_grid: Tuple[float, ...] = (0.0,)
    ivx_c_z: float = IVX_C_Z
    ivx_b: float = IVX_B

    def __post_init__(self):
        object.__setattr__(self, 'methods', tuple(Method(m) for m in self.methods))
        object.__setattr__(self, 'dgp_grid', tuple(self.dgp_grid))
        object.__setattr__(self, 'beta_grid', tuple(float(b) for b in self.beta_grid))
        if not self.methods:
            raise DomainError("campaign needs at least one method")
        if not self.dgp_grid:
            raise DomainError("campaign needs at least one DGP")
        if not self.beta_grid:
            raise DomainError("campaign needs at least one beta value")
        if int(self.reps) != self.reps or self.reps < MIN_REPS:
            raise DomainError(f"reps must be an integer >= {MIN_REPS}, got {self.reps}")
        if not 0 < self.level < 0.5:
            raise DomainError(f"level must lie in (0, 0.5), got {self.level}")
        if not 0 <= int(self.master_seed) < 2 ** 64:
            raise DomainError(f"master seed must be an unsigned 64-bit integer, got {self.master_seed}")

    @property
    def critical_value(self) -> float:
        return float(stats.norm.ppf(1.0 - self.level / 2.0))

    def cells(self) -> List[DgpSpec]:
        """One DGP per (grid point, beta), in grid order"""
        return [dgp.with_beta(beta) for dgp in self.dgp_grid for beta in self.beta_grid]


@dataclass(frozen=True)
class McCell:
    regime: str
    c_or_d: float
    delta: float
    n: int
    beta: float
    method: Method
    reps: int
    rejection_rate: float
    mc_standard_error: float
    failures: int

    def to_dict(self) -> dict:
        return {
            'regime': self.regime,
            'c_or_d': self.c_or_d,
            'delta': self.delta,
            'n': self.n,
            'beta': self.beta,
            'method': self.method.value,
            'reps': self.reps,
            'reject_rate': self.rejection_rate,
            'mc_se': self.mc_standard_error,
            'failures': self.failures,
        }


@dataclass
class _Tally:
    rejections: Dict[Method, int] = field(default_factory=dict)
    successes: Dict[Method, int] = field(default_factory=dict)
    failures: Dict[Method, int] = field(default_factory=dict)

    def add(self, other: '_Tally'):
        for name in ('rejections', 'successes', 'failures'):
            mine, theirs = getattr(self, name), getattr(other, name)
            for method, count in theirs.items():
                mine[method] = mine.get(method, 0) + count


def statistic(method: Method, y: np.ndarray, x: np.ndarray, beta0: float = 0.0,
              ivx_c_z: float = IVX_C_Z, ivx_b: float = IVX_B) -> float:
    """t-statistic of one method on one aligned sample"""
    method = Method(method)
    if method in _SETUP_FOR:
        return ltls_test(y, x, _SETUP_FOR[method], beta0=beta0).t_stat
    if method is Method.IVX:
        return ivx_ttest(y, x, beta0=beta0, c_z=ivx_c_z, b=ivx_b).t_stat
    return ols_ttest(y, x, beta0=beta0).t_stat


def dgp_key(dgp: DgpSpec) -> int:
    reg = dgp.regressor
    return cell_key(reg.regime, reg.parameter, dgp.delta, dgp.n, dgp.beta)


def _replicate(dgp: DgpSpec, methods: Sequence[Method], seed: int, key: int, r: int,
               ivx_c_z: float, ivx_b: float) -> Dict[Method, float]:
    stream = replication_stream(seed, key, r)
    y, x = regression_pairs(gen_series(dgp, stream))
    out = {}
    for method in methods:
        try:
            t = statistic(method, y, x, 0.0, ivx_c_z, ivx_b)
        except LTLSError:
            t = float('nan')
        out[method] = t if math.isfinite(t) else float('nan')
    return out


def _run_chunk(task) -> Tuple[int, _Tally]:
    """Worker entry point: one contiguous block of replications of one cell"""
    index, dgp, methods, seed, start, stop, critical, ivx_c_z, ivx_b = task
    key = dgp_key(dgp)
    tally = _Tally()
    for r in range(start, stop):
        for method, t in _replicate(dgp, methods, seed, key, r, ivx_c_z, ivx_b).items():
            if math.isnan(t):
                tally.failures[method] = tally.failures.get(method, 0) + 1
                continue
            tally.successes[method] = tally.successes.get(method, 0) + 1
            if abs(t) > critical:
                tally.rejections[method] = tally.rejections.get(method, 0) + 1
    return index, tally


class MonteCarloEngine:
    """Runs size/power campaigns and summarises rejection frequencies"""

    def __init__(self, logger, chunk_size: int = CHUNK_SIZE):
        self.logger = logger
        self.chunk_size = chunk_size

    def _tasks(self, campaign: McCampaign, cells: List[DgpSpec]) -> list:
        tasks = []
        critical = campaign.critical_value
        for index, dgp in enumerate(cells):
            for start in range(0, campaign.reps, self.chunk_size):
                stop = min(start + self.chunk_size, campaign.reps)
                tasks.append((index, dgp, campaign.methods, int(campaign.master_seed), start, stop,
                              critical, campaign.ivx_c_z, campaign.ivx_b))
        return tasks

    def run_campaign(self, campaign: McCampaign, parallelism: int = 1) -> List[McCell]:
        """
        Evaluate every (cell, method) rejection frequency

        Args:
            campaign: Campaign definition
            parallelism: Number of worker processes (1 runs in-process)

        Returns:
            List of McCell in campaign order (cell-major, then method)
        """
        cells = campaign.cells()
        log_operation_start(self.logger, "Monte Carlo campaign", reps=campaign.reps,
                            level=campaign.level, parallelism=parallelism)
        log_campaign_info(self.logger, len(cells), campaign.reps,
                          [m.value for m in campaign.methods], campaign.master_seed)

        tallies = [_Tally() for _ in cells]
        tasks = self._tasks(campaign, cells)

        if parallelism <= 1:
            for task in tasks:
                index, tally = _run_chunk(task)
                tallies[index].add(tally)
        else:
            with ProcessPoolExecutor(max_workers=parallelism) as executor:
                futures = [executor.submit(_run_chunk, task) for task in tasks]
                for future in as_completed(futures):
                    index, tally = future.result()
                    tallies[index].add(tally)

        results = []
        for dgp, tally in zip(cells, tallies):
            for method in campaign.methods:
                cell = self._make_cell(dgp, method, tally, campaign.reps)
                results.append(cell)
                self.logger.info(
                    f"📊 {dgp.label()} {method.value}: reject {cell.rejection_rate:.3f} "
                    f"(se {cell.mc_standard_error:.3f}, failures {cell.failures})")

        total_failures = sum(c.failures for c in results)
        log_operation_complete(self.logger, "Monte Carlo campaign",
                               cells=len(results), failures=total_failures)
        return results

    @staticmethod
    def _make_cell(dgp: DgpSpec, method: Method, tally: _Tally, reps: int) -> McCell:
        successes = tally.successes.get(method, 0)
        rejections = tally.rejections.get(method, 0)
        rate = rejections / successes if successes else float('nan')
        se = math.sqrt(rate * (1.0 - rate) / reps) if successes else float('nan')
        return McCell(
            regime=dgp.regressor.regime,
            c_or_d=float(dgp.regressor.parameter),
            delta=float(dgp.delta),
            n=int(dgp.n),
            beta=float(dgp.beta),
            method=method,
            reps=reps,
            rejection_rate=rate,
            mc_standard_error=se,
            failures=tally.failures.get(method, 0),
        )

    def simulate_statistics(self, dgp: DgpSpec, method: Method, reps: int, seed: int) -> np.ndarray:
        """
        Raw t-statistics of one method on one DGP

        Streams are derived exactly as in run_campaign, so statistic r here
        is the one counted for replication r of the matching cell.

        Returns:
            Array of length reps, NaN where the replication failed
        """
        method = Method(method)
        key = dgp_key(dgp)
        out = np.empty(reps)
        for r in range(reps):
            out[r] = _replicate(dgp, (method,), seed, key, r, IVX_C_Z, IVX_B)[method]
        failures = int(np.isnan(out).sum())
        if failures:
            self.logger.warning(f"{failures} of {reps} replications failed for {dgp.label()} {method.value}")
        return out


def normality_check(t_stats) -> Tuple[float, float]:
    """
    Kolmogorov-Smirnov test of finite statistics against N(0, 1)

    Returns:
        Tuple of (ks_statistic, p_value)
    """
    values = np.asarray(t_stats, dtype=float)
    values = values[np.isfinite(values)]
    if values.size == 0:
        raise DomainError("no finite statistics to test")
    result = stats.kstest(values, 'norm')
    return float(result.statistic), float(result.pvalue)


def summarize(cells: Sequence[McCell], layout: str = 'long') -> pd.DataFrame:
    """
    Tabulate campaign cells

    Args:
        cells: Campaign output
        layout: 'long' (one row per cell) or 'wide' (rows n, columns delta x method)

    Returns:
        DataFrame in campaign order
    """
    if not cells:
        raise DomainError("nothing to summarise")
    frame = pd.DataFrame([c.to_dict() for c in cells], columns=SUMMARY_COLUMNS)
    if layout == 'long':
        return frame
    if layout != 'wide':
        raise DomainError(f"unknown layout '{layout}', expected 'long' or 'wide'")

    wide = frame.pivot_table(index=['regime', 'c_or_d', 'beta', 'n'], columns=['delta', 'method'],
                             values='reject_rate', sort=False)
    return wide


def resolve_reps(profile: str = 'desk', reps=None) -> int:
    """Replication count from an explicit value or a named profile"""
    if reps is not None:
        return int(reps)
    try:
        return PROFILES[profile]
    except KeyError:
        raise DomainError(f"unknown profile '{profile}', expected one of {sorted(PROFILES)}")


def ni_grid(c_values=NI_C_VALUES, deltas=NI_DELTAS, sizes=SAMPLE_SIZES) -> List[DgpSpec]:
    """Near-integrated DGPs ordered by c, then n, then delta"""
    return [DgpSpec(delta=delta, regressor=NearIntegrated(c), n=n)
            for c in c_values for n in sizes for delta in deltas]


def fractional_grid(d_values=FRACTIONAL_D_VALUES, deltas=FRACTIONAL_DELTAS,
                    sizes=SAMPLE_SIZES) -> List[DgpSpec]:
    """Fractional DGPs ordered by d, then n, then delta"""
    return [DgpSpec(delta=delta, regressor=FractionalTypeII(d), n=n)
            for d in d_values for n in sizes for delta in deltas]


def ni_size_campaign(reps: int = FULL_REPS, seed: int = 20240101, level: float = 0.05) -> McCampaign:
    """Size campaign for the near-integrated regressor"""
    return McCampaign(methods=(Method.T1, Method.T2, Method.T3, Method.IVX, Method.OLS),
                      dgp_grid=tuple(ni_grid()), reps=reps, level=level, master_seed=seed)


def fractional_size_campaign(reps: int = FULL_REPS, seed: int = 20240101, level: float = 0.05) -> McCampaign:
    """Size campaign for the type-II fractional regressor"""
    return McCampaign(methods=(Method.T3, Method.OLS), dgp_grid=tuple(fractional_grid()),
                      reps=reps, level=level, master_seed=seed)


def power_grid(regime: str = 'ni', reps: int = DESK_REPS, seed: int = 20240101,
               beta_grid=DEFAULT_BETA_GRID, level: float = 0.05) -> McCampaign:
    """Power-curve campaign at n = 250"""
    if regime == 'ni':
        grid = ni_grid(c_values=(0.0, -20.0), deltas=POWER_DELTAS, sizes=(250,))
        methods = (Method.T1, Method.T2, Method.T3, Method.IVX, Method.OLS)
    elif regime == 'fractional':
        grid = fractional_grid(d_values=(0.8, 1.0, 1.2), deltas=POWER_DELTAS, sizes=(250,))
        methods = (Method.T3, Method.OLS)
    else:
        raise DomainError(f"unknown regime '{regime}', expected 'ni' or 'fractional'")
    return McCampaign(methods=methods, dgp_grid=tuple(grid), reps=reps, level=level,
                      master_seed=seed, beta_grid=tuple(beta_grid))
