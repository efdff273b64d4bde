"""
Memory Estimation Module
Periodogram, type-II fractional differencing and the local Whittle /
exact local Whittle estimators of the memory parameter
"""

import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from scipy import optimize, signal

from utils.errors import BandwidthError, DomainError
from utils.helpers import as_float_vector

LW_BOUNDS = (-0.5, 1.5)
ELW_BOUNDS = (-0.5, 2.0)
GRID_STEP = 1.0 / 300.0
REFINE_TOL = 1e-6
MIN_BANDWIDTH = 4
MIN_LENGTH = 64


@dataclass(frozen=True)
class MemoryEstimate:
    d_hat: float
    method: str
    bandwidth_m: int
    bandwidth_exponent_b: float
    objective_at_opt: float

    def to_dict(self) -> dict:
        return {
            'method': self.method,
            'b': self.bandwidth_exponent_b,
            'm': self.bandwidth_m,
            'd_hat': self.d_hat,
            'objective': self.objective_at_opt,
        }


def fourier_frequencies(n: int) -> np.ndarray:
    """lambda_j = 2 pi j / n for j = 1..floor((n - 1) / 2)"""
    return 2.0 * np.pi * np.arange(1, (n - 1) // 2 + 1) / n


def periodogram(x) -> np.ndarray:
    """
    Periodogram I(lambda_j) = |sum_k x_k exp(-i lambda_j k)|^2 / (2 pi n)

    Args:
        x: Series of length n >= 4

    Returns:
        Ordinates for j = 1..floor((n - 1) / 2)
    """
    x = as_float_vector(x, 'x')
    n = x.size
    if n < 4:
        raise DomainError(f"periodogram needs at least 4 observations, got {n}")

    dft = np.fft.fft(x)[1:(n - 1) // 2 + 1]
    return (dft.real ** 2 + dft.imag ** 2) / (2.0 * np.pi * n)


def frac_diff_weights(d: float, n: int) -> np.ndarray:
    """pi_0 = 1, pi_j = pi_{j-1} (j - 1 - d) / j for j < n"""
    k = np.arange(1, n, dtype=float)
    return np.concatenate(([1.0], np.cumprod((k - 1.0 - d) / k)))


def frac_diff(x, d: float) -> np.ndarray:
    """
    Type-II fractional difference (1 - L)^d x with zero pre-sample values

    Args:
        x: Finite series
        d: Differencing order

    Returns:
        Series of the same length
    """
    x = as_float_vector(x, 'x')
    n = x.size
    if n == 0:
        return x.copy()
    weights = frac_diff_weights(d, n)
    return signal.convolve(weights, x, method='auto')[:n]


def _bandwidth(n: int, b: float) -> int:
    if n < MIN_LENGTH:
        raise DomainError(f"memory estimation needs at least {MIN_LENGTH} observations, got {n}")
    if not 0 < b < 1:
        raise DomainError(f"bandwidth exponent must lie in (0, 1), got {b}")
    m = int(math.floor(n ** b))
    if m < MIN_BANDWIDTH:
        raise BandwidthError(f"bandwidth m={m} is below {MIN_BANDWIDTH} (n={n}, b={b})")
    m = min(m, (n - 1) // 2)
    return m


def _minimise(objective: Callable[[float], float], bounds: Tuple[float, float]) -> Tuple[float, float]:
    """Grid search at GRID_STEP, then bounded Brent refinement between the grid neighbours"""
    lo, hi = bounds
    grid = np.linspace(lo, hi, int(round((hi - lo) / GRID_STEP)) + 1)
    values = np.array([objective(d) for d in grid])
    values = np.where(np.isfinite(values), values, np.inf)
    best = int(np.argmin(values))

    left = grid[max(best - 1, 0)]
    right = grid[min(best + 1, grid.size - 1)]
    d_best, f_best = float(grid[best]), float(values[best])
    if right > left:
        refined = optimize.minimize_scalar(objective, bounds=(left, right), method='bounded',
                                           options={'xatol': REFINE_TOL})
        if refined.success and refined.fun < f_best:
            d_best, f_best = float(refined.x), float(refined.fun)
    return d_best, f_best


def lw_objective(d: float, I: np.ndarray, lam: np.ndarray) -> float:
    """R(d) = log(mean(lambda^{2d} I)) - 2d mean(log lambda)"""
    log_lam = np.log(lam)
    return float(np.log(np.mean(np.exp(2.0 * d * log_lam) * I)) - 2.0 * d * log_lam.mean())


def lw_estimate(x, b: float = 0.65) -> MemoryEstimate:
    """
    Local Whittle estimate of d over [-0.5, 1.5]

    Args:
        x: Series (n >= 64)
        b: Bandwidth exponent, m = floor(n**b)

    Returns:
        MemoryEstimate
    """
    x = as_float_vector(x, 'x')
    m = _bandwidth(x.size, b)
    x = x - x.mean()
    I = periodogram(x)[:m]
    lam = fourier_frequencies(x.size)[:m]

    d_hat, value = _minimise(lambda d: lw_objective(d, I, lam), LW_BOUNDS)
    return MemoryEstimate(d_hat=d_hat, method='LW', bandwidth_m=m,
                          bandwidth_exponent_b=float(b), objective_at_opt=value)


def elw_objective(d: float, x: np.ndarray, m: int, lam: np.ndarray) -> float:
    """R*(d) = log(mean(I of (1-L)^d x)) - 2d mean(log lambda)"""
    I = periodogram(frac_diff(x, d))[:m]
    return float(np.log(np.mean(I)) - 2.0 * d * np.log(lam).mean())


def elw_estimate(x, b: float = 0.65) -> MemoryEstimate:
    """
    Exact local Whittle estimate of d over [-0.5, 2.0]

    The series is demeaned by its first observation before differencing.

    Args:
        x: Series (n >= 64)
        b: Bandwidth exponent

    Returns:
        MemoryEstimate
    """
    x = as_float_vector(x, 'x')
    m = _bandwidth(x.size, b)
    x = x - x[0]
    lam = fourier_frequencies(x.size)[:m]

    d_hat, value = _minimise(lambda d: elw_objective(d, x, m, lam), ELW_BOUNDS)
    return MemoryEstimate(d_hat=d_hat, method='ELW', bandwidth_m=m,
                          bandwidth_exponent_b=float(b), objective_at_opt=value)
