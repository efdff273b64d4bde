"""
Data Generating Processes Module
Correlated Gaussian innovations, near-integrated and type-II fractional
regressors, and the predictive-regression response
"""

import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple, Union

import numpy as np
from scipy import signal

from utils.errors import DomainError
from utils.helpers import as_float_vector


@dataclass(frozen=True)
class NearIntegrated:
    """x_k = (1 + c/n) x_{k-1} + xi_k, x_0 = 0"""

    c: float = 0.0

    def __post_init__(self):
        if not self.c <= 0:
            raise DomainError(f"near-integration parameter c must be <= 0, got {self.c}")

    @property
    def regime(self) -> str:
        return 'ni'

    @property
    def parameter(self) -> float:
        return self.c


@dataclass(frozen=True)
class FractionalTypeII:
    """(1 - L)^d x_k = xi_k 1{k >= 1}"""

    d: float = 1.0

    def __post_init__(self):
        if not 0 < self.d < 1.5:
            raise DomainError(f"memory parameter d must lie in (0, 1.5), got {self.d}")

    @property
    def regime(self) -> str:
        return 'fractional'

    @property
    def parameter(self) -> float:
        return self.d


Regressor = Union[NearIntegrated, FractionalTypeII]


@dataclass(frozen=True)
class DgpSpec:
    """Predictive regression y_{k+1} = mu + beta x_k + u_{k+1}, k = 1..n"""

    delta: float
    regressor: Regressor
    n: int
    beta: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        if not -1 <= self.delta <= 1:
            raise DomainError(f"innovation correlation must lie in [-1, 1], got {self.delta}")
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"sample size must be an integer >= 2, got {self.n}")

    def with_beta(self, beta: float) -> 'DgpSpec':
        return replace(self, beta=float(beta))

    def label(self) -> str:
        reg = self.regressor
        name = 'c' if isinstance(reg, NearIntegrated) else 'd'
        return f"{reg.regime}({name}={reg.parameter:g}, delta={self.delta:g}, n={self.n}, beta={self.beta:g})"


@dataclass(frozen=True)
class SeriesPair:
    """
    Simulated sample; y[k] is the response to x[k-1] (x_0 = 0 pairs with y[0])
    """

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        if len(self.x) != len(self.y):
            raise DomainError(f"x and y lengths differ: {len(self.x)} != {len(self.y)}")


def gen_innovations(delta: float, n: int, stream: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """
    Draw n i.i.d. bivariate normal pairs with unit variances and correlation delta

    Args:
        delta: Correlation between xi and u
        n: Number of pairs
        stream: Random generator (consumed: xi first, then e)

    Returns:
        Tuple of (xi, u)

    Raises:
        DomainError: if |delta| > 1
    """
    if not -1 <= delta <= 1:
        raise DomainError(f"innovation correlation must lie in [-1, 1], got {delta}")

    xi = stream.standard_normal(n)
    e = stream.standard_normal(n)
    if abs(delta) == 1:
        u = delta * xi
    else:
        u = delta * xi + math.sqrt(1.0 - delta * delta) * e
    return xi, u


def gen_near_integrated(c: float, xi, n: Optional[int] = None) -> np.ndarray:
    """
    Near-integrated array with x_0 = 0 and autoregressive root 1 + c/n

    Args:
        c: Non-positive local-to-unity parameter
        xi: Innovations xi_1, xi_2, ...
        n: Sample size in the root; defaults to the number of innovations

    Returns:
        x_1, x_2, ... (one value per innovation)
    """
    xi = as_float_vector(xi, 'xi')
    if xi.size == 0:
        raise DomainError("innovation vector is empty")
    if not c <= 0:
        raise DomainError(f"near-integration parameter c must be <= 0, got {c}")

    if n is None:
        n = xi.size
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")

    rho = 1.0 + c / n
    # AR(1) recursion x_k = rho x_{k-1} + xi_k with zero initial state
    return signal.lfilter([1.0], [1.0, -rho], xi)


def frac_coeffs(d: float, m: int) -> np.ndarray:
    """
    MA coefficients of (1 - L)^{-d} truncated at lag m

    Args:
        d: Memory parameter
        m: Highest lag

    Returns:
        psi_0..psi_m with psi_0 = 1 and psi_j = psi_{j-1} (j - 1 + d) / j
    """
    if m < 0:
        raise DomainError(f"truncation lag must be >= 0, got {m}")
    j = np.arange(1, m + 1, dtype=float)
    return np.concatenate(([1.0], np.cumprod((j - 1.0 + d) / j)))


def gen_fractional(d: float, xi, method: str = 'direct') -> np.ndarray:
    """
    Type-II fractional process x_k = sum_{j<k} psi_j xi_{k-j}

    Args:
        d: Memory parameter in (0, 1.5)
        xi: Innovations xi_1..xi_n (zero pre-sample)
        method: 'direct' convolution or 'fft'

    Returns:
        x_1..x_n
    """
    if not 0 < d < 1.5:
        raise DomainError(f"memory parameter d must lie in (0, 1.5), got {d}")
    xi = as_float_vector(xi, 'xi')
    n = xi.size
    psi = frac_coeffs(d, n - 1)

    if method == 'direct':
        return np.convolve(psi, xi)[:n]
    if method == 'fft':
        return signal.fftconvolve(psi, xi)[:n]
    raise DomainError(f"unknown convolution method '{method}'")


def gen_regressor(regressor: Regressor, xi: np.ndarray, n: Optional[int] = None) -> np.ndarray:
    """Dispatch on the regressor law"""
    if isinstance(regressor, NearIntegrated):
        return gen_near_integrated(regressor.c, xi, n)
    return gen_fractional(regressor.d, xi)


def gen_series(spec: DgpSpec, stream: np.random.Generator) -> SeriesPair:
    """
    Simulate one sample from a predictive-regression DGP

    xi_k and u_k are drawn jointly for k = 1..n+1; x_k uses xi up to k and
    y[k] = mu + beta x_{k-1} + u_k, so the regressor is predetermined and
    regression_pairs yields exactly spec.n pairs (x_k, y_{k+1}), k = 1..n.
    The near-integrated root stays 1 + c/spec.n.

    Args:
        spec: DGP specification
        stream: Random generator for this replication

    Returns:
        SeriesPair of length spec.n + 1
    """
    xi, u = gen_innovations(spec.delta, spec.n + 1, stream)
    x = gen_regressor(spec.regressor, xi, spec.n)
    x_lag = np.concatenate(([0.0], x[:-1]))
    y = spec.mu + spec.beta * x_lag + u
    return SeriesPair(x=x, y=y)


def regression_pairs(series: SeriesPair) -> Tuple[np.ndarray, np.ndarray]:
    """
    Align a simulated sample for estimation

    Args:
        series: Simulated sample

    Returns:
        Tuple of (y_next, x_lag) with y_next[k] = y[k+1] and x_lag[k] = x[k]
    """
    return series.y[1:], series.x[:-1]
