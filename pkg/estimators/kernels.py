"""
Kernel Functions Module
Kernels, chronological-point grids and the trimming weight sequences that
define the LTLS instrument and the trimmed demeaning
"""

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy import stats

from utils.errors import DegenerateWeightsError, DomainError, NotIntegrableError


@dataclass(frozen=True)
class GaussianDensityPower:
    """phi_{variance}(x) ** power, with phi the N(0, variance) density"""

    variance: float
    power: float = 1.0

    def __post_init__(self):
        if not (self.variance > 0 and math.isfinite(self.variance)):
            raise DomainError(f"kernel variance must be positive, got {self.variance}")
        if not (0 < self.power <= 1):
            raise DomainError(f"kernel power must lie in (0, 1], got {self.power}")


@dataclass(frozen=True)
class ConstantOnAll:
    """Flat kernel; only useful for checking that LTLS collapses to OLS"""

    level: float = 1.0

    def __post_init__(self):
        if not self.level > 0:
            raise DomainError(f"constant kernel level must be positive, got {self.level}")


KernelSpec = Union[GaussianDensityPower, ConstantOnAll]


def eval_kernel(k: KernelSpec, x):
    """
    Evaluate a kernel at a point or elementwise over an array

    Args:
        k: Kernel specification
        x: Real number or array of reals

    Returns:
        Nonnegative float (or array of the same shape as x)

    Raises:
        DomainError: if x has non-finite entries
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("kernel argument must be finite")

    if isinstance(k, ConstantOnAll):
        out = np.full(arr.shape, float(k.level))
    else:
        # exp(p * log phi) keeps far tails at exact zero instead of NaN
        out = np.exp(k.power * stats.norm.logpdf(arr, scale=math.sqrt(k.variance)))

    return float(out) if out.ndim == 0 else out


def kernel_integrals(k: KernelSpec) -> Tuple[float, float]:
    """
    Closed-form integrals of K and K**2 over the real line

    For phi_s^p the integral is (2*pi*s)**((1 - p) / 2) / sqrt(p); the
    square is the same expression with power 2p.

    Args:
        k: Kernel specification

    Returns:
        Tuple of (integral of K, integral of K squared)

    Raises:
        NotIntegrableError: for ConstantOnAll
    """
    if isinstance(k, ConstantOnAll):
        raise NotIntegrableError("ConstantOnAll kernel has no finite integral")

    def _integral(power: float) -> float:
        return (2.0 * math.pi * k.variance) ** ((1.0 - power) / 2.0) / math.sqrt(power)

    return _integral(k.power), _integral(2.0 * k.power)


def make_cps(l: int) -> np.ndarray:
    """
    Equispaced chronological points j / (l + 1), j = 1..l

    Args:
        l: Number of points

    Returns:
        Strictly increasing array of length l inside (0, 1)

    Raises:
        DomainError: if l < 1
    """
    if int(l) != l or l < 1:
        raise DomainError(f"number of chronological points must be a positive integer, got {l}")
    l = int(l)
    return np.arange(1, l + 1, dtype=float) / (l + 1)


@dataclass(frozen=True)
class TrimmingScheme:
    """
    Realised chronological trimming for one sample

    Demeaning uses the same l_n points as the instrument unless
    single_cp_demeaning is set, in which case the single point tau_star is
    used (l_star = 1).
    """

    c_n: float
    l_n: int
    K: KernelSpec
    K_star: KernelSpec
    single_cp_demeaning: bool = False
    tau_star: float = 0.5

    def __post_init__(self):
        if not (self.c_n > 0 and math.isfinite(self.c_n)):
            raise DomainError(f"c_n must be positive, got {self.c_n}")
        if int(self.l_n) != self.l_n or self.l_n < 1:
            raise DomainError(f"l_n must be a positive integer, got {self.l_n}")
        if not 0 < self.tau_star < 1:
            raise DomainError(f"tau_star must lie in (0, 1), got {self.tau_star}")

    @property
    def cps(self) -> np.ndarray:
        return make_cps(self.l_n)

    @property
    def l_star(self) -> int:
        return 1 if self.single_cp_demeaning else int(self.l_n)

    def describe(self) -> dict:
        """Plain-data summary used in reports"""
        return {
            'c_n': self.c_n,
            'l_n': int(self.l_n),
            'l_star': self.l_star,
            'tau_star': self.tau_star if self.single_cp_demeaning else None,
            'K': repr(self.K),
            'K_star': repr(self.K_star),
        }


def _kernel_sum(k: KernelSpec, c_n: float, grid: np.ndarray, points: np.ndarray) -> np.ndarray:
    # rows: k/n, columns: chronological points
    args = c_n * (grid[:, None] - points[None, :])
    return np.asarray(eval_kernel(k, args)).sum(axis=1)


def trimming_weights(scheme: TrimmingScheme, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Instrument weights K_kn and demeaning weights K*_kn for k = 1..n

    Args:
        scheme: Realised trimming scheme
        n: Sample size

    Returns:
        Tuple of (Kkn, Kstar_kn), each of length n

    Raises:
        DomainError: if n < 2
        DegenerateWeightsError: if either vector is identically zero
    """
    if n < 2:
        raise DomainError(f"sample size must be at least 2, got {n}")

    grid = np.arange(1, n + 1, dtype=float) / n
    cps = scheme.cps

    Kkn = _kernel_sum(scheme.K, scheme.c_n, grid, cps)
    if not scheme.single_cp_demeaning:
        Kstar_kn = _kernel_sum(scheme.K_star, scheme.c_n, grid, cps)
    else:
        Kstar_kn = _kernel_sum(scheme.K_star, scheme.c_n, grid, np.array([scheme.tau_star]))

    if not np.any(Kkn > 0):
        raise DegenerateWeightsError(f"instrument weights vanish for c_n={scheme.c_n:g}, n={n}")
    if not np.any(Kstar_kn > 0):
        raise DegenerateWeightsError(f"demeaning weights vanish for c_n={scheme.c_n:g}, n={n}")

    return Kkn, Kstar_kn
