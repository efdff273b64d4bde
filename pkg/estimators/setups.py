"""
Setup Resolution Module
Turns a named kernel/trimming setup into a realised TrimmingScheme for a
given sample, and runs the full LTLS test pipeline
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Union

import numpy as np

from estimators.kernels import GaussianDensityPower, TrimmingScheme
from estimators.ltls import (
    EstimationResult,
    PreliminaryStats,
    RegressionInput,
    Studentization,
    preliminary_ols,
    ltls_tstat,
)
from utils.errors import DomainError
from utils.helpers import as_float_vector
from utils.logger import get_module_logger

logger = get_module_logger('setups')

# multi-cp setups
MULTI_CP_RATE = 0.95
S1_CP_EXPONENT = 0.7
S2_CP_SLOPE = 0.45
INSTRUMENT_VARIANCE = 0.1
DEMEANING_VARIANCE = 1.0

# single-cp setup
S3_RATE_INTERCEPT = -0.1
S3_RATE_SLOPE = 0.15
S3_VARIANCE_FLOOR = 0.1
S3_TAU_STAR = 0.5


class SetupId(str, Enum):
    S1 = 'S1'
    S2 = 'S2'
    S3 = 'S3'


@dataclass(frozen=True)
class CustomSetup:
    """User-supplied scheme; c_n and l_n are used as given"""

    scheme: TrimmingScheme
    variant: Studentization = Studentization.STANDARD_A


Setup = Union[SetupId, CustomSetup]


@dataclass(frozen=True)
class ResolvedSetup:
    scheme: TrimmingScheme
    variant: Studentization


def parse_setup(value: Union[str, Setup]) -> Setup:
    """Accept 'S1'/'s1'/'T1' style names as well as setup objects"""
    if isinstance(value, (SetupId, CustomSetup)):
        return value
    name = str(value).strip().upper()
    if name.startswith('T'):
        name = 'S' + name[1:]
    try:
        return SetupId(name)
    except ValueError:
        raise DomainError(f"unknown setup '{value}', expected one of S1, S2, S3")


def _floor_count(value: float, what: str) -> int:
    count = int(math.floor(value))
    if count < 1:
        logger.warning("%s resolved to %d (from %.4g); clamped to 1", what, count, value)
        count = 1
    return count


def resolve_setup(setup: Setup, n: int, prelim: PreliminaryStats,
                  empirical_kernels: bool = False) -> ResolvedSetup:
    """
    Realise the tuning rules of a setup for sample size n

    Args:
        setup: SetupId or CustomSetup
        n: Sample size used for estimation
        prelim: Preliminary OLS statistics (sigma_tilde2, delta_tilde)
        empirical_kernels: Scale the S1/S2 kernel variances by sigma_tilde2

    Returns:
        ResolvedSetup with the realised scheme and studentization variant

    Raises:
        DomainError: if n < 8, or S3 meets a zero residual variance
    """
    if n < 8:
        raise DomainError(f"sample size must be at least 8, got {n}")

    if isinstance(setup, CustomSetup):
        return ResolvedSetup(scheme=setup.scheme, variant=setup.variant)

    setup = SetupId(setup)
    abs_delta = abs(prelim.delta_tilde)

    if setup in (SetupId.S1, SetupId.S2):
        c_n = float(n) ** MULTI_CP_RATE
        exponent = S1_CP_EXPONENT if setup is SetupId.S1 else 1.0 - S2_CP_SLOPE * abs_delta
        l_n = _floor_count(c_n ** exponent, f"{setup.value} l_n")

        scale = prelim.sigma_tilde2 if empirical_kernels else 1.0
        scheme = TrimmingScheme(
            c_n=c_n,
            l_n=l_n,
            K=GaussianDensityPower(INSTRUMENT_VARIANCE * scale, 0.5),
            K_star=GaussianDensityPower(DEMEANING_VARIANCE * scale, 0.5),
        )
        return ResolvedSetup(scheme=scheme, variant=Studentization.STANDARD_A)

    variance = prelim.sigma_tilde2 * (S3_VARIANCE_FLOOR + (1.0 - S3_VARIANCE_FLOOR) * abs_delta)
    if not variance > 0:
        raise DomainError("S3 kernel variance is zero (residual variance vanished)")
    c_n = float(n) ** (S3_RATE_INTERCEPT + S3_RATE_SLOPE * abs_delta)
    l_n = _floor_count(math.log(n), "S3 l_n")

    scheme = TrimmingScheme(
        c_n=c_n,
        l_n=l_n,
        K=GaussianDensityPower(variance, 1.0),
        K_star=GaussianDensityPower(variance, 0.5),
        single_cp_demeaning=True,
        tau_star=S3_TAU_STAR,
    )
    return ResolvedSetup(scheme=scheme, variant=Studentization.STAR_A)


def ltls_test(y, x, setup: Union[str, Setup] = SetupId.S3, beta0: float = 0.0,
              f: Optional[Callable[[np.ndarray], np.ndarray]] = None,
              empirical_kernels: bool = False) -> EstimationResult:
    """
    Preliminary OLS, setup resolution and the LTLS t-statistic in one call

    Args:
        y: Aligned responses
        x: Aligned regressor
        setup: Setup name or object
        beta0: Null value
        f: Regression function applied to x (identity when None)
        empirical_kernels: Use sigma_tilde2-scaled kernels for S1/S2

    Returns:
        EstimationResult
    """
    y = as_float_vector(y, 'y')
    x = as_float_vector(x, 'x')
    fx = x if f is None else as_float_vector(f(x), 'f(x)')

    prelim = preliminary_ols(y, x)
    resolved = resolve_setup(parse_setup(setup), y.size, prelim, empirical_kernels=empirical_kernels)
    studentization = prelim if f is None else preliminary_ols(y, fx)

    data = RegressionInput(y=y, fx=fx, scheme=resolved.scheme, beta0=beta0)
    result = ltls_tstat(data, resolved.variant, prelim=studentization)
    logger.debug("LTLS %s: beta_hat=%.6g t=%.4f (c_n=%.4g, l_n=%d)",
                 getattr(setup, 'value', setup), result.beta_hat, result.t_stat,
                 resolved.scheme.c_n, resolved.scheme.l_n)
    return result
