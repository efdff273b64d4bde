"""
LTLS Estimator Module
Preliminary OLS regressions, trimmed demeaning, the locally trimmed least
squares slope and its studentized t-statistic
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np
import statsmodels.api as sm

from estimators.kernels import TrimmingScheme, trimming_weights
from utils.errors import (
    DegenerateStudentizationError,
    DegenerateWeightsError,
    DomainError,
    SingularDesignError,
)
from utils.helpers import as_float_vector
from utils.logger import get_module_logger

logger = get_module_logger('ltls')

# smallest sample the preliminary regressions can fit
MIN_OBSERVATIONS = 4

# residual sums below this share of the total variation count as an exact fit
_EXACT_FIT_TOL = 1e-20


class Studentization(str, Enum):
    """Which A row vector enters the variance quadratic form"""

    STANDARD_A = 'standard_A'
    STAR_A = 'star_A'


@dataclass(frozen=True)
class PreliminaryStats:
    """OLS quantities that drive the data-dependent tuning rules"""

    sigma_tilde2: float
    delta_tilde: float
    residuals_u: np.ndarray = field(repr=False)
    residuals_xi: np.ndarray = field(repr=False)
    degenerate: bool = False


@dataclass(frozen=True)
class RegressionInput:
    """Aligned sample y_k, f(x_k) with a realised trimming scheme"""

    y: np.ndarray
    fx: np.ndarray
    scheme: TrimmingScheme
    beta0: float = 0.0

    def __post_init__(self):
        y = as_float_vector(self.y, 'y')
        fx = as_float_vector(self.fx, 'fx')
        if y.size != fx.size:
            raise DomainError(f"y and f(x) lengths differ: {y.size} != {fx.size}")
        if y.size < MIN_OBSERVATIONS:
            raise DomainError(f"at least {MIN_OBSERVATIONS} observations are required, got {y.size}")
        object.__setattr__(self, 'y', y)
        object.__setattr__(self, 'fx', fx)

    @property
    def n(self) -> int:
        return int(self.y.size)


@dataclass(frozen=True)
class EstimationResult:
    """LTLS slope, t-statistic and every intermediate of the computation"""

    beta_hat: float
    t_stat: float
    C_n: float
    numerator: float
    A_n: Tuple[float, float]
    V_n: np.ndarray = field(repr=False)
    sigma_tilde2: float
    delta_tilde: float
    scheme_used: TrimmingScheme
    variant: Studentization = Studentization.STANDARD_A
    beta0: float = 0.0

    def to_dict(self) -> dict:
        """Flat record for tables and CSV output"""
        record = {
            'beta_hat': self.beta_hat,
            't_stat': self.t_stat,
            'beta0': self.beta0,
            'C_n': self.C_n,
            'numerator': self.numerator,
            'A_n_2': self.A_n[1],
            'sigma_tilde2': self.sigma_tilde2,
            'delta_tilde': self.delta_tilde,
            'variant': self.variant.value,
        }
        record.update(self.scheme_used.describe())
        return record


def _ols(endog: np.ndarray, exog: np.ndarray, what: str):
    if np.ptp(exog) == 0:
        raise SingularDesignError(f"{what}: regressor has zero sample variance")
    design = sm.add_constant(exog, has_constant='add')
    return sm.OLS(endog, design).fit()


def is_exact_fit(resid: np.ndarray, endog: np.ndarray) -> bool:
    """True when the residual sum of squares is negligible against the variation of endog"""
    tss = float(np.sum((endog - endog.mean()) ** 2))
    return float(np.sum(resid ** 2)) <= _EXACT_FIT_TOL * max(tss, 1.0)


def preliminary_ols(y, x) -> PreliminaryStats:
    """
    Predictive and autoregressive OLS fits used by the tuning rules

    Fits y_k = mu + beta x_k + u_k and x_k = mu_x + rho x_{k-1} + xi_k on the
    aligned sample; residual u_{k} pairs with xi_{k+1}, its contemporaneous
    innovation.

    Args:
        y: Aligned responses (y_next)
        x: Aligned regressor (x_lag)

    Returns:
        PreliminaryStats with sigma_tilde2 = mean squared u residual and the
        residual correlation delta_tilde

    Raises:
        DomainError: if fewer than 4 observations
        SingularDesignError: if x (or x_{k-1}) has zero variance
    """
    y = as_float_vector(y, 'y')
    x = as_float_vector(x, 'x')
    if y.size != x.size:
        raise DomainError(f"y and x lengths differ: {y.size} != {x.size}")
    if y.size < MIN_OBSERVATIONS:
        raise DomainError(f"at least {MIN_OBSERVATIONS} observations are required, got {y.size}")

    fit_u = _ols(y, x, 'predictive regression')
    fit_xi = _ols(x[1:], x[:-1], 'autoregression')
    resid_u = np.asarray(fit_u.resid, dtype=float)
    resid_xi = np.asarray(fit_xi.resid, dtype=float)

    degenerate = False
    if is_exact_fit(resid_u, y):
        resid_u = np.zeros_like(resid_u)
        degenerate = True
    if is_exact_fit(resid_xi, x[1:]):
        resid_xi = np.zeros_like(resid_xi)
        degenerate = True

    sigma_tilde2 = float(np.mean(resid_u ** 2))

    u_common = resid_u[:-1]
    denom = math.sqrt(float(np.sum(u_common ** 2)) * float(np.sum(resid_xi ** 2)))
    if denom > 0:
        delta_tilde = float(np.clip(np.dot(u_common, resid_xi) / denom, -1.0, 1.0))
    else:
        delta_tilde = 0.0
        degenerate = True

    if degenerate:
        logger.warning("Degenerate preliminary residuals; using delta_tilde=%.3f, sigma_tilde2=%.3g",
                       delta_tilde, sigma_tilde2)

    return PreliminaryStats(
        sigma_tilde2=sigma_tilde2,
        delta_tilde=delta_tilde,
        residuals_u=resid_u,
        residuals_xi=resid_xi,
        degenerate=degenerate,
    )


def trimmed_mean(a, Kstar_kn) -> float:
    """
    Weighted mean sum(a K*) / sum(K*)

    Raises:
        DegenerateWeightsError: if the weights sum to zero
    """
    a = np.asarray(a, dtype=float)
    w = np.asarray(Kstar_kn, dtype=float)
    if a.shape != w.shape:
        raise DomainError(f"values and weights differ in shape: {a.shape} != {w.shape}")
    total = float(w.sum())
    if not total > 0:
        raise DegenerateWeightsError("demeaning weights sum to zero")
    # exact for constant vectors
    if a.size and np.all(a == a[0]):
        return float(a[0])
    return float(np.dot(a, w) / total)


def _weighted_moments(data: RegressionInput):
    Kkn, Kstar_kn = trimming_weights(data.scheme, data.n)
    y_bar = data.y - trimmed_mean(data.y, Kstar_kn)
    f_bar = data.fx - trimmed_mean(data.fx, Kstar_kn)
    Z = data.fx * Kkn
    return Kkn, Kstar_kn, Z, y_bar, f_bar


def ltls_estimate(data: RegressionInput) -> EstimationResult:
    """
    Locally trimmed least squares slope

    beta_hat = sum(Z y_bar) / sum(Z f_bar) with instrument Z_k = f(x_k) K_kn
    and both variables demeaned by the K*-trimmed mean.

    Args:
        data: Aligned regression input

    Returns:
        EstimationResult with t_stat set to NaN (see ltls_tstat)

    Raises:
        SingularDesignError: if sum(Z f_bar) is zero
    """
    Kkn, Kstar_kn, Z, y_bar, f_bar = _weighted_moments(data)

    C_n = float(np.dot(Z, f_bar))
    numerator = float(np.dot(Z, y_bar))
    if C_n == 0 or not math.isfinite(C_n):
        raise SingularDesignError("instrument-regressor cross-moment is zero")

    return EstimationResult(
        beta_hat=numerator / C_n,
        t_stat=float('nan'),
        C_n=C_n,
        numerator=numerator,
        A_n=(1.0, float('nan')),
        V_n=np.full((2, 2), np.nan),
        sigma_tilde2=float('nan'),
        delta_tilde=float('nan'),
        scheme_used=data.scheme,
        beta0=data.beta0,
    )


def ltls_tstat(data: RegressionInput, variant: Studentization = Studentization.STANDARD_A,
               prelim: Optional[PreliminaryStats] = None) -> EstimationResult:
    """
    Studentized LTLS statistic for H0: beta = beta0

    Args:
        data: Aligned regression input
        variant: STANDARD_A uses sum(f K)/sum(K*) in A_n, STAR_A uses sum(f K*)/sum(K*)
        prelim: Preliminary OLS of y on f(x); computed here when omitted

    Returns:
        Fully populated EstimationResult

    Raises:
        SingularDesignError: zero cross-moment
        DegenerateStudentizationError: sigma^2 A V A' is not positive while beta_hat != beta0
    """
    variant = Studentization(variant)
    if prelim is None:
        prelim = preliminary_ols(data.y, data.fx)

    Kkn, Kstar_kn, Z, y_bar, f_bar = _weighted_moments(data)
    C_n = float(np.dot(Z, f_bar))
    numerator = float(np.dot(Z, y_bar))
    if C_n == 0 or not math.isfinite(C_n):
        raise SingularDesignError("instrument-regressor cross-moment is zero")
    beta_hat = numerator / C_n

    f = data.fx
    sum_kstar = float(Kstar_kn.sum())
    if variant is Studentization.STANDARD_A:
        a2 = -float(np.dot(f, Kkn)) / sum_kstar
    else:
        a2 = -float(np.dot(f, Kstar_kn)) / sum_kstar

    cross = float(np.sum(Kstar_kn * Kkn * f))
    V_n = np.array([
        [float(np.sum(Kkn ** 2 * f ** 2)), cross],
        [cross, float(np.sum(Kstar_kn ** 2))],
    ])
    A_vec = np.array([1.0, a2])
    quad = float(A_vec @ V_n @ A_vec)
    variance = prelim.sigma_tilde2 * quad

    diff = beta_hat - data.beta0
    if variance > 0 and math.isfinite(variance):
        t_stat = C_n * diff / math.sqrt(variance)
    elif abs(diff) <= 1e-12 * max(1.0, abs(beta_hat), abs(data.beta0)):
        t_stat = 0.0
    else:
        raise DegenerateStudentizationError(
            f"variance quadratic form is {variance:.3g} with beta_hat - beta0 = {diff:.3g}")

    return EstimationResult(
        beta_hat=beta_hat,
        t_stat=float(t_stat),
        C_n=C_n,
        numerator=numerator,
        A_n=(1.0, a2),
        V_n=V_n,
        sigma_tilde2=prelim.sigma_tilde2,
        delta_tilde=prelim.delta_tilde,
        scheme_used=data.scheme,
        variant=variant,
        beta0=data.beta0,
    )
