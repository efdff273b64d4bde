"""
Baseline Tests Module
Conventional OLS t-test and the IVX instrumental-variable test used as
comparison methods
"""

import math
from dataclasses import dataclass, field
from typing import Dict

import numpy as np
import statsmodels.api as sm
from scipy import signal
from statsmodels.stats.sandwich_covariance import S_hac_simple

from estimators.ltls import is_exact_fit, preliminary_ols
from utils.errors import DegenerateStudentizationError, DomainError, SingularDesignError
from utils.helpers import as_float_vector

IVX_C_Z = -1.0
IVX_B = 0.95


@dataclass(frozen=True)
class BaselineResult:
    method: str
    beta_hat: float
    t_stat: float
    nuisance: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        record = {'method': self.method, 'beta_hat': self.beta_hat, 't_stat': self.t_stat}
        record.update(self.nuisance)
        return record


def _check_pair(y, x, minimum: int):
    y = as_float_vector(y, 'y')
    x = as_float_vector(x, 'x')
    if y.size != x.size:
        raise DomainError(f"y and x lengths differ: {y.size} != {x.size}")
    if y.size < minimum:
        raise DomainError(f"at least {minimum} observations are required, got {y.size}")
    if np.ptp(x) == 0:
        raise SingularDesignError("regressor has zero sample variance")
    return y, x


def ols_ttest(y, x, beta0: float = 0.0) -> BaselineResult:
    """
    Intercept-included OLS slope with the conventional t-statistic

    Args:
        y: Aligned responses
        x: Aligned regressor
        beta0: Null value

    Returns:
        BaselineResult for method 'OLS'

    Raises:
        SingularDesignError: zero-variance regressor
        DegenerateStudentizationError: zero residual variance
    """
    y, x = _check_pair(y, x, 4)
    fit = sm.OLS(y, sm.add_constant(x, has_constant='add')).fit()
    beta_hat = float(fit.params[1])
    se = float(fit.bse[1])

    if is_exact_fit(np.asarray(fit.resid), y) or not (se > 0 and math.isfinite(se)):
        raise DegenerateStudentizationError("OLS residual variance is zero")

    return BaselineResult(
        method='OLS',
        beta_hat=beta_hat,
        t_stat=(beta_hat - beta0) / se,
        nuisance={'sigma2': float(fit.scale)},
    )


def ivx_instrument(x, c_z: float = IVX_C_Z, b: float = IVX_B, x0: float = 0.0) -> np.ndarray:
    """
    Mildly integrated instrument Z_k = rho_z Z_{k-1} + (x_k - x_{k-1})

    Args:
        x: Regressor x_1..x_n
        c_z: Negative instrument persistence constant
        b: Rate exponent in (0, 1); rho_z = 1 + c_z / n**b
        x0: Pre-sample value of x

    Returns:
        Z_1..Z_n with Z_0 = 0
    """
    x = as_float_vector(x, 'x')
    if not c_z < 0:
        raise DomainError(f"c_z must be negative, got {c_z}")
    if not 0 < b < 1:
        raise DomainError(f"b must lie in (0, 1), got {b}")

    rho_z = 1.0 + c_z / x.size ** b
    dx = np.diff(x, prepend=x0)
    return signal.lfilter([1.0], [1.0, -rho_z], dx)


def _long_run(series: np.ndarray, lags: int) -> np.ndarray:
    # Bartlett-weighted long-run covariance, normalised by the sample size
    return S_hac_simple(series, nlags=lags) / series.shape[0]


def ivx_ttest(y, x, beta0: float = 0.0, c_z: float = IVX_C_Z, b: float = IVX_B,
              correction: bool = True) -> BaselineResult:
    """
    IVX slope with the self-normalised t-statistic

    y and x are demeaned, the instrument is not. The variance term is
    sum(Z^2) Sigma_ee minus, with the intercept correction, n * zbar^2 *
    Omega_FM where Omega_FM = Sigma_ee - Omega_eu^2 / Omega_uu is built from
    Bartlett long-run covariances with floor(n^(1/3)) lags.

    Args:
        y: Aligned responses
        x: Aligned regressor
        beta0: Null value
        c_z: Instrument persistence constant
        b: Instrument rate exponent
        correction: Apply the finite-sample intercept correction

    Returns:
        BaselineResult for method 'IVX'

    Raises:
        SingularDesignError: zero instrument-regressor cross-moment
        DegenerateStudentizationError: non-positive variance term
    """
    y, x = _check_pair(y, x, 8)
    n = y.size

    Z = ivx_instrument(x, c_z, b)
    y_bar = y - y.mean()
    x_bar = x - x.mean()

    cross = float(np.dot(Z, x_bar))
    if cross == 0 or not math.isfinite(cross):
        raise SingularDesignError("instrument-regressor cross-moment is zero")
    beta_hat = float(np.dot(Z, y_bar)) / cross

    prelim = preliminary_ols(y, x)
    eps = prelim.residuals_u
    sigma_ee = float(np.mean(eps ** 2))
    variance = float(np.dot(Z, Z)) * sigma_ee

    lags = int(math.floor(n ** (1.0 / 3.0)))
    omega_fm = float('nan')
    if correction:
        joint = np.column_stack([prelim.residuals_u[:-1], prelim.residuals_xi])
        omega = _long_run(joint, lags)
        omega_uu = float(omega[1, 1])
        omega_fm = sigma_ee - (float(omega[0, 1]) ** 2 / omega_uu if omega_uu > 0 else 0.0)
        variance -= n * float(Z.mean()) ** 2 * omega_fm

    diff = beta_hat - beta0
    if variance > 0 and math.isfinite(variance):
        t_stat = cross * diff / math.sqrt(variance)
    elif abs(diff) <= 1e-12 * max(1.0, abs(beta_hat), abs(beta0)):
        t_stat = 0.0
    else:
        raise DegenerateStudentizationError(f"IVX variance term is {variance:.3g}")

    return BaselineResult(
        method='IVX',
        beta_hat=beta_hat,
        t_stat=float(t_stat),
        nuisance={'c_z': float(c_z), 'b': float(b), 'lags': lags,
                  'correction': bool(correction), 'omega_fm': omega_fm},
    )
