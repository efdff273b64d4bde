"""
Unit tests for the OLS and IVX baseline tests
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from estimators.baselines import IVX_B, IVX_C_Z, ivx_instrument, ivx_ttest, ols_ttest
from simulation.dgp import DgpSpec, FractionalTypeII, NearIntegrated, gen_series, regression_pairs
from simulation.rng import replication_stream
from utils.errors import DegenerateStudentizationError, DomainError, SingularDesignError


def _sample(n=250, delta=-0.95, c=0.0, beta=0.0, seed=1):
    spec = DgpSpec(delta=delta, regressor=NearIntegrated(c), n=n, beta=beta)
    return regression_pairs(gen_series(spec, replication_stream(seed, 5, 0)))


class TestOlsTtest:
    """Test cases for the conventional t-test"""

    def test_matches_textbook_formula(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            n = int(rng.integers(10, 200))
            x = rng.standard_normal(n) * rng.uniform(0.5, 3.0)
            y = rng.uniform(-1, 1) + rng.uniform(-2, 2) * x + rng.standard_normal(n)

            sxx = np.sum((x - x.mean()) ** 2)
            slope = np.sum((x - x.mean()) * (y - y.mean())) / sxx
            resid = y - y.mean() - slope * (x - x.mean())
            se = np.sqrt(np.sum(resid ** 2) / (n - 2) / sxx)

            result = ols_ttest(y, x, beta0=0.1)
            assert result.beta_hat == pytest.approx(slope, rel=1e-10)
            assert result.t_stat == pytest.approx((slope - 0.1) / se, rel=1e-9)

    def test_noiseless_is_degenerate(self):
        x = np.cumsum(np.random.default_rng(1).standard_normal(50))
        with pytest.raises(DegenerateStudentizationError):
            ols_ttest(3.0 + 2.0 * x, x)

    def test_zero_variance_regressor(self):
        with pytest.raises(SingularDesignError):
            ols_ttest(np.arange(10.0), np.full(10, 2.0))

    def test_record(self):
        y, x = _sample()
        record = ols_ttest(y, x).to_dict()
        assert record['method'] == 'OLS'
        assert record['sigma2'] > 0


class TestIvxInstrument:
    """Test cases for the mildly integrated instrument"""

    def test_hand_recursion(self):
        rho = 1.0 - 1.0 / 4 ** 0.95
        expected = [1.0, rho, rho ** 2 + 1.0, rho * (rho ** 2 + 1.0)]
        np.testing.assert_allclose(ivx_instrument([1.0, 1.0, 2.0, 2.0], -1.0, 0.95), expected, rtol=1e-14)

    def test_matches_direct_sum(self):
        rng = np.random.default_rng(2)
        for n in (5, 37, 256):
            x = np.cumsum(rng.standard_normal(n))
            rho = 1.0 + IVX_C_Z / n ** IVX_B
            dx = np.diff(x, prepend=0.0)
            direct = np.array([sum(rho ** (k - i) * dx[i] for i in range(k + 1)) for k in range(n)])
            np.testing.assert_allclose(ivx_instrument(x), direct, rtol=0, atol=1e-9)

    def test_zero_root_gives_differences(self):
        x = np.array([0.5, 1.5, 1.0, 3.0, 2.5])
        c_z = -(5 ** 0.9)
        np.testing.assert_allclose(ivx_instrument(x, c_z, 0.9), np.diff(x, prepend=0.0), atol=1e-14)

    def test_invalid_tuning(self):
        with pytest.raises(DomainError):
            ivx_instrument([1.0, 2.0], c_z=0.5)
        with pytest.raises(DomainError):
            ivx_instrument([1.0, 2.0], b=1.0)


class TestIvxTtest:
    """Test cases for the IVX t-test"""

    def test_noiseless_slope(self):
        x = np.cumsum(np.random.default_rng(3).standard_normal(200))
        result = ivx_ttest(3.0 + 2.0 * x, x, beta0=2.0)
        assert result.beta_hat == pytest.approx(2.0, abs=1e-10)
        assert result.t_stat == 0.0

    def test_intercept_invariance(self):
        y, x = _sample(seed=4)
        base = ivx_ttest(y, x)
        shifted = ivx_ttest(y - 4.2, x)
        assert shifted.beta_hat == pytest.approx(base.beta_hat, rel=1e-8, abs=1e-12)
        assert shifted.t_stat == pytest.approx(base.t_stat, rel=1e-7)

    def test_correction_changes_variance(self):
        y, x = _sample(seed=5)
        corrected = ivx_ttest(y, x, correction=True)
        plain = ivx_ttest(y, x, correction=False)
        assert corrected.beta_hat == plain.beta_hat
        assert corrected.t_stat != plain.t_stat
        assert np.isnan(plain.nuisance['omega_fm'])
        assert np.isfinite(corrected.nuisance['omega_fm'])

    def test_nuisance_record(self):
        y, x = _sample(n=300, seed=6)
        result = ivx_ttest(y, x)
        assert result.method == 'IVX'
        assert result.nuisance['lags'] == 6
        assert result.nuisance['c_z'] == IVX_C_Z
        assert result.nuisance['b'] == IVX_B

    def test_zero_variance_regressor(self):
        with pytest.raises(SingularDesignError):
            ivx_ttest(np.arange(20.0), np.ones(20))

    def test_too_short(self):
        with pytest.raises(DomainError):
            ivx_ttest(np.arange(5.0), np.arange(5.0) ** 2)


@pytest.mark.slow
class TestBaselineSize:
    """Null rejection frequencies at desk scale"""

    def test_ols_over_rejects_under_strong_endogeneity(self):
        t = np.array([ols_ttest(*_sample(seed=s)).t_stat for s in range(2000)])
        assert np.mean(np.abs(t) > 1.96) == pytest.approx(0.278, abs=0.02)

    def test_ivx_strong_endogeneity(self):
        t = np.array([ivx_ttest(*_sample(seed=s)).t_stat for s in range(2000)])
        assert np.mean(np.abs(t) > 1.96) == pytest.approx(0.059, abs=0.02)

    def test_ivx_size(self):
        t = np.array([ivx_ttest(*_sample(seed=s, delta=0.0)).t_stat for s in range(2000)])
        assert np.mean(np.abs(t) > 1.96) == pytest.approx(0.05, abs=0.02)


@pytest.mark.slow
class TestOlsSlopeBias:
    """Small-sample bias of the OLS slope with a unit-root regressor"""

    @staticmethod
    def _mean_slope(delta, reps=2000):
        slopes = []
        for seed in range(reps):
            spec = DgpSpec(delta=delta, regressor=FractionalTypeII(1.0), n=250, beta=0.05)
            y, x = regression_pairs(gen_series(spec, replication_stream(seed, 11, 0)))
            slopes.append(ols_ttest(y, x).beta_hat)
        return float(np.mean(slopes))

    def test_upward_bias_for_negative_correlation(self):
        bias = self._mean_slope(-0.95) - 0.05
        # roughly -delta times the autoregressive bias -5.5/n
        assert 0.01 < bias < 0.035

    def test_no_bias_without_correlation(self):
        assert self._mean_slope(0.0) == pytest.approx(0.05, abs=0.004)
