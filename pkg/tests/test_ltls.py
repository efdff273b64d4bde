"""
Unit tests for the LTLS estimator, trimmed demeaning and the t-statistic
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from estimators.kernels import ConstantOnAll, GaussianDensityPower, TrimmingScheme, trimming_weights
from estimators.ltls import (
    RegressionInput,
    Studentization,
    ltls_estimate,
    ltls_tstat,
    preliminary_ols,
    trimmed_mean,
)
from simulation.dgp import DgpSpec, NearIntegrated, gen_series, regression_pairs
from simulation.rng import replication_stream
from utils.errors import (
    DegenerateStudentizationError,
    DegenerateWeightsError,
    DomainError,
    SingularDesignError,
)


def _scheme(c_n=20.0, l_n=4):
    return TrimmingScheme(c_n=c_n, l_n=l_n, K=GaussianDensityPower(0.1, 0.5),
                          K_star=GaussianDensityPower(1.0, 0.5))


def _sample(n=200, beta=0.0, delta=-0.5, c=-5.0, seed=1):
    spec = DgpSpec(delta=delta, regressor=NearIntegrated(c), n=n, beta=beta)
    return regression_pairs(gen_series(spec, replication_stream(seed, 77, 0)))


class TestTrimmedMean:
    """Test cases for the K*-weighted mean"""

    def test_constant_vector(self):
        assert trimmed_mean([5.0, 5.0, 5.0, 5.0], [0.3, 0.1, 2.0, 0.7]) == 5.0

    def test_uniform_weights(self):
        a = np.array([1.0, 4.0, 2.0, 9.0])
        assert trimmed_mean(a, np.ones(4)) == pytest.approx(a.mean())

    def test_hand_computation(self):
        assert trimmed_mean([1.0, 2.0, 3.0], [1.0, 0.0, 1.0]) == pytest.approx(2.0)

    def test_zero_weights(self):
        with pytest.raises(DegenerateWeightsError):
            trimmed_mean([1.0, 2.0], [0.0, 0.0])

    def test_shape_mismatch(self):
        with pytest.raises(DomainError):
            trimmed_mean([1.0, 2.0, 3.0], [1.0, 1.0])


class TestPreliminaryOls:
    """Test cases for the preliminary regressions"""

    def test_degenerate_residuals(self):
        x = np.arange(1.0, 51.0)
        prelim = preliminary_ols(2.0 * x, x)
        assert prelim.degenerate
        assert prelim.delta_tilde == 0.0
        assert prelim.sigma_tilde2 == 0.0

    def test_residual_lengths(self):
        y, x = _sample(n=100)
        prelim = preliminary_ols(y, x)
        assert prelim.residuals_u.size == 100
        assert prelim.residuals_xi.size == 99
        assert -1.0 <= prelim.delta_tilde <= 1.0
        assert prelim.sigma_tilde2 > 0

    def test_correlation_consistency(self):
        y, x = _sample(n=100_000, delta=0.5, c=0.0, seed=4)
        prelim = preliminary_ols(y, x)
        assert prelim.delta_tilde == pytest.approx(0.5, abs=0.02)
        assert prelim.sigma_tilde2 == pytest.approx(1.0, abs=0.02)

    def test_zero_variance_regressor(self):
        with pytest.raises(SingularDesignError):
            preliminary_ols(np.arange(10.0), np.ones(10))

    def test_too_short(self):
        with pytest.raises(DomainError):
            preliminary_ols([1.0, 2.0, 3.0], [1.0, 0.0, 2.0])


class TestLtlsEstimate:
    """Test cases for the LTLS slope"""

    def test_noiseless_exactness(self):
        rng = np.random.default_rng(0)
        x = np.cumsum(rng.standard_normal(300))
        y = 1.7 + 2.0 * x
        result = ltls_estimate(RegressionInput(y=y, fx=x, scheme=_scheme()))
        assert result.beta_hat == pytest.approx(2.0, abs=1e-10)
        assert np.isnan(result.t_stat)

    def test_constant_kernels_reduce_to_ols(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal(150)
        y = 0.5 + 0.8 * x + rng.standard_normal(150)
        scheme = TrimmingScheme(c_n=1.0, l_n=3, K=ConstantOnAll(), K_star=ConstantOnAll())
        result = ltls_estimate(RegressionInput(y=y, fx=x, scheme=scheme))
        ols_slope = np.sum((x - x.mean()) * (y - y.mean())) / np.sum((x - x.mean()) ** 2)
        assert result.beta_hat == pytest.approx(ols_slope, abs=1e-12)

    def test_small_sample_oracle(self):
        y = np.array([0.3, -1.1, 0.8, 2.0, -0.4, 1.2])
        x = np.array([1.0, 0.5, -0.2, 1.4, 0.9, -0.7])
        scheme = TrimmingScheme(c_n=2.0, l_n=2, K=GaussianDensityPower(0.5, 1.0),
                                K_star=GaussianDensityPower(1.0, 0.5))
        result = ltls_estimate(RegressionInput(y=y, fx=x, scheme=scheme))

        Kkn, Kstar_kn = trimming_weights(scheme, 6)
        y_mean = sum(y[i] * Kstar_kn[i] for i in range(6)) / sum(Kstar_kn)
        x_mean = sum(x[i] * Kstar_kn[i] for i in range(6)) / sum(Kstar_kn)
        num = sum(x[i] * Kkn[i] * (y[i] - y_mean) for i in range(6))
        den = sum(x[i] * Kkn[i] * (x[i] - x_mean) for i in range(6))
        assert result.beta_hat == pytest.approx(num / den, rel=1e-12)
        assert result.C_n == pytest.approx(den, rel=1e-12)

    def test_regressor_scaling(self):
        y, x = _sample(beta=0.1)
        base = ltls_estimate(RegressionInput(y=y, fx=x, scheme=_scheme())).beta_hat
        scaled = ltls_estimate(RegressionInput(y=y, fx=3.0 * x, scheme=_scheme())).beta_hat
        assert scaled == pytest.approx(base / 3.0, rel=1e-10)

    def test_zero_cross_moment(self):
        x = np.ones(20)
        with pytest.raises(SingularDesignError):
            ltls_estimate(RegressionInput(y=np.arange(20.0), fx=x, scheme=_scheme()))

    def test_input_validation(self):
        with pytest.raises(DomainError):
            RegressionInput(y=np.ones(10), fx=np.ones(9), scheme=_scheme())
        with pytest.raises(DomainError):
            RegressionInput(y=np.ones(3), fx=np.ones(3), scheme=_scheme())
        with pytest.raises(DomainError):
            RegressionInput(y=[1.0, np.nan, 2.0, 3.0], fx=np.ones(4), scheme=_scheme())


class TestLtlsTstat:
    """Test cases for the studentized statistic"""

    def test_degenerate_null_gives_zero(self):
        rng = np.random.default_rng(2)
        x = np.cumsum(rng.standard_normal(120))
        y = 0.4 * x
        result = ltls_tstat(RegressionInput(y=y, fx=x, scheme=_scheme(), beta0=0.4))
        assert result.t_stat == 0.0

    def test_degenerate_alternative_raises(self):
        rng = np.random.default_rng(3)
        x = np.cumsum(rng.standard_normal(120))
        with pytest.raises(DegenerateStudentizationError):
            ltls_tstat(RegressionInput(y=0.4 * x, fx=x, scheme=_scheme(), beta0=0.0))

    def test_intercept_invariance(self):
        y, x = _sample(seed=5)
        base = ltls_tstat(RegressionInput(y=y, fx=x, scheme=_scheme()))
        shifted = ltls_tstat(RegressionInput(y=y + 7.3, fx=x, scheme=_scheme()))
        assert shifted.t_stat == pytest.approx(base.t_stat, rel=1e-8)
        assert shifted.beta_hat == pytest.approx(base.beta_hat, rel=1e-8, abs=1e-12)

    @pytest.mark.parametrize("scale", [0.1, 10.0])
    def test_response_scale_invariance(self, scale):
        y, x = _sample(seed=6)
        base = ltls_tstat(RegressionInput(y=y, fx=x, scheme=_scheme()))
        scaled = ltls_tstat(RegressionInput(y=scale * y, fx=x, scheme=_scheme()))
        assert scaled.t_stat == pytest.approx(base.t_stat, rel=1e-8)

    def test_variance_matrix(self):
        y, x = _sample(seed=7)
        result = ltls_tstat(RegressionInput(y=y, fx=x, scheme=_scheme()))
        np.testing.assert_allclose(result.V_n, result.V_n.T)
        assert result.V_n[1, 1] > 0
        assert result.A_n[0] == 1.0

    def test_variants_differ_in_a_vector(self):
        y, x = _sample(seed=8)
        data = RegressionInput(y=y, fx=x, scheme=_scheme())
        standard = ltls_tstat(data, Studentization.STANDARD_A)
        star = ltls_tstat(data, Studentization.STAR_A)
        assert standard.beta_hat == star.beta_hat
        assert standard.A_n[1] != star.A_n[1]

        Kkn, Kstar_kn = trimming_weights(data.scheme, data.n)
        assert star.A_n[1] == pytest.approx(-np.dot(x, Kstar_kn) / Kstar_kn.sum(), rel=1e-12)
        assert standard.A_n[1] == pytest.approx(-np.dot(x, Kkn) / Kstar_kn.sum(), rel=1e-12)

    def test_explicit_studentization_formula(self):
        y, x = _sample(seed=9)
        data = RegressionInput(y=y, fx=x, scheme=_scheme(), beta0=0.05)
        prelim = preliminary_ols(y, x)
        result = ltls_tstat(data, prelim=prelim)

        Kkn, Kstar_kn = trimming_weights(data.scheme, data.n)
        a2 = -np.dot(x, Kkn) / Kstar_kn.sum()
        quad = (np.sum(Kkn ** 2 * x ** 2) + 2 * a2 * np.sum(Kstar_kn * Kkn * x)
                + a2 ** 2 * np.sum(Kstar_kn ** 2))
        expected = result.C_n * (result.beta_hat - 0.05) / np.sqrt(prelim.sigma_tilde2 * quad)
        assert result.t_stat == pytest.approx(expected, rel=1e-10)

    def test_result_record(self):
        y, x = _sample(seed=10)
        record = ltls_tstat(RegressionInput(y=y, fx=x, scheme=_scheme())).to_dict()
        for key in ('beta_hat', 't_stat', 'C_n', 'sigma_tilde2', 'delta_tilde', 'c_n', 'l_n'):
            assert key in record
        assert record['variant'] == 'standard_A'
