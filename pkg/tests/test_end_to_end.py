"""
End-to-end integration tests for LTLS Predict
Tests the complete pipeline from CLI input to output files
"""

import pytest
import pandas as pd
import numpy as np
import tempfile
import os
import sys
from pathlib import Path
from click.testing import CliRunner

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from cli import cli
from main import LTLSRunner
from reporting.export import read_header
from utils.config import apply_overrides, load_config
from utils.errors import SingularDesignError
from utils.logger import setup_test_logger

FIXTURE = str(Path(__file__).parent / 'fixtures' / 'market_small.csv')


class TestEndToEnd:
    """End-to-end integration tests"""

    @pytest.fixture
    def temp_dir(self):
        """Create a temporary directory for test files"""
        with tempfile.TemporaryDirectory() as temp_dir:
            yield temp_dir

    @pytest.fixture
    def noiseless_csv(self, temp_dir):
        """Series file with y_k = 2 x_{k-1} exactly"""
        x = np.cumsum(np.random.default_rng(42).standard_normal(120))
        y = np.concatenate(([0.0], 2.0 * x[:-1]))
        csv_path = os.path.join(temp_dir, 'noiseless.csv')
        pd.DataFrame({'y': y, 'x': x}).to_csv(csv_path, index=False)
        return csv_path

    @pytest.fixture
    def noisy_csv(self, temp_dir):
        """Series file from a near-integrated regressor with endogenous errors"""
        rng = np.random.default_rng(7)
        xi = rng.standard_normal(300)
        u = -0.9 * xi + np.sqrt(1 - 0.81) * rng.standard_normal(300)
        x = np.cumsum(xi)
        y = 0.3 + np.concatenate(([0.0], 0.01 * x[:-1])) + u
        csv_path = os.path.join(temp_dir, 'noisy.csv')
        pd.DataFrame({'ret': y, 'ep': x}).to_csv(csv_path, index=False)
        return csv_path

    def _size_args(self, temp_dir, out='size.csv', *extra):
        return ['size', '--regime', 'ni', '--c', '0', '--delta', '0', '--delta', '-0.95',
                '--n', '60', '--method', 'T3', '--method', 'OLS', '--reps', '100',
                '--out', os.path.join(temp_dir, out), '--log', os.path.join(temp_dir, 'ltls.log'),
                '--no-preview', *extra]

    def test_size_campaign(self, temp_dir):
        """A small size campaign writes the long table, its wide sibling and a header"""
        runner = CliRunner()
        result = runner.invoke(cli, self._size_args(temp_dir))

        assert result.exit_code == 0, result.output
        assert "✅ size completed successfully!" in result.output

        output_file = os.path.join(temp_dir, 'size.csv')
        table = pd.read_csv(output_file, comment='#')
        assert len(table) == 4
        assert set(table['method']) == {'T3', 'OLS'}
        assert table['reps'].eq(100).all()

        header = read_header(output_file)
        assert header['command'] == 'size'
        assert header['seed'] == '20240101'
        assert len(header['config_hash']) == 64

        wide = pd.read_csv(os.path.join(temp_dir, 'size_wide.csv'), comment='#')
        assert 'delta=-0.95 OLS' in wide.columns
        assert os.path.exists(os.path.join(temp_dir, 'ltls.log'))

    def test_size_reproducible(self, temp_dir):
        """Same seed gives the same table and hash regardless of worker count"""
        runner = CliRunner()
        first = runner.invoke(cli, self._size_args(temp_dir, 'a.csv'))
        second = runner.invoke(cli, self._size_args(temp_dir, 'b.csv', '--threads', '2'))
        assert first.exit_code == 0 and second.exit_code == 0

        a = pd.read_csv(os.path.join(temp_dir, 'a.csv'), comment='#')
        b = pd.read_csv(os.path.join(temp_dir, 'b.csv'), comment='#')
        pd.testing.assert_frame_equal(a, b)
        assert read_header(os.path.join(temp_dir, 'a.csv'))['config_hash'] == \
            read_header(os.path.join(temp_dir, 'b.csv'))['config_hash']

    def test_seed_changes_hash(self, temp_dir):
        runner = CliRunner()
        runner.invoke(cli, self._size_args(temp_dir, 'a.csv'))
        runner.invoke(cli, self._size_args(temp_dir, 'b.csv', '--seed', '5'))
        assert read_header(os.path.join(temp_dir, 'a.csv'))['config_hash'] != \
            read_header(os.path.join(temp_dir, 'b.csv'))['config_hash']
        assert read_header(os.path.join(temp_dir, 'b.csv'))['seed'] == '5'

    def test_invalid_level(self, temp_dir):
        """Invalid nominal size is rejected with the offending field"""
        runner = CliRunner()
        result = runner.invoke(cli, self._size_args(temp_dir) + ['--level', '0.9'])
        assert result.exit_code != 0
        assert "size.level" in result.output
        assert not os.path.exists(os.path.join(temp_dir, 'size.csv'))

    def test_excel_export(self, temp_dir):
        runner = CliRunner()
        result = runner.invoke(cli, self._size_args(temp_dir, 'size.csv', '--excel'))
        assert result.exit_code == 0, result.output

        sheets = pd.read_excel(os.path.join(temp_dir, 'size.xlsx'), sheet_name=None)
        assert set(sheets) == {'Results', 'Run Info'}
        assert len(sheets['Results']) == 4

    def test_config_file(self, temp_dir):
        config_path = os.path.join(temp_dir, 'run.yaml')
        with open(config_path, 'w') as handle:
            handle.write("seed: 11\nreps: 100\npower:\n  regime: ni\n  c_values: [0]\n"
                         "  deltas: [0]\n  sizes: [60]\n  methods: [OLS]\n  beta_grid: [0.0, 0.5]\n")
        runner = CliRunner()
        result = runner.invoke(cli, ['power', '--config', config_path,
                                     '--out', os.path.join(temp_dir, 'power.csv'),
                                     '--log', os.path.join(temp_dir, 'ltls.log'), '--no-preview'])
        assert result.exit_code == 0, result.output

        table = pd.read_csv(os.path.join(temp_dir, 'power.csv'), comment='#')
        assert table['beta'].tolist() == [0.0, 0.5]
        assert table.loc[1, 'reject_rate'] > table.loc[0, 'reject_rate']
        assert read_header(os.path.join(temp_dir, 'power.csv'))['seed'] == '11'

    def test_unknown_config_key(self, temp_dir):
        config_path = os.path.join(temp_dir, 'run.yaml')
        with open(config_path, 'w') as handle:
            handle.write("size:\n  levle: 0.05\n")
        runner = CliRunner()
        result = runner.invoke(cli, ['size', '--config', config_path,
                                     '--log', os.path.join(temp_dir, 'ltls.log')])
        assert result.exit_code == 1
        assert "size.levle" in result.output

    def test_estimate_noiseless(self, noiseless_csv, temp_dir):
        """Noiseless data recovers the slope exactly"""
        runner = CliRunner()
        output_file = os.path.join(temp_dir, 'estimate.csv')
        result = runner.invoke(cli, ['estimate', noiseless_csv, '--setup', 'S1', '--out', output_file,
                                     '--log', os.path.join(temp_dir, 'ltls.log')])

        assert result.exit_code == 0, result.output
        assert "beta_hat = 2.000000" in result.output
        assert "Estimation report" in result.output

        table = pd.read_csv(output_file, comment='#')
        assert len(table) == 1
        assert table.loc[0, 'beta_hat'] == pytest.approx(2.0, abs=1e-10)
        assert table.loc[0, 't_stat'] == 0.0
        assert table.loc[0, 'n'] == 119

    def test_estimate_columns_and_baselines(self, noisy_csv, temp_dir):
        runner = CliRunner()
        output_file = os.path.join(temp_dir, 'estimate.csv')
        result = runner.invoke(cli, ['estimate', noisy_csv, '--y-col', 'ret', '--x-col', 'ep',
                                     '--setup', 's3', '--out', output_file, '--no-preview',
                                     '--log', os.path.join(temp_dir, 'ltls.log')])
        assert result.exit_code == 0, result.output

        table = pd.read_csv(output_file, comment='#')
        for column in ('beta_hat', 't_stat', 'c_n', 'l_n', 'ols_t_stat', 'ivx_t_stat'):
            assert column in table.columns
        assert table.loc[0, 'setup'] == 'S3'
        assert table.loc[0, 'variant'] == 'star_A'
        assert np.isfinite(table.loc[0, 't_stat'])

    def test_estimate_without_input(self, temp_dir):
        runner = CliRunner()
        result = runner.invoke(cli, ['estimate', '--log', os.path.join(temp_dir, 'ltls.log')])
        assert result.exit_code == 1
        assert "❌ Error" in result.output

    def test_library_error_is_reported(self, noiseless_csv, temp_dir, monkeypatch):
        def broken(self, config, **kwargs):
            raise SingularDesignError("instrument-regressor cross-moment is zero")

        monkeypatch.setattr(LTLSRunner, 'run_estimate', broken)
        runner = CliRunner()
        result = runner.invoke(cli, ['estimate', noiseless_csv,
                                     '--log', os.path.join(temp_dir, 'ltls.log')])
        assert result.exit_code == 1
        assert "❌ Error: instrument-regressor cross-moment is zero" in result.output

    def test_programming_error_propagates(self, noiseless_csv, temp_dir, monkeypatch):
        def broken(self, config, **kwargs):
            raise RuntimeError("boom")

        monkeypatch.setattr(LTLSRunner, 'run_estimate', broken)
        runner = CliRunner()
        result = runner.invoke(cli, ['estimate', noiseless_csv,
                                     '--log', os.path.join(temp_dir, 'ltls.log')])
        assert isinstance(result.exception, RuntimeError)
        assert "❌" not in result.output

    def test_predict_fixture(self, temp_dir):
        runner = CliRunner()
        output_file = os.path.join(temp_dir, 'predict.csv')
        result = runner.invoke(cli, ['predict', FIXTURE, '--horizon', '1', '--horizon', '2',
                                     '--horizon', '3', '--out', output_file,
                                     '--log', os.path.join(temp_dir, 'ltls.log')])
        assert result.exit_code == 0, result.output
        assert "Horizons scanned: 3" in result.output

        table = pd.read_csv(output_file, comment='#')
        assert len(table) == 9
        assert sorted(table['setup'].unique()) == ['S1', 'S2', 'S3']
        assert read_header(output_file)['seed'] == 'none'

    def test_predict_max_horizon(self, temp_dir):
        runner = CliRunner()
        output_file = os.path.join(temp_dir, 'predict.csv')
        result = runner.invoke(cli, ['predict', FIXTURE, '--max-horizon', '4', '--setup', 'S3',
                                     '--out', output_file, '--no-preview',
                                     '--log', os.path.join(temp_dir, 'ltls.log')])
        assert result.exit_code == 0, result.output
        table = pd.read_csv(output_file, comment='#')
        assert table['m'].tolist() == [1, 2, 3, 4]

    def test_memory_fixture_reports_failures(self, temp_dir):
        """Short series are reported per row instead of aborting the run"""
        runner = CliRunner()
        output_file = os.path.join(temp_dir, 'memory.csv')
        result = runner.invoke(cli, ['memory', FIXTURE, '--b', '0.65', '--out', output_file,
                                     '--log', os.path.join(temp_dir, 'ltls.log')])
        assert result.exit_code == 0, result.output
        assert "0 ok, 8 failed" in result.output
        table = pd.read_csv(output_file, comment='#')
        assert len(table) == 8

    def test_memory_missing_dataset(self, temp_dir):
        runner = CliRunner()
        result = runner.invoke(cli, ['memory', os.path.join(temp_dir, 'absent.csv'),
                                     '--log', os.path.join(temp_dir, 'ltls.log')])
        assert result.exit_code == 1
        assert "❌ Error" in result.output

    def test_version(self):
        runner = CliRunner()
        result = runner.invoke(cli, ['--version'])
        assert result.exit_code == 0
        assert "1.0.0" in result.output


class TestLTLSRunner:
    """Direct tests of the dispatcher behind the CLI"""

    @pytest.fixture
    def temp_dir(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            yield temp_dir

    @pytest.fixture
    def runner(self):
        return LTLSRunner(logger=setup_test_logger())

    def test_run_power(self, runner, temp_dir):
        config = apply_overrides(load_config(), {
            'reps': 100, 'power.c_values': [0.0], 'power.deltas': [-0.5], 'power.sizes': [60],
            'power.methods': ['T3', 'IVX'], 'power.beta_grid': [0.0]})
        result = runner.run_power(config, output=os.path.join(temp_dir, 'power.csv'), preview=False)
        assert result['success']
        assert len(result['table']) == 2
        assert result['output_file'].endswith('power.csv')

    def test_run_fractional_size(self, runner, temp_dir):
        config = apply_overrides(load_config(), {
            'reps': 100, 'size.regime': 'fractional', 'size.d_values': [0.9],
            'size.deltas': [-0.95], 'size.sizes': [60]})
        result = runner.run_size(config, output=os.path.join(temp_dir, 'size.csv'), preview=False)
        assert result['success']
        assert result['table']['method'].tolist() == ['T3', 'OLS']
        assert result['table']['regime'].eq('fractional').all()

    def test_run_predict_without_dataset(self, runner):
        result = runner.run_predict(load_config())
        assert not result['success']
        assert result['output_file'] is None
