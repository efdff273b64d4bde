"""
LTLS Predict - Central Logic Dispatcher
Wires run configurations to campaigns, estimations and scans, and exports
their results
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from empirics.dataset import ingest_csv, ingest_pairs
from empirics.predictability import PredictabilityAnalyzer, crossing_horizon
from estimators import __version__
from estimators.baselines import ivx_ttest, ols_ttest
from estimators.setups import ltls_test
from reporting.export import ResultExporter, build_header, sibling_path
from reporting.tables import flatten_wide, render_record, render_table, render_wide
from simulation.dgp import DgpSpec
from simulation.montecarlo import (
    DEFAULT_BETA_GRID,
    FRACTIONAL_D_VALUES,
    FRACTIONAL_DELTAS,
    NI_C_VALUES,
    NI_DELTAS,
    POWER_DELTAS,
    SAMPLE_SIZES,
    McCampaign,
    Method,
    MonteCarloEngine,
    fractional_grid,
    ni_grid,
    resolve_reps,
    summarize,
)
from utils.config import RunConfig, resolved_hash
from utils.errors import LTLSError
from utils.helpers import format_number, generate_output_filename
from utils.logger import log_error_with_context

POWER_C_VALUES = (0.0, -20.0)
POWER_D_VALUES = (0.8, 1.0, 1.2)
NI_METHODS = ('T1', 'T2', 'T3', 'IVX', 'OLS')
FRACTIONAL_METHODS = ('T3', 'OLS')


def _failure(error: str) -> Dict[str, Any]:
    return {'success': False, 'error': error, 'output_file': None, 'summary': []}


class LTLSRunner:
    """Main coordinator behind every subcommand"""

    def __init__(self, logger=None):
        if logger:
            self.logger = logger
        else:
            self.logger = logging.getLogger(__name__)
            logging.basicConfig(level=logging.INFO)

        self.engine = MonteCarloEngine(self.logger)
        self.analyzer = PredictabilityAnalyzer(self.logger)
        self.exporter = ResultExporter(self.logger)

    # -- helpers ---------------------------------------------------------

    def _export(self, df: pd.DataFrame, command: str, config: RunConfig, output: Optional[str],
                excel: bool, label: str = '', seed: Optional[int] = None, **extra) -> Optional[str]:
        output_file = output or generate_output_filename(command, label, excel)
        valid, output_file, error = self.exporter.validate_output_path(output_file, excel)
        if not valid:
            self.logger.error(error)
            return None
        header = build_header(command, __version__, resolved_hash(config, command), seed, **extra)
        if not self.exporter.export_results(df, output_file, header, excel):
            return None
        return output_file

    def _show_preview(self, build, title: str):
        """Print a console table; build returns the rendered text"""
        try:
            text = build()
            print(f"\n📊 {title}:")
            print(text)
        except Exception as e:
            self.logger.warning(f"Failed to show preview: {str(e)}")

    def _dgp_grid(self, section, regime: str, defaults: Dict[str, Any]) -> List[DgpSpec]:
        sizes = section.sizes or defaults['sizes']
        if regime == 'ni':
            return ni_grid(c_values=section.c_values or defaults['c'],
                           deltas=section.deltas or defaults['ni_deltas'], sizes=sizes)
        return fractional_grid(d_values=section.d_values or defaults['d'],
                               deltas=section.deltas or defaults['fractional_deltas'], sizes=sizes)

    def _campaign(self, config: RunConfig, section, beta_grid, defaults) -> McCampaign:
        regime = section.regime
        methods = section.methods or (NI_METHODS if regime == 'ni' else FRACTIONAL_METHODS)
        return McCampaign(
            methods=tuple(Method(m) for m in methods),
            dgp_grid=tuple(self._dgp_grid(section, regime, defaults)),
            reps=resolve_reps(config.profile, config.reps),
            level=float(section.level),
            master_seed=int(config.seed),
            beta_grid=tuple(beta_grid),
            ivx_c_z=float(config.ivx.c_z),
            ivx_b=float(config.ivx.b),
        )

    # -- commands --------------------------------------------------------

    def run_size(self, config: RunConfig, output: Optional[str] = None, excel: bool = False,
                 preview: bool = True) -> Dict[str, Any]:
        """
        Empirical size campaign for the configured regime

        Returns:
            Dict with success status, output file path, error message, and summary
        """
        try:
            section = config.size
            defaults = {'sizes': SAMPLE_SIZES, 'c': NI_C_VALUES, 'd': FRACTIONAL_D_VALUES,
                        'ni_deltas': NI_DELTAS, 'fractional_deltas': FRACTIONAL_DELTAS}
            campaign = self._campaign(config, section, (0.0,), defaults)
            cells = self.engine.run_campaign(campaign, parallelism=int(config.threads))

            long = summarize(cells)
            wide = summarize(cells, layout='wide')
            output_file = self._export(long, 'size', config, output, excel, label=section.regime,
                                       seed=campaign.master_seed, reps=campaign.reps)
            if output_file is None:
                return _failure('Failed to export size table')
            if not excel:
                self.exporter.export_results(
                    flatten_wide(wide), sibling_path(output_file, 'wide'),
                    build_header('size', __version__, resolved_hash(config, 'size'),
                                 campaign.master_seed, reps=campaign.reps))

            if preview:
                self._show_preview(lambda: render_wide(wide), "Rejection frequencies")

            failures = int(long['failures'].sum())
            return {
                'success': True,
                'error': None,
                'output_file': output_file,
                'summary': [
                    f"Regime: {section.regime}, {len(campaign.dgp_grid)} DGPs × {len(campaign.methods)} methods",
                    f"Replications per cell: {format_number(campaign.reps)}",
                    f"Rows written: {len(long)}",
                    f"Failed replications: {format_number(failures)}",
                ],
                'table': long,
            }

        except LTLSError as e:
            log_error_with_context(self.logger, e, "size campaign")
            return _failure(str(e))

    def run_power(self, config: RunConfig, output: Optional[str] = None, excel: bool = False,
                  preview: bool = True) -> Dict[str, Any]:
        """Power curves over the configured beta grid"""
        try:
            section = config.power
            defaults = {'sizes': (250,), 'c': POWER_C_VALUES, 'd': POWER_D_VALUES,
                        'ni_deltas': POWER_DELTAS, 'fractional_deltas': POWER_DELTAS}
            beta_grid = section.beta_grid or DEFAULT_BETA_GRID
            campaign = self._campaign(config, section, beta_grid, defaults)
            cells = self.engine.run_campaign(campaign, parallelism=int(config.threads))

            long = summarize(cells)
            output_file = self._export(long, 'power', config, output, excel, label=section.regime,
                                       seed=campaign.master_seed, reps=campaign.reps)
            if output_file is None:
                return _failure('Failed to export power table')

            if preview:
                self._show_preview(lambda: render_table(
                    long.pivot_table(index=['c_or_d', 'delta', 'beta'], columns='method',
                                     values='reject_rate', sort=False).reset_index()), "Power curves")

            return {
                'success': True,
                'error': None,
                'output_file': output_file,
                'summary': [
                    f"Regime: {section.regime}, {len(campaign.beta_grid)} beta values",
                    f"Replications per cell: {format_number(campaign.reps)}",
                    f"Rows written: {len(long)}",
                ],
                'table': long,
            }

        except LTLSError as e:
            log_error_with_context(self.logger, e, "power campaign")
            return _failure(str(e))

    def run_estimate(self, config: RunConfig, output: Optional[str] = None, excel: bool = False,
                     preview: bool = True) -> Dict[str, Any]:
        """
        LTLS estimate and t-test on a two-column series file

        Row k of the file holds y_k and x_k; the regression pairs y_{k+1}
        with x_k.
        """
        section = config.estimate
        if not section.input:
            return _failure('No input file given for estimate')
        try:
            y, x = ingest_pairs(section.input, section.y_column, section.x_column)
            y_next, x_lag = y[1:], x[:-1]

            result = ltls_test(y_next, x_lag, section.setup, beta0=float(section.beta0),
                               empirical_kernels=bool(section.empirical_kernels))
            record = {'setup': str(section.setup).upper(), 'n': int(y_next.size)}
            record.update(result.to_dict())

            for name, baseline in (('ols', ols_ttest), ('ivx', ivx_ttest)):
                try:
                    other = baseline(y_next, x_lag, beta0=float(section.beta0))
                    record[f'{name}_beta_hat'] = other.beta_hat
                    record[f'{name}_t_stat'] = other.t_stat
                except LTLSError as e:
                    self.logger.warning(f"{name.upper()} baseline unavailable: {e}")

            table = pd.DataFrame([record])
            output_file = self._export(table, 'estimate', config, output, excel,
                                       label=Path(section.input).stem)
            if output_file is None:
                return _failure('Failed to export estimate')

            if preview:
                self._show_preview(lambda: render_record(record), "Estimation report")

            return {
                'success': True,
                'error': None,
                'output_file': output_file,
                'summary': [
                    f"beta_hat = {result.beta_hat:.6f}",
                    f"t = {result.t_stat:.4f} (H0: beta = {result.beta0:g})",
                    f"c_n = {result.scheme_used.c_n:.4g}, l_n = {result.scheme_used.l_n}",
                ],
                'table': table,
                'result': result,
            }

        except LTLSError as e:
            log_error_with_context(self.logger, e, "estimate")
            return _failure(str(e))

    def run_predict(self, config: RunConfig, output: Optional[str] = None, excel: bool = False,
                    preview: bool = True) -> Dict[str, Any]:
        """Predictability scan across horizons and setups"""
        section = config.predict
        if not section.input:
            return _failure('No dataset given for predict')
        try:
            ds = ingest_csv(section.input, frequency=section.frequency,
                            ep_transform=section.ep_transform)
            results = self.analyzer.predictability_scan(
                ds, section.horizons, section.setups, empirical_kernels=bool(section.empirical_kernels))
            table = self.analyzer.scan_frame(results, level=float(section.level))

            output_file = self._export(table, 'predict', config, output, excel, label=ds.frequency)
            if output_file is None:
                return _failure('Failed to export scan')

            if preview:
                self._show_preview(lambda: render_table(
                    table.pivot_table(index='m', columns='setup', values='t_stat').reset_index()),
                    "Predictability t-statistics")

            summary = [f"Dataset: {len(ds)} {ds.frequency} observations",
                       f"Horizons scanned: {len(results)}"]
            for setup in sorted(table['setup'].unique()):
                crossing = crossing_horizon(results, setup, float(section.level))
                summary.append(f"{setup}: rejects from m = {crossing}" if crossing is not None
                               else f"{setup}: no persistent rejection")
            return {'success': True, 'error': None, 'output_file': output_file,
                    'summary': summary, 'table': table}

        except LTLSError as e:
            log_error_with_context(self.logger, e, "predictability scan")
            return _failure(str(e))

    def run_memory(self, config: RunConfig, output: Optional[str] = None, excel: bool = False,
                   preview: bool = True) -> Dict[str, Any]:
        """LW/ELW memory table for returns and the predictor"""
        section = config.memory
        if not section.input:
            return _failure('No dataset given for memory')
        try:
            ds = ingest_csv(section.input, frequency=section.frequency,
                            ep_transform=section.ep_transform)
            table = self.analyzer.memory_table(ds, section.b_grid, section.horizons)

            output_file = self._export(table, 'memory', config, output, excel, label=ds.frequency)
            if output_file is None:
                return _failure('Failed to export memory table')

            if preview:
                self._show_preview(lambda: render_table(_memory_view(table), floatfmt='.2f'), "Memory estimates")

            failed = int((table['error'] != '').sum())
            return {
                'success': True,
                'error': None,
                'output_file': output_file,
                'summary': [f"Dataset: {len(ds)} {ds.frequency} observations",
                            f"Estimates: {len(table) - failed} ok, {failed} failed"],
                'table': table,
            }

        except LTLSError as e:
            log_error_with_context(self.logger, e, "memory table")
            return _failure(str(e))


def _memory_view(table: pd.DataFrame) -> pd.DataFrame:
    view = table.pivot_table(index=['series', 'horizon'], columns=['method', 'b'],
                             values='d_hat', sort=False)
    view.columns = [f"{method} b={b:g}" for method, b in view.columns]
    return view.reset_index()
