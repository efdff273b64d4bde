#!/usr/bin/env python3
"""
LTLS Predict - CLI Entry Point
Size and power campaigns, single estimations, predictability scans and
memory tables
"""

import sys
from pathlib import Path

import click

# Add the current directory to sys.path to allow imports
sys.path.insert(0, str(Path(__file__).parent))

from main import LTLSRunner
from utils.config import apply_overrides, load_config
from utils.errors import ConfigError, LTLSError
from utils.logger import setup_logger


def _listed(values):
    return list(values) if values else None


def common_options(func):
    """Options shared by every subcommand"""
    options = [
        click.option('--config', 'config_path', type=click.Path(), default=None,
                     help='YAML run configuration'),
        click.option('--seed', type=int, default=None, help='Master seed (unsigned 64-bit)'),
        click.option('--profile', type=click.Choice(['desk', 'full']), default=None,
                     help='Replication profile: desk (2000) or full (10000)'),
        click.option('--reps', type=int, default=None, help='Explicit replication count (overrides profile)'),
        click.option('--threads', type=int, default=None, help='Worker processes for Monte Carlo runs'),
        click.option('--out', '-o', 'output', default=None, help='Output file path'),
        click.option('--excel', is_flag=True, help='Export to Excel format (.xlsx)'),
        click.option('--log', default=None, help='Log file path (default: ltls.log)'),
        click.option('--preview/--no-preview', default=True, help='Print a console table'),
        click.option('--verbose', '-v', is_flag=True, help='Verbose output'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _run(command: str, opts: dict, overrides: dict):
    """Resolve configuration, dispatch to the runner and report like every subcommand does"""
    log_file = opts['log'] or 'ltls.log'
    try:
        logger = setup_logger(log_file, opts['verbose'])

        config = load_config(opts['config_path'])
        overrides = dict(overrides)
        overrides.update({'seed': opts['seed'], 'profile': opts['profile'],
                          'reps': opts['reps'], 'threads': opts['threads']})
        config = apply_overrides(config, overrides)

        runner = LTLSRunner(logger=logger)
        result = getattr(runner, f"run_{command}")(config, output=opts['output'],
                                                   excel=opts['excel'], preview=opts['preview'])

        if result['success']:
            click.echo(f"✅ {command} completed successfully!")
            click.echo(f"📁 Output file: {result['output_file']}")
            click.echo(f"📋 Log file: {log_file}")
            if result['summary']:
                click.echo("\n📊 Summary:")
                for line in result['summary']:
                    click.echo(f"   {line}")
        else:
            click.echo(f"❌ Error: {result['error']}", err=True)
            sys.exit(1)

    except ConfigError as e:
        click.echo(f"❌ Error: invalid configuration: {e}", err=True)
        sys.exit(1)
    except LTLSError as e:
        click.echo(f"❌ Error: {e}", err=True)
        sys.exit(1)


@click.group()
@click.version_option('1.0.0', prog_name='ltls')
def cli():
    """
    LTLS Predict - locally trimmed least squares tests for predictive regressions.

    Examples:
    ltls size --regime ni --profile desk
    ltls power --regime fractional --delta -0.95
    ltls estimate series.csv --setup S3
    ltls predict goyal_monthly.csv --max-horizon 24
    ltls memory goyal_monthly.csv --b 0.55 --b 0.65 --b 0.75
    """


def grid_options(func):
    options = [
        click.option('--regime', type=click.Choice(['ni', 'fractional']), default=None,
                     help='Regressor law: near-integrated or type-II fractional'),
        click.option('--c', 'c_values', type=float, multiple=True, help='Near-integration parameters c <= 0'),
        click.option('--d', 'd_values', type=float, multiple=True, help='Memory parameters d in (0, 1.5)'),
        click.option('--delta', 'deltas', type=float, multiple=True, help='Innovation correlations'),
        click.option('--n', 'sizes', type=int, multiple=True, help='Sample sizes'),
        click.option('--method', 'methods', type=click.Choice(['T1', 'T2', 'T3', 'IVX', 'OLS']),
                     multiple=True, help='Test methods'),
        click.option('--level', type=float, default=None, help='Nominal size (two-sided)'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _grid_overrides(section: str, regime, c_values, d_values, deltas, sizes, methods, level) -> dict:
    return {
        f'{section}.regime': regime,
        f'{section}.c_values': _listed(c_values),
        f'{section}.d_values': _listed(d_values),
        f'{section}.deltas': _listed(deltas),
        f'{section}.sizes': _listed(sizes),
        f'{section}.methods': _listed(methods),
        f'{section}.level': level,
    }


@cli.command()
@grid_options
@common_options
def size(regime, c_values, d_values, deltas, sizes, methods, level, **opts):
    """Empirical size of LTLS, IVX and OLS tests over a DGP grid."""
    _run('size', opts, _grid_overrides('size', regime, c_values, d_values, deltas, sizes, methods, level))


@cli.command()
@grid_options
@click.option('--beta', 'beta_grid', type=float, multiple=True, help='Slopes of the power curve')
@common_options
def power(regime, c_values, d_values, deltas, sizes, methods, level, beta_grid, **opts):
    """Power curves over a grid of true slopes."""
    overrides = _grid_overrides('power', regime, c_values, d_values, deltas, sizes, methods, level)
    overrides['power.beta_grid'] = _listed(beta_grid)
    _run('power', opts, overrides)


@cli.command()
@click.argument('input_file', required=False, type=click.Path())
@click.option('--setup', type=click.Choice(['S1', 'S2', 'S3'], case_sensitive=False), default=None)
@click.option('--beta0', type=float, default=None, help='Null value of the slope')
@click.option('--y-col', default=None, help='Response column (default: y)')
@click.option('--x-col', default=None, help='Regressor column (default: x)')
@click.option('--empirical-kernels', is_flag=True,
              help='Scale S1/S2 kernel variances by the residual variance')
@common_options
def estimate(input_file, setup, beta0, y_col, x_col, empirical_kernels, **opts):
    """LTLS estimate and t-test for a two-column series file."""
    _run('estimate', opts, {
        'estimate.input': input_file,
        'estimate.setup': setup.upper() if setup else None,
        'estimate.beta0': beta0,
        'estimate.y_column': y_col,
        'estimate.x_column': x_col,
        'estimate.empirical_kernels': empirical_kernels or None,
    })


@cli.command()
@click.argument('dataset', required=False, type=click.Path())
@click.option('--frequency', type=click.Choice(['monthly', 'quarterly']), default=None)
@click.option('--horizon', 'horizons', type=int, multiple=True, help='Return horizons m')
@click.option('--max-horizon', type=int, default=None, help='Scan m = 1..max')
@click.option('--setup', 'setups', type=click.Choice(['S1', 'S2', 'S3'], case_sensitive=False), multiple=True)
@click.option('--ep-transform', type=click.Choice(['log', 'ratio']), default=None)
@click.option('--level', type=float, default=None, help='Nominal size (two-sided)')
@common_options
def predict(dataset, frequency, horizons, max_horizon, setups, ep_transform, level, **opts):
    """LTLS predictability scan of long-horizon returns."""
    if max_horizon is not None and not horizons:
        horizons = range(1, max_horizon + 1)
    _run('predict', opts, {
        'predict.input': dataset,
        'predict.frequency': frequency,
        'predict.horizons': _listed(horizons),
        'predict.setups': [s.upper() for s in setups] or None,
        'predict.ep_transform': ep_transform,
        'predict.level': level,
    })


@cli.command()
@click.argument('dataset', required=False, type=click.Path())
@click.option('--frequency', type=click.Choice(['monthly', 'quarterly']), default=None)
@click.option('--horizon', 'horizons', type=int, multiple=True, help='Return horizons m')
@click.option('--b', 'b_grid', type=float, multiple=True, help='Bandwidth exponents')
@click.option('--ep-transform', type=click.Choice(['log', 'ratio']), default=None)
@common_options
def memory(dataset, frequency, horizons, b_grid, ep_transform, **opts):
    """Local Whittle and exact local Whittle memory estimates."""
    _run('memory', opts, {
        'memory.input': dataset,
        'memory.frequency': frequency,
        'memory.horizons': _listed(horizons),
        'memory.b_grid': _listed(b_grid),
        'memory.ep_transform': ep_transform,
    })


if __name__ == '__main__':
    cli()
