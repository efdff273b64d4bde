#!/usr/bin/env python3
"""
Predictor Workbook Converter
Turns a downloaded equity-premium predictor workbook into the
date,index,earnings,price CSV read by `ltls predict` and `ltls memory`
"""

import sys
from pathlib import Path

import click
import pandas as pd

sys.path.insert(0, str(Path(__file__).parent.parent))

from utils.logger import setup_logger

SHEET_DATE_COLUMNS = {'Monthly': 'yyyymm', 'Quarterly': 'yyyyq'}


def convert_sheet(workbook: str, sheet: str, index_column: str = 'Index',
                  earnings_column: str = 'E12') -> pd.DataFrame:
    """
    Read one sheet and keep the columns the ingestion understands

    Args:
        workbook: Path to the .xlsx workbook
        sheet: 'Monthly' or 'Quarterly'
        index_column: Index-level column name
        earnings_column: Twelve-month earnings column name

    Returns:
        DataFrame with columns date, index, earnings, price
    """
    raw = pd.read_excel(workbook, sheet_name=sheet, engine='openpyxl')
    date_column = SHEET_DATE_COLUMNS[sheet]
    missing = [c for c in (date_column, index_column, earnings_column) if c not in raw.columns]
    if missing:
        raise click.ClickException(f"Sheet '{sheet}' lacks columns: {', '.join(missing)}")

    def _numeric(series: pd.Series) -> pd.Series:
        # index levels are stored as text with thousands separators in some releases
        return pd.to_numeric(series.astype(str).str.replace(',', '', regex=False), errors='coerce')

    out = pd.DataFrame({
        'date': raw[date_column].astype('Int64').astype(str),
        'index': _numeric(raw[index_column]),
        'earnings': _numeric(raw[earnings_column]),
    })
    out['price'] = out['index']
    out = out.dropna().reset_index(drop=True)
    if out.empty:
        raise click.ClickException(f"Sheet '{sheet}' has no complete rows")
    return out


@click.command()
@click.argument('workbook', type=click.Path(exists=True, readable=True))
@click.option('--sheet', type=click.Choice(sorted(SHEET_DATE_COLUMNS)), default='Monthly')
@click.option('--out', '-o', 'output', default=None, help='CSV path (default: goyal_<sheet>.csv)')
@click.option('--index-column', default='Index')
@click.option('--earnings-column', default='E12')
def main(workbook, sheet, output, index_column, earnings_column):
    """Convert WORKBOOK (xlsx) into a CSV for the empirical commands."""
    logger = setup_logger('fetch_goyal.log')
    frame = convert_sheet(workbook, sheet, index_column, earnings_column)
    output = output or f"goyal_{sheet.lower()}.csv"
    frame.to_csv(output, index=False)
    logger.info(f"Wrote {len(frame)} rows ({frame['date'].iloc[0]} to {frame['date'].iloc[-1]}) to {output}")
    click.echo(f"✅ Wrote {output}")


if __name__ == '__main__':
    main()
