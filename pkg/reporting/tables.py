"""
Table Rendering Module
Console tables for campaign, scan and estimation results
"""

from typing import Dict

import pandas as pd
from tabulate import tabulate


def render_table(df: pd.DataFrame, max_rows: int = 40, floatfmt: str = '.3f') -> str:
    """Grid-formatted preview of the first max_rows rows"""
    text = tabulate(df.head(max_rows), headers='keys', tablefmt='grid',
                    showindex=False, floatfmt=floatfmt)
    if len(df) > max_rows:
        text += f"\n... and {len(df) - max_rows} more rows"
    return text


def flatten_wide(wide: pd.DataFrame) -> pd.DataFrame:
    """Turn (delta, method) column pairs into 'delta=<d> <method>' labels"""
    flat = wide.copy()
    flat.columns = [f"delta={delta:g} {method}" for delta, method in flat.columns]
    return flat.reset_index()


def render_wide(wide: pd.DataFrame, floatfmt: str = '.3f') -> str:
    """Size table with rows (regime, c or d, beta, n) and columns (delta, method)"""
    return tabulate(flatten_wide(wide), headers='keys', tablefmt='grid',
                    showindex=False, floatfmt=floatfmt)


def render_record(record: Dict[str, object]) -> str:
    """Two-column key/value table for a single estimation"""
    return tabulate(list(record.items()), headers=['Quantity', 'Value'],
                    tablefmt='grid', floatfmt='.6g')
