"""
Market Dataset Module
Loads and validates index-level / predictor files and two-column series files
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from utils.errors import IngestionError
from utils.logger import get_module_logger

logger = get_module_logger('dataset')

DEFAULT_COLUMNS = {
    'date': 'date',
    'index': 'index',
    'predictor': 'predictor',
    'earnings': 'earnings',
    'price': 'price',
}

FREQUENCIES = ('monthly', 'quarterly')
SUPPORTED_SUFFIXES = ('.csv', '.txt')


@dataclass(frozen=True)
class MarketDataset:
    """Aligned index levels and predictor observations"""

    dates: pd.DatetimeIndex
    index_level: np.ndarray
    predictor: np.ndarray
    frequency: str
    predictor_name: str = 'EP'

    def __len__(self) -> int:
        return int(self.index_level.size)

    def describe(self) -> Dict[str, object]:
        return {
            'rows': len(self),
            'frequency': self.frequency,
            'first': self.dates[0].strftime('%Y-%m-%d'),
            'last': self.dates[-1].strftime('%Y-%m-%d'),
            'predictor': self.predictor_name,
        }


def _rows(mask) -> List[int]:
    # 1-based data row numbers
    return [int(i) + 1 for i in np.flatnonzero(np.asarray(mask))]


def _read(path: Union[str, Path]) -> pd.DataFrame:
    path = Path(path)
    if not path.is_file():
        raise IngestionError(f"Cannot read {path}: no such file")
    if path.suffix.lower() not in SUPPORTED_SUFFIXES:
        raise IngestionError(f"Cannot read {path}: extension '{path.suffix}' is not supported, use .csv or .txt")
    try:
        df = pd.read_csv(path, comment='#', skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise IngestionError(f"{path} is empty")
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise IngestionError(f"Cannot parse {path}: {e}")
    except OSError as e:
        raise IngestionError(f"Cannot read {path}: {e.strerror or e}")
    if df.empty:
        raise IngestionError(f"{path} has a header but no data rows")
    df.columns = [str(c).strip().lower() for c in df.columns]
    return df


def parse_dates(raw: pd.Series) -> pd.Series:
    """
    Parse calendar periods

    Accepts ISO-style dates, yyyymm integers (monthly files) and yyyyq
    integers (quarterly files). Unparseable entries become NaT.
    """
    text = raw.astype(str).str.strip()
    if text.str.fullmatch(r'\d{6}').all():
        return pd.to_datetime(text, format='%Y%m', errors='coerce')
    if text.str.fullmatch(r'\d{4}[1-4]').all():
        years = text.str[:4].astype(int)
        quarters = text.str[4].astype(int)
        periods = [pd.Period(year=y, quarter=q, freq='Q') for y, q in zip(years, quarters)]
        return pd.Series([p.start_time for p in periods], index=raw.index)
    return pd.to_datetime(text, errors='coerce')


def infer_frequency(dates: pd.DatetimeIndex) -> str:
    """'monthly' or 'quarterly' from the median spacing of the dates"""
    if len(dates) < 2:
        raise IngestionError("At least two dates are needed to infer the frequency")
    spacing = float(np.median(np.diff(dates.values).astype('timedelta64[D]').astype(float)))
    if 25 <= spacing <= 35:
        return 'monthly'
    if 80 <= spacing <= 100:
        return 'quarterly'
    raise IngestionError(f"Cannot infer frequency from a median spacing of {spacing:.0f} days")


def _numeric(df: pd.DataFrame, column: str) -> np.ndarray:
    values = pd.to_numeric(df[column], errors='coerce')
    bad = values.isna() | ~np.isfinite(values.fillna(0.0))
    if bad.any():
        raise IngestionError(f"Column '{column}' has missing or non-numeric values", _rows(bad))
    return values.to_numpy(dtype=float)


def ingest_csv(path: Union[str, Path], column_map: Optional[Dict[str, str]] = None,
               frequency: Optional[str] = None, ep_transform: str = 'log') -> MarketDataset:
    """
    Load an index-level / predictor file

    The predictor is read from the 'predictor' column when present, else
    built from 'earnings' and 'price' (log E - log P with ep_transform='log',
    E / P with 'ratio').

    Args:
        path: Delimited text file with a header row
        column_map: Overrides of the logical-to-file column names
        frequency: 'monthly' or 'quarterly'; inferred from the dates when None
        ep_transform: 'log' or 'ratio'

    Returns:
        MarketDataset

    Raises:
        IngestionError: unreadable file, missing columns, unparseable or
            missing values, non-positive index levels, non-increasing dates
    """
    columns = dict(DEFAULT_COLUMNS)
    columns.update({k: str(v).lower() for k, v in (column_map or {}).items()})
    df = _read(path)

    for required in ('date', 'index'):
        if columns[required] not in df.columns:
            raise IngestionError(f"Missing column '{columns[required]}' in {path}")

    dates = parse_dates(df[columns['date']])
    if dates.isna().any():
        raise IngestionError("Unparseable dates", _rows(dates.isna()))
    dates = pd.DatetimeIndex(dates)
    not_increasing = np.concatenate(([False], np.diff(dates.values) <= np.timedelta64(0)))
    if not_increasing.any():
        raise IngestionError("Dates are not strictly increasing", _rows(not_increasing))

    index_level = _numeric(df, columns['index'])
    if np.any(index_level <= 0):
        raise IngestionError("Index levels must be positive", _rows(index_level <= 0))

    if columns['predictor'] in df.columns:
        predictor = _numeric(df, columns['predictor'])
        name = columns['predictor'].upper() if columns['predictor'] != 'predictor' else 'EP'
    elif columns['earnings'] in df.columns and columns['price'] in df.columns:
        earnings = _numeric(df, columns['earnings'])
        price = _numeric(df, columns['price'])
        bad = (earnings <= 0) | (price <= 0)
        if bad.any():
            raise IngestionError("Earnings and price must be positive to form EP", _rows(bad))
        if ep_transform == 'log':
            predictor = np.log(earnings) - np.log(price)
        elif ep_transform == 'ratio':
            predictor = earnings / price
        else:
            raise IngestionError(f"Unknown EP transform '{ep_transform}', expected 'log' or 'ratio'")
        name = 'EP'
    else:
        raise IngestionError(f"{path} needs a '{columns['predictor']}' column or "
                             f"'{columns['earnings']}' and '{columns['price']}' columns")

    if frequency is None:
        frequency = infer_frequency(dates)
    elif frequency not in FREQUENCIES:
        raise IngestionError(f"Unknown frequency '{frequency}', expected one of {FREQUENCIES}")

    dataset = MarketDataset(dates=dates, index_level=index_level, predictor=predictor,
                            frequency=frequency, predictor_name=name)
    logger.info(f"📁 Loaded {len(dataset)} {frequency} observations from {path}")
    return dataset


def ingest_pairs(path: Union[str, Path], y_column: str = 'y',
                 x_column: str = 'x') -> Tuple[np.ndarray, np.ndarray]:
    """
    Load a two-column series file for a single estimation

    Args:
        path: File with y and x columns; row k holds y_k and x_k
        y_column: Response column name
        x_column: Regressor column name

    Returns:
        Tuple of (y, x) unaligned, same length
    """
    df = _read(path)
    for column in (y_column, x_column):
        if column.lower() not in df.columns:
            raise IngestionError(f"Missing column '{column}' in {path}")
    return _numeric(df, y_column.lower()), _numeric(df, x_column.lower())
