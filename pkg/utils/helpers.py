"""
Helper Utilities Module
Common utility functions used across the LTLS tool
"""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from utils.errors import DomainError


def generate_output_filename(command: str, label: str = '', excel: bool = False,
                             directory: Union[str, Path] = '.') -> str:
    """
    Generate an output filename for a command run

    Args:
        command: Subcommand name, e.g. 'size'
        label: Optional qualifier, e.g. the regime
        excel: Whether to generate Excel filename
        directory: Directory for the file

    Returns:
        Generated output filename
    """
    stem = f"ltls_{command}_{label}" if label else f"ltls_{command}"
    extension = '.xlsx' if excel else '.csv'
    return str(Path(directory) / f"{stem}{extension}")


def format_number(number: Union[int, float], precision: int = 3) -> str:
    """
    Format a number with appropriate precision and thousand separators

    Args:
        number: Number to format
        precision: Decimal places for floats

    Returns:
        Formatted number string
    """
    if isinstance(number, (bool, np.bool_)):
        return str(number)
    if isinstance(number, (int, np.integer)):
        return f"{int(number):,}"
    if isinstance(number, (float, np.floating)):
        if not np.isfinite(number):
            return str(float(number))
        return f"{float(number):,.{precision}f}"
    return str(number)


def as_float_vector(values: Any, name: str = 'x') -> np.ndarray:
    """
    Convert input to a finite 1-D float array

    Args:
        values: Array-like input
        name: Argument name used in error messages

    Returns:
        Contiguous float64 array

    Raises:
        DomainError: if the input is not 1-D or has non-finite entries
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise DomainError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains non-finite values")
    return np.ascontiguousarray(arr)


def stable_hash(*parts: Any) -> int:
    """
    Deterministic 64-bit hash of the string forms of parts

    Args:
        *parts: Values identifying an object, e.g. a Monte Carlo cell

    Returns:
        Non-negative integer below 2**64
    """
    payload = "::".join(str(p) for p in parts).encode('utf-8')
    digest = hashlib.sha256(payload).digest()
    return int.from_bytes(digest[:8], 'little')


def config_hash(resolved: Dict[str, Any]) -> str:
    """
    SHA-256 of a canonical JSON rendering of a resolved configuration

    Args:
        resolved: Plain-data configuration dictionary

    Returns:
        Hex digest
    """
    canonical = json.dumps(resolved, sort_keys=True, separators=(',', ':'), default=str)
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()
