"""
LTLS Predict - Reporting
Result export and console tables
"""

from .export import ResultExporter, build_header, read_header
from .tables import flatten_wide, render_record, render_table, render_wide

__all__ = [
    'ResultExporter',
    'build_header',
    'read_header',
    'flatten_wide',
    'render_record',
    'render_table',
    'render_wide',
]
