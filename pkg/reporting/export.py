"""
Result Export Module
Writes result tables to CSV (with a commented run header) or Excel
"""

import os
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import pandas as pd

HEADER_PREFIX = '# '
TIMESTAMP_KEY = 'generated'


def build_header(command: str, version: str, config_hash: str, seed: Optional[int],
                 **extra: Any) -> Dict[str, Any]:
    """
    Ordered run header written above every output table

    Args:
        command: Subcommand that produced the file
        version: Tool version
        config_hash: SHA-256 of the resolved configuration
        seed: Master seed (None for deterministic commands)
        **extra: Further key/value pairs

    Returns:
        Dictionary preserving insertion order; the timestamp comes last
    """
    header = {
        'tool': f"ltls-predict {version}",
        'command': command,
        'config_hash': config_hash,
        'seed': seed if seed is not None else 'none',
    }
    header.update(extra)
    header[TIMESTAMP_KEY] = datetime.now().strftime('%Y-%m-%d %H:%M:%S')
    return header


def read_header(path: str) -> Dict[str, str]:
    """Parse the commented header of a CSV written by ResultExporter"""
    header = {}
    with open(path, encoding='utf-8') as handle:
        for line in handle:
            if not line.startswith(HEADER_PREFIX):
                break
            key, _, value = line[len(HEADER_PREFIX):].rstrip('\n').partition(': ')
            header[key] = value
    return header


class ResultExporter:
    """Handles exporting result tables to CSV or Excel"""

    def __init__(self, logger):
        self.logger = logger

    def export_results(self, df: pd.DataFrame, output_path: str, header: Dict[str, Any],
                       excel: bool = False) -> bool:
        """
        Export a result table

        Args:
            df: Result table
            output_path: Output file path
            header: Run header from build_header
            excel: Whether to export to Excel format

        Returns:
            True if export successful, False otherwise
        """
        if df.empty:
            self.logger.warning("Result table is empty, writing header only")

        try:
            output_dir = os.path.dirname(output_path)
            if output_dir and not os.path.exists(output_dir):
                os.makedirs(output_dir, exist_ok=True)
                self.logger.debug(f"Created output directory: {output_dir}")

            if excel or output_path.endswith('.xlsx'):
                return self._export_to_excel(df, output_path, header)
            return self._export_to_csv(df, output_path, header)

        except OSError as e:
            self.logger.error(f"Failed to export results: {str(e)}")
            return False

    def _export_to_csv(self, df: pd.DataFrame, output_path: str, header: Dict[str, Any]) -> bool:
        if not output_path.endswith('.csv'):
            output_path += '.csv'

        with open(output_path, 'w', encoding='utf-8', newline='') as handle:
            for key, value in header.items():
                handle.write(f"{HEADER_PREFIX}{key}: {value}\n")
            df.to_csv(handle, index=False)

        self.logger.info(f"✅ Exported {len(df)} rows to CSV: {output_path}")
        self.logger.debug(f"File size: {self._format_file_size(os.path.getsize(output_path))}")
        return True

    def _export_to_excel(self, df: pd.DataFrame, output_path: str, header: Dict[str, Any]) -> bool:
        if not output_path.endswith('.xlsx'):
            output_path += '.xlsx'

        with pd.ExcelWriter(output_path, engine='openpyxl') as writer:
            df.to_excel(writer, sheet_name='Results', index=False)
            self._auto_adjust_column_widths(writer.sheets['Results'], df)

            info = pd.DataFrame({'Key': list(header.keys()),
                                 'Value': [str(v) for v in header.values()]})
            info.to_excel(writer, sheet_name='Run Info', index=False)
            self._auto_adjust_column_widths(writer.sheets['Run Info'], info)

        self.logger.info(f"✅ Exported {len(df)} rows to Excel: {output_path}")
        self.logger.debug(f"File size: {self._format_file_size(os.path.getsize(output_path))}")
        return True

    def _auto_adjust_column_widths(self, worksheet, df: pd.DataFrame):
        for position, column in enumerate(df.columns, start=1):
            column_letter = worksheet.cell(row=1, column=position).column_letter
            lengths = [len(str(column))]
            lengths += [len(str(v)) for v in df[column].head(100) if pd.notna(v)]
            worksheet.column_dimensions[column_letter].width = min(max(lengths) + 2, 50)

    def _format_file_size(self, size_bytes: int) -> str:
        """Format file size in human-readable format"""
        if size_bytes < 1024:
            return f"{size_bytes} B"
        elif size_bytes < 1024 * 1024:
            return f"{size_bytes / 1024:.1f} KB"
        return f"{size_bytes / (1024 * 1024):.1f} MB"

    def validate_output_path(self, output_path: str, excel: bool = False) -> Tuple[bool, Optional[str], Optional[str]]:
        """
        Validate and normalize output path

        Args:
            output_path: Proposed output path
            excel: Whether Excel format is intended

        Returns:
            Tuple of (is_valid, normalized_path, error_message)
        """
        path = Path(output_path)
        parent_dir = path.parent
        if not parent_dir.exists():
            try:
                parent_dir.mkdir(parents=True, exist_ok=True)
            except OSError:
                return False, None, f"Cannot create directory: {parent_dir}"

        if not os.access(parent_dir, os.W_OK):
            return False, None, f"Directory not writable: {parent_dir}"

        wanted = '.xlsx' if excel else '.csv'
        if path.suffix.lower() != wanted:
            path = path.with_suffix(wanted)

        if path.exists() and not os.access(path, os.W_OK):
            return False, None, f"File not writable: {path}"

        return True, str(path), None


def sibling_path(output_path: str, suffix: str) -> str:
    """'out/size.csv', 'wide' -> 'out/size_wide.csv'"""
    path = Path(output_path)
    return str(path.with_name(f"{path.stem}_{suffix}{path.suffix}"))
