"""
JSON reports and delimited tables
"""
import json
import logging
import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import pandas as pd

from ..analyzers.base_analyzer import AnalysisResult
from ..utils.errors import InputError

logger = logging.getLogger(__name__)

REPORT_FIELDS = ('version', 'command', 'timestamp', 'seed', 'config', 'summary', 'result',
                 'recommendations')
TABLE_SEPARATOR = '\t'


def to_serializable(value: Any) -> Any:
    """Recursively convert numpy, pandas and Fraction values to JSON types"""
    if isinstance(value, dict):
        return {str(k): to_serializable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [to_serializable(v) for v in items]
    if isinstance(value, np.ndarray):
        return to_serializable(value.tolist())
    if isinstance(value, pd.DataFrame):
        return to_serializable(value.to_dict(orient='records'))
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if hasattr(value, 'numerator') and hasattr(value, 'denominator') and not isinstance(value, int):
        return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else int(value.numerator)
    if hasattr(value, 'to_dict'):
        return to_serializable(value.to_dict())
    return value


def build_report(result: AnalysisResult, config: Optional[Dict] = None,
                 timestamp: Optional[str] = None) -> Dict[str, Any]:
    """Report dictionary in the fixed field order"""
    from .. import __version__

    config = dict(config or {})
    report = {
        'version': __version__,
        'command': result.method_name,
        'timestamp': timestamp or datetime.now(timezone.utc).isoformat(timespec='seconds'),
        'seed': config.get('seed'),
        'config': config,
        'summary': result.summary,
        'result': result.payload,
        'recommendations': result.recommendations,
    }
    return {key: to_serializable(report[key]) for key in REPORT_FIELDS}


def emit_report(result: AnalysisResult, path: Union[str, Path], config: Optional[Dict] = None,
                timestamp: Optional[str] = None) -> Path:
    """
    Write the JSON report and one tab-separated file per attached table

    Tables go next to the report as ``<stem>.<name>.tsv``. The detailed
    report is written as ``<stem>.tsv``.

    Raises:
        InputError: If the output location cannot be written
    """
    path = Path(path)
    report = build_report(result, config, timestamp)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(report, indent=2, allow_nan=False) + '\n')
        if result.detailed_report is not None and not result.detailed_report.empty:
            write_table(result.detailed_report, path.with_suffix('.tsv'))
        for name, table in result.tables.items():
            write_table(table, path.with_name(f"{path.stem}.{name}.tsv"))
    except OSError as e:
        raise InputError(f"cannot write report to {path}: {e.strerror or e}") from e
    logger.info("report written to %s", path)
    return path


def write_table(table: pd.DataFrame, path: Union[str, Path]):
    table.to_csv(path, sep=TABLE_SEPARATOR, index=False, float_format='%.10g')


def read_report(path: Union[str, Path]) -> Dict[str, Any]:
    return json.loads(Path(path).read_text())


def strip_timestamp(report: Dict[str, Any]) -> Dict[str, Any]:
    """Copy of a report without its timestamp, for replay comparisons"""
    return {k: v for k, v in report.items() if k != 'timestamp'}
