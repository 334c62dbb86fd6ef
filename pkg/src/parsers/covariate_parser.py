"""
Parser for vertex covariate tables (header: vertex_id,label,extra...)
"""
import logging
import warnings
from pathlib import Path
from typing import Dict, Optional, Union

import pandas as pd

from ..utils.errors import InputError

logger = logging.getLogger(__name__)

REQUIRED_COLUMNS = ('vertex_id', 'label')


class CovariateParser:
    """
    Reads a delimited covariate table and aligns it with graph vertex ids.

    ``vertex_ids`` maps the original tokens of the edge list to graph ids;
    rows naming a vertex absent from the graph are dropped, and graph
    vertices without a row are reported. Counts land in ``self.dropped``.
    """

    def __init__(self, vertex_ids: Optional[Dict[str, int]] = None):
        self.vertex_ids = vertex_ids
        self.dropped: Dict[str, int] = {'unknown_vertices': 0, 'missing_vertices': 0}

    def parse(self, file_path: Union[str, Path], n: Optional[int] = None) -> pd.DataFrame:
        path = Path(file_path)
        if not path.exists():
            raise FileNotFoundError(f"Covariate file not found: {path}")
        try:
            frame = pd.read_csv(path, sep=None, engine='python', dtype={'vertex_id': str})
        except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise InputError(f"cannot read covariate table {path}: {e}") from e
        return self.align(frame, n)

    def align(self, frame: pd.DataFrame, n: Optional[int] = None) -> pd.DataFrame:
        """
        Index the table by graph vertex id

        Returns:
            DataFrame indexed by vertex id (sorted), with 'label' as 0/1 integers
        """
        frame = frame.rename(columns=lambda c: str(c).strip())
        missing = [c for c in REQUIRED_COLUMNS if c not in frame.columns]
        if missing:
            raise InputError(f"covariate table missing column(s): {', '.join(missing)}")
        tokens = frame['vertex_id'].astype(str).str.strip()
        if self.vertex_ids is not None:
            ids = tokens.map(self.vertex_ids)
        else:
            ids = pd.to_numeric(tokens, errors='coerce')
            if n is not None:
                ids = ids.where((ids >= 0) & (ids < n))
        unknown = int(ids.isna().sum())
        frame = frame.loc[ids.notna()].copy()
        frame.index = ids[ids.notna()].astype(int)
        frame.index.name = 'vertex'
        frame = frame.drop(columns=['vertex_id'])
        if frame.index.duplicated().any():
            dup = frame.index[frame.index.duplicated()].tolist()[:5]
            raise InputError(f"duplicate covariate rows for vertices {dup}")

        total = len(self.vertex_ids) if self.vertex_ids is not None else n
        missing_vertices = (total - len(frame)) if total is not None else 0
        self.dropped = {'unknown_vertices': unknown, 'missing_vertices': int(missing_vertices)}
        if unknown or missing_vertices:
            message = (f"Dropped {unknown} covariate row(s) for vertices not in the graph; "
                       f"{missing_vertices} graph vertex(es) have no covariate row")
            logger.warning(message)
            warnings.warn(message)

        labels = pd.to_numeric(frame['label'], errors='coerce')
        if labels.isna().any() or not labels.isin([0, 1]).all():
            raise InputError("covariate column 'label' must hold 0/1 values")
        frame['label'] = labels.astype(int)
        return frame.sort_index()


def load_covariates(file_path: Union[str, Path], vertex_ids: Optional[Dict[str, int]] = None,
                    n: Optional[int] = None) -> pd.DataFrame:
    """Convenience function to parse and align a covariate table"""
    return CovariateParser(vertex_ids).parse(file_path, n=n)
