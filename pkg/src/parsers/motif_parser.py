"""
Parser for rooted motif definitions (catalog names or JSON records)
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Union

from ..utils.errors import InputError
from ..utils.motif_utils import RootedMotif, get_motif

logger = logging.getLogger(__name__)


def motif_from_dict(record: Union[Dict[str, Any], str]) -> RootedMotif:
    """
    Build a motif from a JSON record {order, root, edges} or a catalog name

    Raises:
        InputError: On missing fields or an invalid motif
    """
    if isinstance(record, str):
        return get_motif(record)
    if not isinstance(record, dict):
        raise InputError(f"motif record must be an object or a name, got {type(record).__name__}")
    missing = [k for k in ('order', 'edges') if k not in record]
    if missing:
        raise InputError(f"motif record missing field(s): {', '.join(missing)}")
    return RootedMotif(
        order=record['order'],
        edges=record['edges'],
        root=record.get('root', 0),
        name=record.get('name'),
    )


class MotifParser:
    """Parser for motif JSON files holding one record or a list of records"""

    def parse(self, file_path: Union[str, Path]) -> List[RootedMotif]:
        path = Path(file_path)
        if not path.exists():
            raise FileNotFoundError(f"Motif file not found: {path}")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as e:
            raise InputError(f"invalid motif JSON in {path}: {e.msg}", line=e.lineno) from e
        records = data if isinstance(data, list) else [data]
        motifs = []
        for record in records:
            motif = motif_from_dict(record)
            if motif.name is None:
                motif = motif.named(f"{path.stem}{len(motifs) if len(records) > 1 else ''}")
            motifs.append(motif)
        return motifs


def parse_motifs(argument: str) -> List[RootedMotif]:
    """
    Parse a comma-separated motif list where each item is a catalog name or
    a path to a motif JSON file
    """
    motifs: List[RootedMotif] = []
    for item in (part.strip() for part in argument.split(',')):
        if not item:
            continue
        if item.endswith('.json') or Path(item).is_file():
            motifs.extend(MotifParser().parse(item))
        else:
            motifs.append(get_motif(item))
    if not motifs:
        raise InputError("no motifs given")
    logger.debug("parsed motifs: %s", [m.label for m in motifs])
    return motifs
