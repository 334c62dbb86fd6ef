"""
Parser for whitespace-separated edge-list files
"""
import logging
import warnings
from pathlib import Path
from typing import Dict, List, Tuple, Union

from ..utils.errors import InputError
from ..utils.graph_utils import Graph

logger = logging.getLogger(__name__)


class EdgeListParser:
    """
    Parser for edge lists: one edge per line, two vertex tokens, '#' comments.

    Vertex tokens are arbitrary strings; they are remapped to 0..n-1 in order
    of first appearance. Duplicate edges and self-loops are dropped and
    counted in ``self.warnings``; a vertex seen only in self-loops is not
    created.
    """

    def __init__(self):
        self.vertex_ids: Dict[str, int] = {}
        self.warnings: Dict[str, int] = {'duplicates': 0, 'self_loops': 0}

    def _index(self, token: str) -> int:
        if token not in self.vertex_ids:
            self.vertex_ids[token] = len(self.vertex_ids)
        return self.vertex_ids[token]

    def parse_text(self, text: str) -> Graph:
        """
        Parse edge-list text

        Args:
            text: Edge-list content

        Returns:
            Graph with remapped vertex ids

        Raises:
            InputError: On a line that does not hold exactly two tokens
        """
        self.vertex_ids = {}
        self.warnings = {'duplicates': 0, 'self_loops': 0}
        edges: List[Tuple[int, int]] = []
        seen = set()

        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith('#'):
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise InputError(f"expected two vertex tokens, got {len(tokens)}: {raw!r}",
                                 line=line_no)
            if tokens[0] == tokens[1]:
                self.warnings['self_loops'] += 1
                continue
            a, b = self._index(tokens[0]), self._index(tokens[1])
            key = (a, b) if a < b else (b, a)
            if key in seen:
                self.warnings['duplicates'] += 1
                continue
            seen.add(key)
            edges.append(key)

        dropped = self.warnings['duplicates'] + self.warnings['self_loops']
        if dropped:
            message = (f"Dropped {self.warnings['duplicates']} duplicate edge(s) and "
                       f"{self.warnings['self_loops']} self-loop(s)")
            logger.warning(message)
            warnings.warn(message)

        return Graph.from_edges(len(self.vertex_ids), edges)

    def parse(self, file_path: Union[str, Path]) -> Graph:
        """Parse an edge-list file"""
        path = Path(file_path)
        if not path.exists():
            raise FileNotFoundError(f"Edge-list file not found: {path}")
        logger.debug("reading edge list %s", path)
        return self.parse_text(path.read_text())

    def original_ids(self) -> List[str]:
        """Original vertex tokens indexed by remapped id"""
        ids = [''] * len(self.vertex_ids)
        for token, idx in self.vertex_ids.items():
            ids[idx] = token
        return ids


def load_graph(source: Union[str, Path]) -> Graph:
    """
    Convenience function to load a graph from a path or edge-list text.

    A string containing a newline, or one that is not an existing path, is
    parsed as edge-list text.
    """
    parser = EdgeListParser()
    if isinstance(source, Path):
        return parser.parse(source)
    if '\n' not in source and Path(source).exists():
        return parser.parse(source)
    if '\n' not in source and not source.strip().count(' ') and not source.strip().count('\t'):
        raise FileNotFoundError(f"Edge-list file not found: {source}")
    return parser.parse_text(source)


def write_edge_list(graph: Graph, file_path: Union[str, Path]) -> str:
    """Write a graph as an edge list, one 'i j' pair per line"""
    lines = [f"{a} {b}" for a, b in graph.edges()]
    Path(file_path).write_text('\n'.join(lines) + ('\n' if lines else ''))
    return str(file_path)
