"""
Rooted motif utilities: representation, rooted isomorphism and balance parameters
"""
import itertools
import logging
import math
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from .errors import InputError

logger = logging.getLogger(__name__)

MAX_MOTIF_ORDER = 10

Edge = Tuple[int, int]


def falling_factorial(n: int, k: int) -> int:
    """(n)_k = n(n-1)...(n-k+1), zero when k > n"""
    if k < 0:
        raise InputError(f"negative falling factorial length {k}")
    if k > n:
        return 0
    result = 1
    for t in range(k):
        result *= n - t
    return result


def _normalize_edges(order: int, edges: Iterable[Sequence[int]]) -> Tuple[Edge, ...]:
    seen = set()
    for pair in edges:
        if len(pair) != 2:
            raise InputError(f"motif edge {pair!r} is not a vertex pair")
        a, b = int(pair[0]), int(pair[1])
        if a == b:
            raise InputError(f"motif edge ({a}, {b}) is a self-loop")
        if not (0 <= a < order and 0 <= b < order):
            raise InputError(f"motif edge ({a}, {b}) outside vertex range 0..{order - 1}")
        edge = (a, b) if a < b else (b, a)
        if edge in seen:
            raise InputError(f"duplicate motif edge {edge}")
        seen.add(edge)
    return tuple(sorted(seen))


class RootedMotif:
    """
    Small connected graph with a distinguished root.

    The root is stored at index 0: a motif given with another root is
    relabeled by swapping that vertex with 0. Two motifs compare equal when
    their labeled edge sets coincide; use ``canonical_form`` to compare up to
    rooted isomorphism.
    """

    def __init__(self, order: int, edges: Iterable[Sequence[int]], root: int = 0,
                 name: Optional[str] = None):
        order = int(order)
        if order < 2:
            raise InputError("a rooted motif needs at least two vertices")
        if not 0 <= root < order:
            raise InputError(f"root {root} is not a vertex of the motif")
        normalized = _normalize_edges(order, edges)
        if root != 0:
            swap = {root: 0, 0: root}
            normalized = _normalize_edges(
                order, ((swap.get(a, a), swap.get(b, b)) for a, b in normalized))
        self.order = order
        self.edges = normalized
        self.root = 0
        self.name = name
        if not self._is_connected():
            raise InputError(f"motif {self.label} is not connected")

    def _is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in self.adjacency[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == self.order

    @cached_property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        adj: List[List[int]] = [[] for _ in range(self.order)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(sorted(a)) for a in adj)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def label(self) -> str:
        return self.name or f"motif{self.order}:{list(self.edges)}"

    @cached_property
    def aut(self) -> int:
        return aut_count(self)

    @cached_property
    def m(self) -> Fraction:
        return m_parameter(self)

    @cached_property
    def gamma(self) -> Optional[Fraction]:
        """Rootless balance parameter, None when the motif has fewer than 3 vertices"""
        if self.order < 3:
            return None
        return gamma_parameter(self)

    def named(self, name: str) -> 'RootedMotif':
        return RootedMotif(self.order, self.edges, name=name)

    def induced_edge_count(self, vertices: Iterable[int]) -> int:
        chosen = set(vertices)
        return sum(1 for a, b in self.edges if a in chosen and b in chosen)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.order))
        g.add_edges_from(self.edges)
        nx.set_node_attributes(g, {v: v == 0 for v in range(self.order)}, 'root')
        return g

    def to_dict(self) -> Dict:
        """JSON-ready motif record"""
        data = {'order': self.order, 'root': 0, 'edges': [list(e) for e in self.edges]}
        if self.name:
            data['name'] = self.name
        return data

    def __eq__(self, other) -> bool:
        return isinstance(other, RootedMotif) and self.order == other.order and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.order, self.edges))

    def __repr__(self) -> str:
        return f"RootedMotif({self.label})"


def _vertex_cells(order: int, adjacency: Sequence[Sequence[int]]) -> List[List[int]]:
    """
    Partition the non-root vertices by isomorphism-invariant keys.

    Keys are (distance from root, degree, sorted neighbor degrees). Cells are
    returned in key order, so any labeling that assigns cells in this order is
    determined up to permutations inside each cell.
    """
    dist = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for v in frontier:
            for u in adjacency[v]:
                if u not in dist:
                    dist[u] = dist[v] + 1
                    nxt.append(u)
        frontier = nxt
    degree = [len(a) for a in adjacency]
    keys = {
        v: (dist[v], degree[v], tuple(sorted(degree[u] for u in adjacency[v])))
        for v in range(1, order)
    }
    cells: Dict[Tuple, List[int]] = {}
    for v in range(1, order):
        cells.setdefault(keys[v], []).append(v)
    return [cells[k] for k in sorted(cells)]


@lru_cache(maxsize=4096)
def _canonical_edges(order: int, edges: Tuple[Edge, ...]) -> Tuple[Edge, ...]:
    adjacency: List[List[int]] = [[] for _ in range(order)]
    for a, b in edges:
        adjacency[a].append(b)
        adjacency[b].append(a)
    cells = _vertex_cells(order, adjacency)
    best = None
    for arrangement in itertools.product(*(itertools.permutations(c) for c in cells)):
        mapping = {0: 0}
        label = 1
        for block in arrangement:
            for v in block:
                mapping[v] = label
                label += 1
        relabeled = tuple(sorted(
            (mapping[a], mapping[b]) if mapping[a] < mapping[b] else (mapping[b], mapping[a])
            for a, b in edges
        ))
        if best is None or relabeled < best:
            best = relabeled
    return best


def canonical_form(motif: RootedMotif) -> RootedMotif:
    """
    Canonical relabeling of a rooted motif.

    Args:
        motif: Motif to canonicalize

    Returns:
        Motif with root 0 and the lexicographically smallest sorted edge list
        among root-preserving relabelings; equal for rooted-isomorphic inputs

    Raises:
        InputError: If the motif has more than MAX_MOTIF_ORDER vertices
    """
    if motif.order > MAX_MOTIF_ORDER:
        raise InputError(
            f"motif order {motif.order} exceeds the canonicalization limit of {MAX_MOTIF_ORDER}")
    return RootedMotif(motif.order, _canonical_edges(motif.order, motif.edges), name=motif.name)


def canonical_key(motif: RootedMotif) -> Tuple[int, Tuple[Edge, ...]]:
    """Hashable key identifying the rooted isomorphism class"""
    canon = canonical_form(motif)
    return canon.order, canon.edges


def is_rooted_isomorphic(a: RootedMotif, b: RootedMotif) -> bool:
    if a.order != b.order or a.edge_count != b.edge_count:
        return False
    return canonical_key(a) == canonical_key(b)


def aut_count(motif: RootedMotif) -> int:
    """Number of root-preserving automorphisms"""
    if motif.order > MAX_MOTIF_ORDER:
        raise InputError(
            f"motif order {motif.order} exceeds the canonicalization limit of {MAX_MOTIF_ORDER}")
    edge_set = set(motif.edges)
    cells = _vertex_cells(motif.order, motif.adjacency)
    count = 0
    for arrangement in itertools.product(*(itertools.permutations(c) for c in cells)):
        mapping = {0: 0}
        for cell, image in zip(cells, arrangement):
            mapping.update(zip(cell, image))
        if all(((mapping[a], mapping[b]) if mapping[a] < mapping[b] else (mapping[b], mapping[a]))
               in edge_set for a, b in motif.edges):
            count += 1
    return count


def count_in_complete(motif: RootedMotif, n: int) -> int:
    """Rooted copies of the motif at a vertex of K_n: (n-1)_{|F|-1}/aut(F)"""
    if n < motif.order:
        return 0
    return falling_factorial(n - 1, motif.order - 1) // motif.aut


def _ratio_max(motif: RootedMotif, with_root: bool) -> Fraction:
    pool = range(1, motif.order)
    best = Fraction(0)
    for size in range(1 if with_root else 2, len(pool) + 1):
        for subset in itertools.combinations(pool, size):
            vertices = (0,) + subset if with_root else subset
            ratio = Fraction(motif.induced_edge_count(vertices), len(vertices) - 1)
            if ratio > best:
                best = ratio
    return best


def m_parameter(motif: RootedMotif) -> Fraction:
    """Max of e(H)/(|H|-1) over induced subgraphs H containing the root, |H| > 1"""
    return _ratio_max(motif, with_root=True)


def gamma_parameter(motif: RootedMotif) -> Fraction:
    """
    Max of e(H)/(|H|-1) over induced subgraphs H avoiding the root, |H| > 1.

    Raises:
        InputError: If the motif has fewer than 3 vertices (no such H exists)
    """
    if motif.order < 3:
        raise InputError(f"gamma is undefined for motif {motif.label} with {motif.order} vertices")
    return _ratio_max(motif, with_root=False)


def epsilon_parameter(motif: RootedMotif, n: int, rho: float) -> float:
    """
    Concentration scale of a rooted count.

    Returns:
        1 / min over root-containing vertex subsets H (|H| > 1) of n^(|H|-1) rho^e(H)
    """
    smallest = math.inf
    for size in range(1, motif.order):
        for subset in itertools.combinations(range(1, motif.order), size):
            vertices = (0,) + subset
            scale = float(n) ** size * float(rho) ** motif.induced_edge_count(vertices)
            smallest = min(smallest, scale)
    return 1.0 / smallest if smallest > 0 else math.inf


# Root is vertex 0 in every entry.
_CATALOG_EDGES: Dict[str, Tuple[int, List[Edge]]] = {
    'edge': (2, [(0, 1)]),
    'cherry': (3, [(0, 1), (1, 2)]),
    '2-star': (3, [(0, 1), (0, 2)]),
    'triangle': (3, [(0, 1), (0, 2), (1, 2)]),
    'square': (4, [(0, 1), (1, 2), (2, 3), (0, 3)]),
    'diamond': (4, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)]),
    'bowtie': (5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]),
    'shovel': (4, [(0, 1), (0, 2), (1, 2), (1, 3)]),
    'tripod': (4, [(0, 1), (1, 2), (1, 3)]),
    '3-star': (4, [(0, 1), (0, 2), (0, 3)]),
}

MOTIF_ALIASES = {
    'two-star': '2-star',
    'three-star': '3-star',
    'path': 'cherry',
    '4-cycle': 'square',
    'cycle4': 'square',
}


def catalog_names() -> List[str]:
    return list(_CATALOG_EDGES)


def get_motif(name: str) -> RootedMotif:
    """
    Catalog motif by name or alias

    Raises:
        InputError: If the name is not in the catalog
    """
    key = name.strip().lower()
    key = MOTIF_ALIASES.get(key, key)
    if key not in _CATALOG_EDGES:
        raise InputError(
            f"Unknown motif: {name}. Available motifs: {', '.join(catalog_names())}")
    order, edges = _CATALOG_EDGES[key]
    return RootedMotif(order, edges, name=key)


def catalog() -> Dict[str, RootedMotif]:
    return {name: get_motif(name) for name in _CATALOG_EDGES}


def identify(motif: RootedMotif) -> RootedMotif:
    """Attach the catalog name of a motif isomorphic to this one, if any"""
    key = canonical_key(motif)
    for name, entry in catalog().items():
        if canonical_key(entry) == key:
            return motif.named(name)
    return motif
