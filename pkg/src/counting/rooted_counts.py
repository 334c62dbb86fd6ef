"""
Generic rooted subgraph counting by backtracking over injective embeddings
"""
import logging
from typing import FrozenSet, Iterator, List, Set, Tuple

import numpy as np

from ..utils.errors import InputError, InvariantViolation
from ..utils.graph_utils import Graph
from ..utils.motif_utils import RootedMotif

logger = logging.getLogger(__name__)

INT64_MAX = np.iinfo(np.int64).max


def search_plan(motif: RootedMotif) -> List[Tuple[int, int, Tuple[int, ...]]]:
    """
    Connectivity-preserving visiting order of the motif vertices.

    Returns:
        One (vertex, anchor, checks) triple per non-root vertex, in BFS order
        from the root. ``anchor`` is an already placed neighbor whose image's
        adjacency supplies the candidates; ``checks`` are the other already
        placed neighbors that the candidate must also be adjacent to.
    """
    order = [0]
    position = {0: 0}
    head = 0
    while head < len(order):
        v = order[head]
        head += 1
        for u in motif.adjacency[v]:
            if u not in position:
                position[u] = len(order)
                order.append(u)
    plan = []
    for v in order[1:]:
        placed = sorted((u for u in motif.adjacency[v] if position[u] < position[v]),
                        key=position.__getitem__)
        plan.append((v, placed[0], tuple(placed[1:])))
    return plan


def embedding_count(graph: Graph, vertex: int, motif: RootedMotif) -> int:
    """Number of injective edge-preserving maps of the motif sending its root to ``vertex``"""
    plan = search_plan(motif)
    image = [-1] * motif.order
    image[0] = vertex
    used = {vertex}
    depth_max = len(plan)

    def extend(depth: int) -> int:
        if depth == depth_max:
            return 1
        v, anchor, checks = plan[depth]
        total = 0
        for candidate in graph.neighbors(image[anchor]):
            if candidate in used:
                continue
            if any(not graph.has_edge(candidate, image[u]) for u in checks):
                continue
            image[v] = candidate
            used.add(candidate)
            total += extend(depth + 1)
            used.discard(candidate)
        image[v] = -1
        return total

    return extend(0)


def iter_embeddings(graph: Graph, vertex: int, motif: RootedMotif) -> Iterator[Tuple[int, ...]]:
    """Yield every embedding as the tuple of images of motif vertices 0..|F|-1"""
    plan = search_plan(motif)
    image = [-1] * motif.order
    image[0] = vertex
    used = {vertex}

    def extend(depth: int):
        if depth == len(plan):
            yield tuple(image)
            return
        v, anchor, checks = plan[depth]
        for candidate in graph.neighbors(image[anchor]):
            if candidate in used or any(not graph.has_edge(candidate, image[u]) for u in checks):
                continue
            image[v] = candidate
            used.add(candidate)
            yield from extend(depth + 1)
            used.discard(candidate)
        image[v] = -1

    yield from extend(0)


def rooted_copies(graph: Graph, vertex: int, motif: RootedMotif) -> Set[FrozenSet[Tuple[int, int]]]:
    """Distinct rooted copies at ``vertex`` as edge sets of the host graph"""
    copies = set()
    for image in iter_embeddings(graph, vertex, motif):
        copies.add(frozenset(
            (image[a], image[b]) if image[a] < image[b] else (image[b], image[a])
            for a, b in motif.edges
        ))
    return copies


def rooted_count(graph: Graph, vertex: int, motif: RootedMotif) -> int:
    """
    Count rooted copies X_F(G, i) of a motif at a vertex.

    Copies are not necessarily induced: every edge subset of G forming a
    rooted copy of the motif at ``vertex`` counts once.

    Args:
        graph: Host graph
        vertex: Root vertex in the host graph
        motif: Rooted motif

    Returns:
        Number of rooted copies

    Raises:
        InputError: If the vertex is out of range
        InvariantViolation: If the embedding count is not divisible by aut(F)
    """
    if not 0 <= vertex < graph.n:
        raise InputError(f"vertex {vertex} out of range for graph with n={graph.n}")
    embeddings = embedding_count(graph, vertex, motif)
    copies, remainder = divmod(embeddings, motif.aut)
    if remainder:
        raise InvariantViolation(
            f"{embeddings} embeddings of {motif.label} at vertex {vertex} "
            f"not divisible by aut={motif.aut}")
    return copies


def motif_as_graph(motif: RootedMotif) -> Graph:
    """Host-graph view of a motif (root at vertex 0)"""
    return Graph.from_edges(motif.order, motif.edges)


def count_in_motif(host: RootedMotif, pattern: RootedMotif) -> int:
    """Rooted copies of ``pattern`` inside ``host``, roots matched"""
    if pattern.order > host.order or pattern.edge_count > host.edge_count:
        return 0
    return rooted_count(motif_as_graph(host), 0, pattern)


def checked_int64(values) -> np.ndarray:
    """Convert Python integers to int64, refusing values that would wrap"""
    values = list(values)
    for v in values:
        if v < 0 or v > INT64_MAX:
            raise InvariantViolation(f"rooted count {v} does not fit a 64-bit integer")
    return np.array(values, dtype=np.int64)
