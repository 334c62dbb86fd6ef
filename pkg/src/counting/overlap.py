"""
Gluing products, overlap sets H_{F1,F2} and the product identity
X_{F1}(G,i) X_{F2}(G,i) = sum_H c_H X_H(G,i)
"""
import itertools
import logging
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import networkx as nx

from ..utils.errors import InputError
from ..utils.graph_utils import Graph
from ..utils.motif_utils import RootedMotif, canonical_form, canonical_key, identify
from .rooted_counts import count_in_motif, motif_as_graph, rooted_copies, rooted_count

logger = logging.getLogger(__name__)

MAX_PAIR_ORDER = 11


def gluing_product(f1: RootedMotif, f2: RootedMotif) -> RootedMotif:
    """Disjoint union of two rooted motifs with their roots identified"""
    shift = f1.order - 1

    def relabel(v: int) -> int:
        return 0 if v == 0 else v + shift

    edges = list(f1.edges) + [(relabel(a), relabel(b)) for a, b in f2.edges]
    return RootedMotif(f1.order + f2.order - 1, edges, name=f"{f1.label}*{f2.label}")


def _sort_key(motif: RootedMotif) -> Tuple:
    canon = canonical_form(motif)
    return canon.order, canon.edge_count, canon.edges


class OverlapSet:
    """
    Overlap set H_{F1,F2}: rooted graphs formed by one copy of F1 and one copy
    of F2 sharing the root, each with its covering coefficient c_H.
    """

    def __init__(self, f1: RootedMotif, f2: RootedMotif, entries: List[Tuple[RootedMotif, int]],
                 method: str = 'direct'):
        self.f1 = f1
        self.f2 = f2
        self.entries = sorted(entries, key=lambda e: _sort_key(e[0]))
        self.method = method

    @property
    def gluing(self) -> Tuple[RootedMotif, int]:
        order = self.f1.order + self.f2.order - 1
        edges = self.f1.edge_count + self.f2.edge_count
        for h, c in self.entries:
            if h.order == order and h.edge_count == edges:
                return h, c
        raise InputError("overlap set has no gluing entry")

    def coefficients(self) -> Dict[Tuple, int]:
        """Map canonical key -> c_H"""
        return {canonical_key(h): c for h, c in self.entries}

    def coefficient(self, h: RootedMotif) -> int:
        return self.coefficients().get(canonical_key(h), 0)

    def non_gluing(self) -> List[Tuple[RootedMotif, int]]:
        glued = canonical_key(self.gluing[0])
        return [(h, c) for h, c in self.entries if canonical_key(h) != glued]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def to_dict(self) -> Dict:
        return {
            'f1': self.f1.to_dict(),
            'f2': self.f2.to_dict(),
            'method': self.method,
            'entries': [{'motif': h.to_dict(), 'c': c} for h, c in self.entries],
        }


def _check_size(f1: RootedMotif, f2: RootedMotif):
    if f1.order + f2.order > MAX_PAIR_ORDER:
        raise InputError(
            f"|F1|+|F2| = {f1.order + f2.order} exceeds the overlap construction limit "
            f"of {MAX_PAIR_ORDER}")


def overlap_unions(f1: RootedMotif, f2: RootedMotif) -> List[RootedMotif]:
    """
    All unions of F1 with a copy of F2 sharing the root, up to rooted isomorphism.

    F1 sits on 0..|F1|-1; each non-root vertex of F2 goes either onto a
    distinct non-root vertex of F1 or onto a fresh vertex.
    """
    _check_size(f1, f2)
    k1 = f1.order
    f2_vertices = list(range(1, f2.order))
    targets = list(range(1, k1))
    unions: Dict[Tuple, RootedMotif] = {}
    glued = canonical_key(gluing_product(f1, f2))

    for shared in range(0, min(len(f2_vertices), len(targets)) + 1):
        for moved in itertools.combinations(f2_vertices, shared):
            for image in itertools.permutations(targets, shared):
                mapping = {0: 0, **dict(zip(moved, image))}
                fresh = k1
                for v in f2_vertices:
                    if v not in mapping:
                        mapping[v] = fresh
                        fresh += 1
                edges = set(f1.edges)
                for a, b in f2.edges:
                    x, y = mapping[a], mapping[b]
                    edges.add((x, y) if x < y else (y, x))
                union = RootedMotif(fresh, edges)
                key = canonical_key(union)
                if key not in unions:
                    named = identify(canonical_form(union))
                    if named.name is None and key == glued:
                        named = named.named(f"{f1.label}*{f2.label}")
                    unions[key] = named
    return list(unions.values())


def covering_pairs(h: RootedMotif, f1: RootedMotif, f2: RootedMotif) -> int:
    """Ordered pairs (copy of F1, copy of F2) at the root of H whose union is H"""
    host = motif_as_graph(h)
    everything = frozenset(h.edges)
    copies1 = rooted_copies(host, 0, f1)
    copies2 = rooted_copies(host, 0, f2)
    return sum(1 for a in copies1 for b in copies2 if a | b == everything)


def overlap_set(f1: RootedMotif, f2: RootedMotif) -> OverlapSet:
    """
    Overlap set with coefficients from the direct covering count

    Raises:
        InputError: If |F1|+|F2| > MAX_PAIR_ORDER
    """
    entries = []
    for h in overlap_unions(f1, f2):
        c = covering_pairs(h, f1, f2)
        if c <= 0:
            raise InputError(f"union {h.label} has no covering pair")
        entries.append((h, c))
    logger.debug("overlap set %s x %s: %d entries", f1.label, f2.label, len(entries))
    return OverlapSet(f1, f2, entries, method='direct')


def containment_order(elements: List[RootedMotif]) -> List[RootedMotif]:
    """
    Topological order of the containment preorder (H' before H when H'
    embeds in H at the root), generations ordered by (|H|, e(H), canonical form)
    """
    dag = nx.DiGraph()
    keyed = {canonical_key(h): h for h in elements}
    dag.add_nodes_from(keyed)
    for ka, a in keyed.items():
        for kb, b in keyed.items():
            if ka != kb and count_in_motif(b, a) > 0:
                dag.add_edge(ka, kb)
    ordered = []
    for generation in nx.topological_generations(dag):
        ordered.extend(sorted((keyed[k] for k in generation), key=_sort_key))
    return ordered


def inductive_coefficients(f1: RootedMotif, f2: RootedMotif) -> OverlapSet:
    """
    Coefficients by bottom-up subtraction over the containment order:
    c_H = X_{F1}(H) X_{F2}(H) - sum_{H' < H} c_{H'} X_{H'}(H)
    """
    elements = containment_order(overlap_unions(f1, f2))
    solved: List[Tuple[RootedMotif, int]] = []
    for h in elements:
        c = count_in_motif(h, f1) * count_in_motif(h, f2)
        for smaller, c_small in solved:
            c -= c_small * count_in_motif(h, smaller)
        if c <= 0:
            raise InputError(f"non-positive inductive coefficient {c} for {h.label}")
        solved.append((h, c))
    return OverlapSet(f1, f2, solved, method='inductive')


def verify_product_identity(graph: Graph, vertex: int, f1: RootedMotif, f2: RootedMotif,
                            overlap: Optional[OverlapSet] = None) -> Dict:
    """
    Check X_{F1}(G,i) X_{F2}(G,i) = sum_H c_H X_H(G,i) at one vertex

    Returns:
        Dict with both sides, the per-H terms and the equality flag
    """
    overlap = overlap or overlap_set(f1, f2)
    lhs = rooted_count(graph, vertex, f1) * rooted_count(graph, vertex, f2)
    terms = []
    rhs = 0
    for h, c in overlap.entries:
        x = rooted_count(graph, vertex, h)
        terms.append({'motif': h.label, 'c': c, 'count': x})
        rhs += c * x
    if lhs != rhs:
        logger.warning("product identity fails at vertex %d for %s x %s: %d != %d",
                       vertex, f1.label, f2.label, lhs, rhs)
    return {
        'vertex': vertex,
        'f1': f1.label,
        'f2': f2.label,
        'lhs': lhs,
        'rhs': rhs,
        'equal': lhs == rhs,
        'terms': terms,
    }


def gluing_dominance(graph: Graph, vertex: int, f1: RootedMotif, f2: RootedMotif,
                     overlap: Optional[OverlapSet] = None) -> float:
    """Share c_{F1F2} X_{F1F2}(G,i) / (X_{F1}(G,i) X_{F2}(G,i)) of the gluing term"""
    overlap = overlap or overlap_set(f1, f2)
    glued, c = overlap.gluing
    product = rooted_count(graph, vertex, f1) * rooted_count(graph, vertex, f2)
    if product == 0:
        return float('nan')
    return c * rooted_count(graph, vertex, glued) / product


@lru_cache(maxsize=256)
def cached_overlap_set(f1: RootedMotif, f2: RootedMotif) -> OverlapSet:
    """Memoized overlap_set for repeated moment evaluations"""
    return overlap_set(f1, f2)
