"""
Overlap sets, covering coefficients and the product identity
"""
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from src.counting.overlap import (gluing_dominance, gluing_product, inductive_coefficients,
                                  overlap_set, verify_product_identity)
from src.counting.rooted_counts import rooted_count
from src.utils.errors import InputError
from src.utils.graph_utils import Graph
from src.utils.motif_utils import (RootedMotif, canonical_key, catalog_names, get_motif,
                                   is_rooted_isomorphic)
from tests.graph_helpers import random_graph

SMALL = ['edge', 'cherry', '2-star', 'triangle', 'square']


def named_coefficients(overlap):
    return {h.name: c for h, c in overlap.entries}


def test_triangle_times_triangle():
    triangle = get_motif('triangle')
    assert named_coefficients(overlap_set(triangle, triangle)) == {
        'triangle': 1, 'diamond': 2, 'bowtie': 2}


def test_edge_times_edge():
    edge = get_motif('edge')
    assert named_coefficients(overlap_set(edge, edge)) == {'edge': 1, '2-star': 2}


def test_cherry_times_cherry():
    cherry = get_motif('cherry')
    expected = {'cherry': 1, 'triangle': 2, 'tripod': 2, 'shovel': 2, 'square': 2,
                'cherry*cherry': 2}
    assert named_coefficients(overlap_set(cherry, cherry)) == expected
    assert named_coefficients(inductive_coefficients(cherry, cherry)) == expected


def test_triangle_times_cherry():
    triangle, cherry = get_motif('triangle'), get_motif('cherry')
    overlap = overlap_set(triangle, cherry)
    assert named_coefficients(overlap) == {
        'triangle': 2, 'shovel': 1, 'diamond': 2, 'triangle*cherry': 1}
    assert overlap.coefficient(gluing_product(triangle, cherry)) == 1
    assert overlap.coefficients() == inductive_coefficients(triangle, cherry).coefficients()


def test_gluing_entry_is_the_product():
    triangle, edge = get_motif('triangle'), get_motif('edge')
    overlap = overlap_set(triangle, edge)
    glued, c = overlap.gluing
    assert is_rooted_isomorphic(glued, gluing_product(triangle, edge))
    assert c == 1
    assert all(canonical_key(h) != canonical_key(glued) for h, _ in overlap.non_gluing())


def test_union_sizes_are_bounded():
    f1, f2 = get_motif('square'), get_motif('cherry')
    for h, c in overlap_set(f1, f2):
        assert max(f1.order, f2.order) <= h.order <= f1.order + f2.order - 1
        assert c > 0


@pytest.mark.parametrize("a,b", list(itertools.combinations_with_replacement(SMALL, 2)))
def test_direct_and_inductive_agree(a, b):
    f1, f2 = get_motif(a), get_motif(b)
    assert overlap_set(f1, f2).coefficients() == inductive_coefficients(f1, f2).coefficients()


def test_overlap_is_symmetric_up_to_isomorphism():
    f1, f2 = get_motif('triangle'), get_motif('cherry')
    assert overlap_set(f1, f2).coefficients() == overlap_set(f2, f1).coefficients()


def test_pair_too_large():
    with pytest.raises(InputError, match="exceeds"):
        overlap_set(get_motif('bowtie'), RootedMotif(7, [(0, i) for i in range(1, 7)]))


def test_identity_on_complete_graph():
    triangle = get_motif('triangle')
    check = verify_product_identity(Graph.complete(6), 0, triangle, triangle)
    assert check['equal']
    assert check['lhs'] == rooted_count(Graph.complete(6), 0, triangle) ** 2


def test_identity_on_counting_example(counting_graph):
    for a, b in [('triangle', 'triangle'), ('square', 'cherry'), ('edge', 'triangle')]:
        for vertex in (0, 1):
            assert verify_product_identity(counting_graph, vertex,
                                           get_motif(a), get_motif(b))['equal']


@settings(max_examples=15, deadline=None)
@given(n=st.integers(min_value=5, max_value=10), p=st.floats(min_value=0.2, max_value=0.8),
       seed=st.integers(min_value=0, max_value=10 ** 6),
       pair=st.sampled_from([('edge', 'edge'), ('triangle', 'triangle'), ('cherry', 'edge'),
                             ('square', 'triangle'), ('2-star', 'cherry')]))
def test_product_identity_holds_on_random_graphs(n, p, seed, pair):
    graph = random_graph(n, p, seed)
    f1, f2 = get_motif(pair[0]), get_motif(pair[1])
    overlap = overlap_set(f1, f2)
    for vertex in range(n):
        check = verify_product_identity(graph, vertex, f1, f2, overlap=overlap)
        assert check['lhs'] == check['rhs']


def test_gluing_dominance_is_a_share():
    graph = random_graph(30, 0.4, 11)
    edge = get_motif('edge')
    share = gluing_dominance(graph, 0, edge, edge)
    degree = graph.degree(0)
    assert share == pytest.approx(2 * (degree * (degree - 1) / 2) / degree ** 2)
    assert 0 < share <= 1


def test_triangle_squared_at_second_root(counting_graph):
    # 2^2 = 2 * X_bowtie + 2 * X_diamond + X_triangle at vertex 1
    check = verify_product_identity(counting_graph, 1, get_motif('triangle'), get_motif('triangle'))
    assert check['lhs'] == 4
    assert {t['motif']: t['count'] for t in check['terms']} == {
        'triangle': 2, 'diamond': 1, 'bowtie': 0}


@pytest.mark.slow
@pytest.mark.parametrize("a,b", list(itertools.combinations_with_replacement(catalog_names(), 2)))
def test_product_identity_for_every_catalog_pair(a, b):
    f1, f2 = get_motif(a), get_motif(b)
    overlap = overlap_set(f1, f2)
    for seed in range(50):
        n, p = 12 + seed % 19, 0.1 + 0.05 * (seed % 4)
        graph = random_graph(n, p, seed)
        for vertex in range(n):
            check = verify_product_identity(graph, vertex, f1, f2, overlap=overlap)
            assert check['lhs'] == check['rhs'], f"graph {seed}, vertex {vertex}"
