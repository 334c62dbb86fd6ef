"""
Density census: normalization, worker invariance and error cases
"""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.counting.census import census, count_matrix
from src.counting.rooted_counts import rooted_count
from src.utils.errors import DegenerateModelError, InputError
from src.utils.graph_utils import Graph
from src.utils.motif_utils import count_in_complete, get_motif
from tests.graph_helpers import random_graph

MOTIFS = [get_motif(name) for name in ('edge', 'triangle', 'square', 'diamond', 'tripod')]


def test_complete_graph_has_unit_densities():
    densities = census(Graph.complete(7), MOTIFS)
    assert densities.rho_hat == pytest.approx(1.0)
    np.testing.assert_allclose(densities.values, 1.0)


def test_density_formula(counting_graph):
    densities = census(counting_graph, MOTIFS)
    rho_hat = counting_graph.edge_count / (11 * 10 / 2)
    assert densities.rho_hat == pytest.approx(rho_hat)
    triangle = densities.column('triangle')
    expected = 1 / (rho_hat ** 3 * count_in_complete(get_motif('triangle'), 11))
    assert triangle[0] == pytest.approx(expected)


def test_known_rho_replaces_estimate(counting_graph):
    densities = census(counting_graph, [get_motif('edge')], rho=0.5)
    assert densities.rho == 0.5
    assert densities.column('edge')[1] == pytest.approx(counting_graph.degree(1) / (10 * 0.5))


def test_dataframe_layout(counting_graph):
    frame = census(counting_graph, MOTIFS[:2]).to_dataframe()
    assert list(frame.columns) == ['vertex_id', 'edge_count', 'edge_density',
                                   'triangle_count', 'triangle_density']
    assert len(frame) == 11


def test_summary(counting_graph):
    summary = census(counting_graph, MOTIFS[:2]).summary()
    assert summary['n'] == 11
    assert summary['edges'] == 18
    assert set(summary['mean_density']) == {'edge', 'triangle'}
    # Each edge is rooted at both endpoints, each triangle at all three corners.
    assert summary['total_counts']['edge'] == 36
    assert summary['total_counts']['triangle'] % 3 == 0


def test_count_vectors_expose_raw_counts(counting_graph):
    vectors = census(counting_graph, MOTIFS[:2]).count_vectors()
    assert [v.motif.label for v in vectors] == ['edge', 'triangle']
    assert len(vectors[0]) == 11
    triangle = get_motif('triangle')
    assert [vectors[1][v] for v in range(11)] == [rooted_count(counting_graph, v, triangle)
                                                   for v in range(11)]


def test_empty_graph_is_degenerate():
    with pytest.raises(DegenerateModelError, match="empty graph"):
        census(Graph.from_edges(5, []), MOTIFS)


def test_motif_larger_than_graph():
    with pytest.raises(InputError, match="larger than the graph"):
        census(Graph.from_edges(3, [(0, 1), (1, 2)]), [get_motif('square')])


def test_no_motifs(counting_graph):
    with pytest.raises(InputError):
        census(counting_graph, [])


def test_count_matrix_subset_of_vertices(counting_graph):
    counts = count_matrix(counting_graph, MOTIFS, vertices=[1, 0])
    assert counts[0, 1] == 2
    assert counts[1, 1] == 1


def test_worker_count_does_not_change_result():
    graph = random_graph(40, 0.2, 3)
    serial = census(graph, MOTIFS, workers=1)
    parallel = census(graph, MOTIFS, workers=2)
    np.testing.assert_array_equal(serial.counts, parallel.counts)


@settings(max_examples=20, deadline=None)
@given(n=st.integers(min_value=5, max_value=15), p=st.floats(min_value=0.15, max_value=0.8),
       seed=st.integers(min_value=0, max_value=10 ** 6))
def test_census_counts_match_per_vertex_counts(n, p, seed):
    graph = random_graph(n, p, seed)
    if graph.edge_count == 0:
        return
    densities = census(graph, MOTIFS)
    for t, motif in enumerate(MOTIFS):
        expected = [rooted_count(graph, v, motif) for v in range(n)]
        np.testing.assert_array_equal(densities.counts[:, t], expected)
    assert np.all(densities.values >= 0)
