"""
Blockmodel fitting, bootstrap moments, critical values, logistic regression
and the triadic-closure perturbation
"""
import networkx as nx
import numpy as np
import pytest
from scipy.special import expit

from src.analyzers.goodness_of_fit import gof_test
from src.counting.census import census
from src.fixtures.sample_data import PLANTED_BETA, school_dataset
from src.inference.blockmodel_fit import (block_modularity, estimate_B, fit_blockmodel,
                                         label_agreement, louvain)
from src.inference.bootstrap import (BootstrapMoments, bonferroni_critical_value,
                                     bootstrap_moments, critical_value, inverse_sqrt,
                                     order_statistic, pointwise_critical_value, standardize)
from src.inference.perturbation import triadic_closure
from src.inference.regression import design_matrix, logistic_fit
from src.models.kernel import Kernel, SampleSpec, sample_graph, stream
from src.utils.errors import (CollinearityError, DegenerateModelError, InputError,
                              SeparationError)
from src.utils.graph_utils import Graph
from src.utils.motif_utils import get_motif

EDGE = get_motif('edge')
TRIANGLE = get_motif('triangle')
ASSORTATIVE = Kernel([[0.9, 0.05], [0.05, 0.9]])


# --- Blockmodel fit ----------------------------------------------------------

def test_two_cliques_fit(two_cliques):
    fit = fit_blockmodel(two_cliques, seed=0)
    assert fit.k == 2
    np.testing.assert_allclose(fit.B_hat, np.eye(2))
    assert fit.log_likelihood == pytest.approx(0.0)
    assert fit.aic == pytest.approx(6.0)
    np.testing.assert_array_equal(fit.assignment, [0] * 10 + [1] * 10)
    # Merging the cliques or splitting either one lowers modularity.
    assert [c['k'] for c in fit.candidates] == [2]
    assert fit.louvain_k == 2


def test_fit_to_kernel(two_cliques):
    kernel = fit_blockmodel(two_cliques, seed=0).to_kernel()
    np.testing.assert_allclose(kernel.pi, [0.5, 0.5])


def test_within_block_counts_ordered_pairs(two_cliques):
    labels = np.array([0] * 10 + [1] * 10)
    B_hat, _ = estimate_B(two_cliques, labels)
    assert B_hat[0, 0] == pytest.approx(1.0)
    assert B_hat[0, 1] == pytest.approx(0.0)


def test_empty_block_is_degenerate(two_cliques):
    labels = np.array([0] * 10 + [2] * 10)
    with pytest.raises(DegenerateModelError, match="empty block"):
        estimate_B(two_cliques, labels, k=3)


def test_louvain_needs_edges():
    with pytest.raises(DegenerateModelError):
        louvain(Graph.from_edges(4, []))


def test_isolated_vertices_join_largest_block():
    edges = [(a, b) for a in range(6) for b in range(a + 1, 6)] + [(6, 7)]
    partition = louvain(Graph.from_edges(9, edges), seed=0)
    assert partition.labels[8] == partition.labels[0]


def test_planted_blocks_are_recovered():
    graph, latents = sample_graph(ASSORTATIVE, SampleSpec(80, 1.0, seed=3))
    fit = fit_blockmodel(graph, seed=0)
    assert label_agreement(latents.block, fit.assignment) > 0.95


def test_three_blocks_are_not_oversplit(kernel):
    n = 1000
    graph, latents = sample_graph(kernel, SampleSpec(n, n ** (-1 / 3), seed=0))
    fit = fit_blockmodel(graph, seed=0)
    assert fit.louvain_k == 3
    assert fit.k == 3
    assert label_agreement(latents.block, fit.assignment) > 0.95


def test_block_modularity_matches_networkx(two_cliques):
    labels = np.array([0] * 10 + [1] * 10)
    expected = nx.community.modularity(two_cliques.to_networkx(),
                                       [set(range(10)), set(range(10, 20))])
    assert block_modularity(two_cliques, labels) == pytest.approx(expected)
    assert block_modularity(two_cliques, np.zeros(20, dtype=np.int64)) == pytest.approx(0.0)


def test_label_agreement():
    assert label_agreement([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0
    assert label_agreement([0, 0, 1, 1], [0, 1, 1, 1]) == 0.75


# --- Bootstrap ---------------------------------------------------------------

def test_inverse_sqrt():
    np.testing.assert_allclose(inverse_sqrt(np.diag([4.0, 9.0])), np.diag([0.5, 1 / 3]))


def test_inverse_sqrt_near_singular():
    with pytest.raises(DegenerateModelError, match="block 2"):
        inverse_sqrt(np.array([[1.0, 1.0], [1.0, 1.0]]), block=2)


def test_standardize_per_block():
    moments = BootstrapMoments([EDGE], means=[[1.0], [3.0]],
                               covariances=[[[4.0]], [[1.0]]], replicates=10,
                               active=[True, True])
    t_hat = standardize(np.array([[3.0], [5.0]]), moments, [0, 1])
    np.testing.assert_allclose(t_hat, [[1.0], [2.0]])


def test_standardize_inactive_block():
    moments = BootstrapMoments([EDGE], means=[[1.0], [np.nan]],
                               covariances=[[[4.0]], [[np.nan]]], replicates=10,
                               active=[True, False])
    with pytest.raises(DegenerateModelError):
        standardize(np.array([[3.0]]), moments, [1])


def test_order_statistic():
    values = np.arange(1, 101, dtype=float)
    assert order_statistic(values, 0.1) == 90.0
    assert order_statistic(values, 0.05) == 95.0
    assert order_statistic(values, 0.0) == 100.0


def test_critical_value_uses_replicate_maxima():
    statistics = np.array([[1.0, 5.0], [2.0, 3.0], [9.0, 0.5], [4.0, 4.0]])
    maxima = critical_value(None, 2, 0.25, 4, 0, None, statistics=statistics)
    pooled = critical_value(None, 2, 0.25, 4, 0, None, pooled=True, statistics=statistics)
    assert maxima == 5.0
    assert pooled == 4.0


def test_critical_value_rejects_bad_alpha():
    with pytest.raises(InputError):
        critical_value(None, 2, 1.5, 4, 0, None, statistics=np.ones((4, 2)))


def test_reference_critical_values():
    assert bonferroni_critical_value(100, 0.1, 2) > pointwise_critical_value(0.1, 2)
    assert pointwise_critical_value(0.05, 1) == pytest.approx(3.841, abs=1e-3)


def test_bootstrap_moments_are_reproducible():
    motifs = [EDGE, TRIANGLE]
    first = bootstrap_moments(ASSORTATIVE, 40, 4, motifs, seed=9)
    second = bootstrap_moments(ASSORTATIVE, 40, 4, motifs, seed=9)
    assert first.means.shape == (2, 2)
    assert first.covariances.shape == (2, 2, 2)
    np.testing.assert_array_equal(first.means, second.means)
    assert first.active.all()


def test_bootstrap_needs_two_replicates():
    with pytest.raises(InputError):
        bootstrap_moments(ASSORTATIVE, 40, 1, [EDGE], seed=0)


def test_gof_pipeline_runs_end_to_end():
    graph, _ = sample_graph(ASSORTATIVE, SampleSpec(60, 1.0, seed=5))
    result = gof_test(graph, [EDGE, TRIANGLE], alpha=0.1, replicates=10,
                      critical_replicates=20, seed=1)
    assert result.t_hat.shape == (60, 2)
    assert result.critical_value > 0
    assert all(result.stat[v] > result.critical_value for v in result.rejected)
    again = gof_test(graph, [EDGE, TRIANGLE], alpha=0.1, replicates=10,
                     critical_replicates=20, seed=1)
    np.testing.assert_array_equal(result.stat, again.stat)
    assert len(result.to_dataframe()) == 60


def test_gof_refuses_complete_graph():
    with pytest.raises(DegenerateModelError, match="complete graph"):
        gof_test(Graph.complete(8), [EDGE])


# --- Logistic regression -----------------------------------------------------

def test_logistic_recovers_planted_coefficients():
    rng = stream(0, 1)
    x = rng.normal(size=3000)
    X = np.column_stack([np.ones_like(x), x])
    y = (rng.random(3000) < expit(0.5 + 1.0 * x)).astype(int)
    fit = logistic_fit(X, y, names=['intercept', 'x'])
    assert fit.converged
    assert fit.gradient_norm < 1e-8
    assert abs(fit.coefficients[0] - 0.5) < 4 * fit.std_errors[0]
    assert abs(fit.coefficients[1] - 1.0) < 4 * fit.std_errors[1]
    assert np.all(fit.ci_low < fit.coefficients)
    assert list(fit.to_dataframe()['term']) == ['intercept', 'x']


def test_logistic_constant_labels():
    X = np.column_stack([np.ones(10), np.arange(10.0)])
    with pytest.raises(SeparationError):
        logistic_fit(X, np.zeros(10))


def test_logistic_perfect_separation():
    x = np.tile([-2.0, -1.0, 1.0, 2.0], 10)
    X = np.column_stack([np.ones_like(x), x])
    with pytest.raises(SeparationError):
        logistic_fit(X, (x > 0).astype(int))


def test_logistic_collinear_design():
    rng = stream(0, 2)
    x = rng.normal(size=50)
    X = np.column_stack([np.ones_like(x), x, 2 * x])
    y = (rng.random(50) < 0.5).astype(int)
    with pytest.raises(CollinearityError):
        logistic_fit(X, y)


def test_logistic_input_checks():
    X = np.column_stack([np.ones(6), np.arange(6.0)])
    with pytest.raises(InputError, match="0 or 1"):
        logistic_fit(X, [0, 1, 2, 0, 1, 0])
    with pytest.raises(InputError, match="constant-zero"):
        logistic_fit(np.column_stack([np.ones(6), np.zeros(6)]), [0, 1, 1, 0, 1, 0])


def test_design_matrix_adds_intercept(counting_graph):
    frame = census(counting_graph, [TRIANGLE]).to_dataframe()
    X, names = design_matrix(frame, ['triangle_density'])
    assert names == ['intercept', 'triangle_density']
    np.testing.assert_array_equal(X[:, 0], 1.0)
    with pytest.raises(InputError):
        design_matrix(frame, ['missing'])


@pytest.mark.slow
def test_wald_interval_coverage():
    graph, _ = school_dataset(n=2000, seed=0)
    density = census(graph, [TRIANGLE]).column('triangle')
    X = np.column_stack([np.ones_like(density), density])
    slope = PLANTED_BETA['density_triangle']
    probability = expit(PLANTED_BETA['intercept'] + slope * density)
    covered = 0
    for seed in range(500):
        y = (stream(seed, 3).random(len(density)) < probability).astype(int)
        fit = logistic_fit(X, y)
        assert fit.converged
        assert fit.gradient_norm < 1e-8
        covered += fit.ci_low[1] <= slope <= fit.ci_high[1]
    assert 0.93 <= covered / 500 <= 0.97


# --- Triadic closure ---------------------------------------------------------

def test_triadic_closure_completes_a_star():
    star = Graph.from_edges(11, [(0, leaf) for leaf in range(1, 11)])
    closed, info = triadic_closure(star, seed=0, vertex_fraction=1.0, closure_probability=1.0)
    assert closed == Graph.complete(11)
    assert len(info['added_edges']) == 45
    assert star.edge_count == 10


def test_triadic_closure_is_seeded():
    graph, _ = sample_graph(ASSORTATIVE, SampleSpec(100, 0.5, seed=0))
    a, info_a = triadic_closure(graph, seed=4)
    b, info_b = triadic_closure(graph, seed=4)
    assert a == b
    assert info_a == info_b
    assert len(info_a['selected']) == 5
    assert a.edge_count >= graph.edge_count
