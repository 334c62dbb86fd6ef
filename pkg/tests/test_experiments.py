"""
Monte Carlo experiment harness: vertex normality, subcritical counts,
averaged statistics and level/power of the goodness-of-fit test
"""
import numpy as np
import pytest

from src.analyzers import (AnalysisResult, AnalyzerFactory, BaseAnalyzer, create_analyzer,
                           get_available_methods)
from src.analyzers.average_clt import (AverageReport, average_clt_experiment, exact_moments,
                                       get_test_function)
from src.analyzers.level_power import RejectionReport, binomial_band, level_power_experiment
from src.analyzers.subcritical import SubcriticalReport, subcritical_experiment
from src.analyzers.vertex_clt import (MomentReport, batch_standard_errors, qq_table,
                                      vertex_clt_experiment)
from src.fixtures.sample_data import three_block_kernel
from src.models.kernel import Kernel, stream
from src.models.moments import block_densities
from src.utils.config import ExperimentConfig
from src.utils.errors import InputError
from src.utils.motif_utils import get_motif

EDGE = get_motif('edge')
TRIANGLE = get_motif('triangle')


def small_config(**overrides) -> ExperimentConfig:
    values = dict(kernel=three_block_kernel(), n=200, rho_exponent=1 / 3, replicates=40,
                  motifs=[EDGE, TRIANGLE], seed=3, batches=4)
    values.update(overrides)
    return ExperimentConfig(**values)


# --- Registry ----------------------------------------------------------------

def test_all_pipelines_are_registered():
    names = {m['name'] for m in get_available_methods()}
    assert {'gof', 'regress', 'vertex-clt', 'subcritical', 'average-clt',
            'level-power'} <= names
    subcritical = next(m for m in get_available_methods() if m['name'] == 'subcritical')
    assert 'schedule' in subcritical['parameters']


def test_unknown_pipeline():
    with pytest.raises(ValueError, match="Available methods"):
        create_analyzer('no-such-pipeline')


def test_duplicate_pipeline_name_rejected():
    class Clash(BaseAnalyzer):
        def __init__(self):
            super().__init__(name='gof', description='clash')

        def analyze(self, **kwargs):
            return AnalysisResult(self.name)

    with pytest.raises(ValueError, match='already registered'):
        AnalyzerFactory.register(Clash)


# --- Batch means and QQ data -------------------------------------------------

def test_batch_standard_errors():
    se = batch_standard_errors(np.arange(20.0), 4)
    assert se == pytest.approx(np.sqrt(125 / 3) / 2)


def test_batch_standard_errors_needs_batches():
    with pytest.raises(InputError):
        batch_standard_errors(np.arange(5.0), 1)
    with pytest.raises(InputError):
        batch_standard_errors(np.arange(5.0), 10)


def test_qq_table():
    qq = qq_table(np.array([3.0, 1.0, 2.0, 0.5]), d=2)
    assert list(qq['empirical']) == [0.5, 1.0, 2.0, 3.0]
    np.testing.assert_allclose(qq['probability'], [0.125, 0.375, 0.625, 0.875])
    assert qq['theoretical'].is_monotonic_increasing


def test_moment_report_on_symmetric_values():
    t_values = np.tile([[1.0, -1.0], [-1.0, 1.0]], (10, 1))
    report = MomentReport(['a', 'b'], t_values, batches=4)
    np.testing.assert_allclose(report.moments[:, 0], 0.0)
    np.testing.assert_allclose(report.moments[:, 1], 1.0)
    np.testing.assert_allclose(report.targets, [0, 1, 0, 3, 0, 15])
    np.testing.assert_allclose(report.statistics, 2.0)
    assert report.within_tolerance(2).all()
    assert not report.within_tolerance(4).any()
    assert report.ks_rejected()
    assert len(report.to_dataframe()) == 12


# --- Vertex-level normality --------------------------------------------------

def test_vertex_clt_experiment_shapes():
    report = vertex_clt_experiment(small_config())
    assert report.t_values.shape == (40, 2)
    assert report.counts.min() >= 0
    assert set(report.regime) == {'edge', 'triangle'}
    assert len(report.qq) == 40


def test_vertex_clt_is_reproducible():
    a = vertex_clt_experiment(small_config(replicates=20))
    b = vertex_clt_experiment(small_config(replicates=20))
    np.testing.assert_array_equal(a.counts, b.counts)


def test_vertex_clt_warns_below_threshold():
    config = small_config(n=60, rho_exponent=1.0, replicates=20, batches=2, motifs=[TRIANGLE])
    with pytest.warns(UserWarning, match="degenerate"):
        vertex_clt_experiment(config)


def test_vertex_clt_analyzer_tables():
    analyzer = create_analyzer('vertex-clt')
    result = analyzer.run(kernel=three_block_kernel(), n=200, replicates=40, batches=4,
                          motifs='edge,triangle', seed=1)
    assert len(result.tables['qq']) == 40
    assert 'KS' in result.summary
    assert result.payload['orders'] == [1, 2, 3, 4, 5, 6]


@pytest.mark.slow
def test_vertex_counts_are_close_to_normal():
    report = vertex_clt_experiment(small_config(n=1000, replicates=400, batches=10))
    assert report.within_tolerance(1).all()
    assert report.within_tolerance(2).all()
    assert not report.ks_rejected(0.001)


# --- Subcritical counts ------------------------------------------------------

def test_subcritical_frequencies_shrink():
    report = subcritical_experiment(three_block_kernel(), TRIANGLE, rho_exponent=0.9,
                                    schedule=(100, 400), replicates=60, seed=2)
    assert [row['n'] for row in report.rows] == [100, 400]
    assert all(0 <= f <= 1 for f in report.frequencies)
    assert all(row['regime_scale'] < 1 for row in report.rows)
    assert report.decreasing


def test_subcritical_report_flags_increase():
    rows = [{'n': 10, 'frequency': 0.2, 'se': 0.01}, {'n': 20, 'frequency': 0.6, 'se': 0.01}]
    assert not SubcriticalReport(TRIANGLE, rows).decreasing


def test_subcritical_needs_schedule():
    with pytest.raises(InputError):
        subcritical_experiment(three_block_kernel(), TRIANGLE, 0.9, schedule=())


def test_subcritical_analyzer_takes_one_motif():
    with pytest.raises(InputError, match="exactly one motif"):
        create_analyzer('subcritical').run(kernel=three_block_kernel(), motifs='edge,triangle')


# --- Averaged statistic ------------------------------------------------------

def test_exact_moments_identity():
    config = small_config(motifs=[TRIANGLE])
    mean, sigma = exact_moments(config, get_test_function('identity'), 0.5)
    s = block_densities(config.kernel, [TRIANGLE])[:, 0]
    assert mean[0] == pytest.approx(config.kernel.pi @ s)
    assert sigma[0, 0] == pytest.approx(config.kernel.block_variance(s))


def test_exact_moments_label_split():
    config = small_config(motifs=[TRIANGLE])
    mean, sigma = exact_moments(config, get_test_function('label'), 0.25)
    s = block_densities(config.kernel, [TRIANGLE])[:, 0]
    assert mean == pytest.approx([0.25 * config.kernel.pi @ s, 0.75 * config.kernel.pi @ s])
    assert sigma.shape == (2, 2)
    assert sigma[0, 1] < 0


def test_unknown_test_function():
    with pytest.raises(InputError, match="Available"):
        get_test_function('median')


def test_constant_kernel_is_degenerate():
    config = small_config(kernel=Kernel.constant(0.5), n=60, replicates=5, motifs=[TRIANGLE])
    with pytest.warns(UserWarning, match="Var s_x = 0"):
        report = average_clt_experiment(config)
    assert report.degenerate
    assert report.ks_pvalues == [None]
    assert not report.normality_rejected()


def test_average_experiment_shapes():
    report = average_clt_experiment(small_config(n=150, replicates=20, motifs=[TRIANGLE]),
                                    f='clipped')
    assert report.deviations.shape == (20, 1)
    assert not report.degenerate
    assert np.isfinite(report.variance_ratio).all()
    assert report.to_dict()['replicates'] == 20


def test_average_report_joint_test_skips_singular_sigma():
    deviations = stream(0, 7).normal(size=(30, 2))
    report = AverageReport(deviations, np.zeros(2), np.array([[1.0, 1.0], [1.0, 1.0]]))
    assert report.joint_ks_pvalue is None
    assert all(p is not None for p in report.ks_pvalues)


# --- Level and power ---------------------------------------------------------

def test_binomial_band_covers_alpha():
    low, high = binomial_band(200, 0.1)
    assert low < 0.1 < high


def pipeline_run(rejected: bool, skipped: bool = False):
    return {'skipped': skipped, 'rejected': rejected, 'rejected_bonferroni': False}


def test_rejection_report_level():
    runs = [pipeline_run(True)] + [pipeline_run(False)] * 9 + [pipeline_run(False, skipped=True)]
    report = RejectionReport(runs, alpha=0.1, perturbed=False)
    assert report.pipelines == 10
    assert report.skipped == 1
    assert report.rate == pytest.approx(0.1)
    assert report.compatible
    assert report.to_dict()['band'] is not None
    summary = report.describe()
    assert summary.startswith('level: rejection rate 0.100 over 10 pipelines, 1 skipped')
    assert summary.endswith('compatible with 0.1')


def test_rejection_report_power():
    assert RejectionReport([pipeline_run(True)] * 10, alpha=0.1, perturbed=True).compatible
    weak = RejectionReport([pipeline_run(False)] * 10, alpha=0.1, perturbed=True)
    assert not weak.compatible
    assert weak.to_dict()['band'] is None


def test_level_power_experiment_runs():
    kernel = Kernel([[0.9, 0.05], [0.05, 0.9]])
    report = level_power_experiment(kernel, n=40, rho=1.0, motifs=[EDGE, TRIANGLE],
                                    pipelines=2, seed=0, replicates=5, critical_replicates=10)
    assert report.pipelines + report.skipped == 2
    assert len(report.to_dataframe()) == 2
    assert f"{report.skipped} skipped as degenerate" in report.describe()


@pytest.mark.slow
def test_null_rejection_rate_matches_level():
    n = 200
    report = level_power_experiment(three_block_kernel(), n=n, rho=n ** (-1 / 3),
                                    motifs=[TRIANGLE, get_motif('square')], pipelines=200,
                                    seed=0, alpha=0.1)
    assert report.pipelines >= 190
    assert report.compatible
    assert report.rate_bonferroni < report.rate


@pytest.mark.slow
def test_triadic_closure_is_detected():
    n = 200
    report = level_power_experiment(three_block_kernel(), n=n, rho=n ** (-1 / 3),
                                    motifs=[TRIANGLE, get_motif('square')], pipelines=100,
                                    seed=1, alpha=0.1, perturb=True)
    assert report.compatible


@pytest.mark.slow
def test_average_variance_matches_exact_sigma():
    report = average_clt_experiment(small_config(n=4000, replicates=500, motifs=[TRIANGLE]))
    assert not report.degenerate
    assert abs(report.variance_ratio[0] - 1) < 0.15
    assert not report.normality_rejected(0.01)
