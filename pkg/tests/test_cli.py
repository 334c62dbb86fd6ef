"""
Command-line runs: exit codes, report layout and replay stability
"""
import json

import pandas as pd
import pytest
from openpyxl import load_workbook

from src import cli
from src.exporters.report_exporter import REPORT_FIELDS, read_report, strip_timestamp
from src.fixtures.sample_data import (COUNTING_EXAMPLE_COUNTS, counting_example_graph,
                                      school_dataset)
from src.parsers.edge_list_parser import write_edge_list
from src.utils.errors import InvariantViolation
from src.utils.graph_utils import Graph


@pytest.fixture
def example_path(tmp_path):
    return str(write_edge_list(counting_example_graph(), tmp_path / 'example.txt'))


def test_census_report(tmp_path, example_path):
    out = tmp_path / 'census.json'
    code = cli.run(['census', '--graph', example_path, '--motifs', 'triangle,cherry,square',
                    '--seed', '1', '--out', str(out)])
    assert code == 0
    report = read_report(out)
    assert tuple(report) == REPORT_FIELDS
    assert report['command'] == 'census'
    assert report['seed'] == 1
    rows = {row['original_id']: row for row in report['result']['vertices']}
    for vertex, expected in COUNTING_EXAMPLE_COUNTS.items():
        for name in ('triangle', 'cherry', 'square'):
            assert rows[str(vertex)][f'{name}_count'] == expected[name]
    table = pd.read_csv(out.with_suffix('.tsv'), sep='\t')
    assert len(table) == 11


def test_census_prints_json_without_out(capsys, example_path):
    assert cli.run(['census', '--graph', example_path, '--motifs', 'edge', '--seed', '0']) == 0
    captured = capsys.readouterr().out
    assert '"command": "census"' in captured
    assert captured.splitlines()[0].startswith('census of 11 vertices')


def test_generated_seed_is_printed(capsys, example_path):
    assert cli.run(['census', '--graph', example_path, '--motifs', 'edge']) == 0
    assert capsys.readouterr().out.startswith('seed: ')


def test_excel_export(tmp_path, example_path):
    xlsx = tmp_path / 'census.xlsx'
    assert cli.run(['census', '--graph', example_path, '--motifs', 'triangle', '--seed', '0',
                    '--out', str(tmp_path / 'c.json'), '--xlsx', str(xlsx)]) == 0
    assert xlsx.exists()
    workbook = load_workbook(xlsx)
    assert workbook.sheetnames == ['Summary', 'Densities', 'Charts']
    assert workbook['Densities']['A3'].value == 'vertex id'


@pytest.mark.parametrize("argv", [
    [],
    ['census'],
    ['census', '--graph', 'x.txt', '--bogus'],
    ['no-such-command'],
    ['census', '--graph', 'missing.txt', '--motifs', 'triangle'],
])
def test_usage_errors_exit_one(argv, capsys):
    assert cli.run(argv) == 1


def test_unknown_motif_exits_one(example_path, capsys):
    assert cli.run(['census', '--graph', example_path, '--motifs', 'pentagon', '--seed', '0']) == 1
    assert 'Available motifs' in capsys.readouterr().err


def test_help_exits_zero(capsys):
    assert cli.run(['--help']) == 0


def test_invariant_violation_exits_two(monkeypatch, example_path, capsys):
    def broken(args):
        raise InvariantViolation("count not divisible by aut")
    monkeypatch.setitem(cli.HANDLERS, 'census', broken)
    assert cli.run(['census', '--graph', example_path, '--seed', '0']) == 2


def test_unexpected_failure_exits_two(monkeypatch, example_path):
    def broken(args):
        raise RuntimeError("boom")
    monkeypatch.setitem(cli.HANDLERS, 'census', broken)
    assert cli.run(['census', '--graph', example_path, '--seed', '0']) == 2


def test_overlap_command(tmp_path):
    out = tmp_path / 'overlap.json'
    assert cli.run(['overlap', '--motifs', 'triangle,triangle', '--seed', '0',
                    '--out', str(out)]) == 0
    result = read_report(out)['result']
    assert result['agree'] is True
    assert sorted(e['c'] for e in result['direct']['entries']) == [1, 2, 2]


def test_overlap_needs_two_motifs(capsys):
    assert cli.run(['overlap', '--motifs', 'triangle', '--seed', '0']) == 1


def test_verify_identity(tmp_path, example_path):
    out = tmp_path / 'identity.json'
    assert cli.run(['verify-identity', '--graph', example_path, '--motifs', 'triangle,square',
                    '--vertex', '0', '--vertex', '1', '--seed', '0', '--out', str(out)]) == 0
    result = read_report(out)['result']
    assert result['all_equal']
    assert len(result['checks']) == 2


def test_simulate_replays_identically(tmp_path):
    reports = []
    for name in ('a', 'b'):
        out = tmp_path / f'{name}.json'
        edges = tmp_path / f'{name}.txt'
        assert cli.run(['simulate', '--n', '60', '--rho', '0.5', '--seed', '7',
                        '--edges', str(edges), '--out', str(out)]) == 0
        reports.append(read_report(out))
    assert edges.exists()
    first, second = (strip_timestamp(r) for r in reports)
    first['result'].pop('edges_path')
    second['result'].pop('edges_path')
    assert first['config'].pop('out') != second['config'].pop('out')
    assert first == second


def test_moments_command(tmp_path):
    out = tmp_path / 'moments.json'
    assert cli.run(['moments', '--n', '100', '--rho', '0.1', '--motifs', 'edge,triangle',
                    '--seed', '0', '--out', str(out)]) == 0
    result = read_report(out)['result']
    assert len(result['blocks']) == 3
    assert len(result['blocks'][0]['covariance']) == 2
    assert set(result['epsilon']) == {'edge', 'triangle'}


def test_fit_command(tmp_path):
    edges = [(a + offset, b + offset) for offset in (0, 10)
             for a in range(10) for b in range(a + 1, 10)]
    path = write_edge_list(Graph.from_edges(20, edges), tmp_path / 'cliques.txt')
    out = tmp_path / 'fit.json'
    assert cli.run(['fit', '--graph', str(path), '--seed', '0', '--out', str(out)]) == 0
    assert read_report(out)['result']['k'] == 2


def test_gof_command_with_plot(tmp_path):
    graph_path = tmp_path / 'graph.txt'
    assert cli.run(['simulate', '--n', '60', '--rho', '1.0', '--seed', '2',
                    '--kernel', str(_assortative_kernel(tmp_path)),
                    '--edges', str(graph_path), '--out', str(tmp_path / 'sim.json')]) == 0
    out = tmp_path / 'gof.json'
    plot = tmp_path / 'gof.html'
    assert cli.run(['gof', '--graph', str(graph_path), '--motifs', 'edge,triangle',
                    '--replicates', '5', '--critical-replicates', '10', '--seed', '1',
                    '--out', str(out), '--plot', str(plot)]) == 0
    result = read_report(out)['result']
    assert {'critical_value', 'rejected'} <= set(result)
    assert plot.exists()


def _assortative_kernel(tmp_path):
    path = tmp_path / 'kernel.json'
    path.write_text(json.dumps({'k': 2, 'B': [0.9, 0.05, 0.05, 0.9], 'pi': [0.5, 0.5]}))
    return path


def test_regress_command(tmp_path):
    graph, covariates = school_dataset(n=300, seed=1)
    graph_path = write_edge_list(graph, tmp_path / 'school.txt')
    csv = tmp_path / 'school.csv'
    covariates.rename_axis('vertex_id').reset_index().to_csv(csv, index=False)
    out = tmp_path / 'regress.json'
    assert cli.run(['regress', '--graph', str(graph_path), '--covariates', str(csv),
                    '--motifs', 'triangle', '--extra', 'grade', '--seed', '0',
                    '--out', str(out)]) == 0
    result = read_report(out)['result']
    assert result['terms'][:2] == ['intercept', 'density_triangle']
    assert result['convergence']['converged']


def test_validate_preset_with_overrides(tmp_path):
    out = tmp_path / 'sub.json'
    assert cli.run(['validate', '--preset', 'subcritical', '--replicates', '10',
                    '--set', 'schedule=50,100', '--seed', '0', '--out', str(out)]) == 0
    report = read_report(out)
    assert [row['n'] for row in report['result']['schedule']] == [50, 100]
    assert report['config']['parameters']['preset'] == 'subcritical'


def test_validate_alias_writes_qq_table(tmp_path):
    out = tmp_path / 'qq.json'
    plot = tmp_path / 'qq.html'
    assert cli.run(['validate', '--preset', 'fig-c1-qq', '--replicates', '20',
                    '--set', 'n=100', '--seed', '0', '--out', str(out), '--plot', str(plot)]) == 0
    qq = pd.read_csv(tmp_path / 'qq.qq.tsv', sep='\t')
    assert list(qq.columns) == ['probability', 'theoretical', 'empirical']
    assert len(qq) == 20
    assert plot.exists()


def test_validate_rejects_unknown_override(capsys):
    assert cli.run(['validate', '--preset', 'level', '--set', 'colour=red', '--seed', '0']) == 1


def test_explicit_zero_values_are_recorded():
    args = cli.build_parser().parse_args(['validate', '--preset', 'level', '--alpha', '0',
                                          '--replicates', '0', '--seed', '1'])
    config = cli._run_config(args)
    assert config.alpha == 0.0
    assert config.replicates == 0
    defaults = cli._run_config(cli.build_parser().parse_args(['validate', '--preset', 'level']))
    assert defaults.alpha == 0.1
