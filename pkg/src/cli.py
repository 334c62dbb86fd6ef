"""
Command-line entry point

Every subcommand reads its inputs, runs one pipeline and writes a JSON report
(plus tab-separated tables) to --out; a short summary goes to standard output.
Exit status is 0 on success, 1 on a user error and 2 on an internal failure.
"""
import argparse
import json
import logging
import sys
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .analyzers import AnalysisResult, create_analyzer
from .counting.census import census
from .counting.overlap import gluing_dominance, inductive_coefficients, overlap_set, verify_product_identity
from .exporters.excel_exporter import export_to_excel
from .exporters.report_exporter import build_report, emit_report
from .fixtures.sample_data import three_block_kernel
from .inference.blockmodel_fit import fit_blockmodel
from .models.kernel import LATENT_MODES, SampleSpec, sample_graph
from .models.moments import density_summary, moment_vector
from .parsers.covariate_parser import CovariateParser
from .parsers.edge_list_parser import EdgeListParser, write_edge_list
from .parsers.kernel_parser import load_kernel
from .parsers.motif_parser import parse_motifs
from .utils.config import (DEFAULT_ALPHA, DEFAULT_BOOTSTRAP_REPLICATES, DEFAULT_CRITICAL_REPLICATES,
                           DEFAULT_MOTIFS, DEFAULT_RHO_EXPONENT, RunConfig)
from .utils.errors import InputError, InvariantViolation, RootedDensityError
from .utils.motif_utils import epsilon_parameter
from .visualizers.qq_visualizer import StatisticVisualizer, write_figure

logger = logging.getLogger(__name__)

# Named experiment presets: analyzer name and parameter overrides.
PRESETS: Dict[str, Tuple[str, Dict]] = {
    'vertex-qq': ('vertex-clt', {'n': 5000, 'rho_exponent': DEFAULT_RHO_EXPONENT, 'replicates': 200,
                                 'motifs': 'triangle,square'}),
    'level': ('level-power', {'n': 200, 'pipelines': 200, 'perturb': False, 'alpha': DEFAULT_ALPHA}),
    'power': ('level-power', {'n': 200, 'pipelines': 100, 'perturb': True, 'alpha': DEFAULT_ALPHA}),
    'subcritical': ('subcritical', {'motifs': 'triangle', 'rho_exponent': 0.8,
                                    'schedule': '500,1000,2000,4000', 'replicates': 200}),
    'avg-clt': ('average-clt', {'n': 4000, 'replicates': 500, 'motifs': 'triangle',
                                'function': 'identity'}),
}
PRESET_ALIASES = {'fig-c1-qq': 'vertex-qq'}

EXIT_OK = 0
EXIT_USER_ERROR = 1
EXIT_INTERNAL = 2


class UsageError(InputError):
    """Bad command line"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument('--seed', type=int, default=None, help='Base seed (generated and printed if absent)')
    common.add_argument('--workers', type=int, default=1, help='Worker processes')
    common.add_argument('--out', type=str, default=None, help='JSON report path')
    common.add_argument('--xlsx', type=str, default=None, help='Also write an Excel workbook')
    common.add_argument('--plot', type=str, default=None, help='Also write an HTML figure')
    common.add_argument('--progress', action='store_true', help='Show progress bars')
    common.add_argument('-v', '--verbose', action='count', default=0, help='More logging (-vv for debug)')

    parser = _Parser(prog='rooted-density', description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest='subcommand', parser_class=_Parser)

    p = sub.add_parser('census', parents=[common], help='Per-vertex rooted counts and densities')
    p.add_argument('--graph', required=True)
    p.add_argument('--motifs', default=DEFAULT_MOTIFS)
    p.add_argument('--rho', type=float, default=None, help='Known sparsity instead of rho_hat')

    p = sub.add_parser('overlap', parents=[common], help='Overlap set and c_H coefficients of two motifs')
    p.add_argument('--motifs', required=True, help='Exactly two motifs, e.g. triangle,cherry')
    p.add_argument('--method', choices=('direct', 'inductive', 'both'), default='both')

    p = sub.add_parser('verify-identity', parents=[common], help='Check the product identity on a graph')
    p.add_argument('--graph', required=True)
    p.add_argument('--motifs', required=True, help='Exactly two motifs')
    p.add_argument('--vertex', type=int, action='append', default=None, help='Vertex (repeatable)')

    p = sub.add_parser('simulate', parents=[common], help='Sample a graph from a blockmodel')
    p.add_argument('--kernel', default=None, help='Kernel JSON (default: three equal blocks)')
    p.add_argument('--n', type=int, required=True)
    _add_rho(p)
    p.add_argument('--latent-mode', choices=LATENT_MODES, default='sample-uniform')
    p.add_argument('--edges', default=None, help='Edge-list output path')

    p = sub.add_parser('moments', parents=[common], help='Exact means and covariances of rooted counts')
    p.add_argument('--kernel', default=None)
    p.add_argument('--motifs', default=DEFAULT_MOTIFS)
    p.add_argument('--n', type=int, required=True)
    _add_rho(p)
    p.add_argument('--leading', action='store_true', help='Leading-order covariance only')

    p = sub.add_parser('fit', parents=[common], help='Fit a blockmodel by Louvain and AIC')
    p.add_argument('--graph', required=True)
    p.add_argument('--no-scan', action='store_true', help='Keep the Louvain blocks')

    p = sub.add_parser('gof', parents=[common], help='Vertex-level goodness-of-fit test')
    p.add_argument('--graph', required=True)
    p.add_argument('--motifs', default=DEFAULT_MOTIFS)
    p.add_argument('--alpha', type=float, default=DEFAULT_ALPHA)
    p.add_argument('--replicates', type=int, default=DEFAULT_BOOTSTRAP_REPLICATES)
    p.add_argument('--critical-replicates', type=int, default=DEFAULT_CRITICAL_REPLICATES)
    p.add_argument('--pooled', action='store_true')
    p.add_argument('--no-scan', action='store_true')

    p = sub.add_parser('regress', parents=[common], help='Logistic regression of labels on densities')
    p.add_argument('--graph', required=True)
    p.add_argument('--covariates', required=True)
    p.add_argument('--motifs', default='triangle')
    p.add_argument('--extra', default='', help='Covariate columns (default: all)')
    p.add_argument('--alpha', type=float, default=0.05)

    p = sub.add_parser('validate', parents=[common], help='Run a named Monte Carlo experiment')
    p.add_argument('--preset', required=True, choices=sorted([*PRESETS, *PRESET_ALIASES]))
    p.add_argument('--kernel', default=None)
    p.add_argument('--motifs', default=None)
    p.add_argument('--replicates', type=int, default=None)
    p.add_argument('--alpha', type=float, default=None)
    p.add_argument('--set', dest='overrides', action='append', default=[], metavar='KEY=VALUE',
                   help='Override a preset parameter (repeatable)')
    return parser


def _add_rho(p: argparse.ArgumentParser):
    group = p.add_mutually_exclusive_group()
    group.add_argument('--rho', type=float, default=None)
    group.add_argument('--rho-exponent', type=float, default=None, help='rho = n^-a')


def _rho(args) -> float:
    if args.rho is not None:
        return args.rho
    exponent = DEFAULT_RHO_EXPONENT if args.rho_exponent is None else args.rho_exponent
    return float(args.n) ** (-exponent)


def _kernel(path: Optional[str]):
    return three_block_kernel() if path is None else load_kernel(path)


def _two_motifs(argument: str):
    motifs = parse_motifs(argument)
    if len(motifs) != 2:
        raise InputError(f"expected exactly two motifs, got {len(motifs)}")
    return motifs


def _read_graph(path: str):
    parser = EdgeListParser()
    graph = parser.parse(path)
    return graph, parser


def _parse_overrides(items: Sequence[str]) -> Dict[str, str]:
    overrides = {}
    for item in items:
        key, sep, value = item.partition('=')
        if not sep or not key.strip():
            raise UsageError(f"--set expects KEY=VALUE, got {item!r}")
        overrides[key.strip().replace('-', '_')] = value.strip()
    return overrides


# Subcommand handlers: each returns an AnalysisResult and the resolved parameters.

def cmd_census(args) -> Tuple[AnalysisResult, Dict]:
    graph, parser = _read_graph(args.graph)
    motifs = parse_motifs(args.motifs)
    densities = census(graph, motifs, workers=args.workers, rho=args.rho)
    table = densities.to_dataframe()
    if parser.vertex_ids:
        table.insert(1, 'original_id', parser.original_ids())
    result = AnalysisResult('census')
    result.payload = {**densities.summary(), 'vertices': table.to_dict(orient='records')}
    result.detailed_report = table
    result.metadata = {'n': graph.n, 'edges': graph.edge_count, 'rho': densities.rho}
    result.summary = (f"census of {graph.n} vertices, {graph.edge_count} edges, "
                      f"motifs {', '.join(densities.labels)} (rho = {densities.rho:.6g})")
    return result, {'motifs': densities.labels, 'rho': args.rho}


def cmd_overlap(args) -> Tuple[AnalysisResult, Dict]:
    f1, f2 = _two_motifs(args.motifs)
    sets = {}
    if args.method in ('direct', 'both'):
        sets['direct'] = overlap_set(f1, f2)
    if args.method in ('inductive', 'both'):
        sets['inductive'] = inductive_coefficients(f1, f2)
    if len(sets) == 2 and sets['direct'].coefficients() != sets['inductive'].coefficients():
        raise InvariantViolation(f"direct and inductive overlap coefficients differ for "
                                 f"{f1.label} x {f2.label}")
    primary = next(iter(sets.values()))
    result = AnalysisResult('overlap')
    result.payload = {method: s.to_dict() for method, s in sets.items()}
    result.payload['agree'] = len(sets) == 2
    result.detailed_report = _overlap_table(primary)
    result.summary = (f"{f1.label} x {f2.label}: {len(primary)} overlap graphs; "
                      + ', '.join(f"{h.label}:{c}" for h, c in primary.entries))
    return result, {'motifs': [f1.label, f2.label], 'method': args.method}


def _overlap_table(overlap):
    return pd.DataFrame([{'motif': h.label, 'order': h.order, 'edges': h.edge_count, 'c': c}
                         for h, c in overlap.entries])


def cmd_verify_identity(args) -> Tuple[AnalysisResult, Dict]:
    graph, _ = _read_graph(args.graph)
    f1, f2 = _two_motifs(args.motifs)
    overlap = overlap_set(f1, f2)
    vertices = args.vertex if args.vertex else range(graph.n)
    checks = []
    for v in vertices:
        if not 0 <= v < graph.n:
            raise InputError(f"vertex {v} out of range for n={graph.n}")
        check = verify_product_identity(graph, v, f1, f2, overlap)
        check['gluing_dominance'] = gluing_dominance(graph, v, f1, f2, overlap)
        checks.append(check)
    failed = [c['vertex'] for c in checks if not c['equal']]
    if failed:
        raise InvariantViolation(f"product identity fails at vertices {failed[:10]}")
    result = AnalysisResult('verify-identity')
    result.payload = {'checks': checks, 'all_equal': True}
    result.detailed_report = pd.DataFrame([{k: c[k] for k in ('vertex', 'lhs', 'rhs', 'equal',
                                                               'gluing_dominance')} for c in checks])
    result.summary = f"product identity holds at all {len(checks)} vertices for {f1.label} x {f2.label}"
    return result, {'motifs': [f1.label, f2.label]}


def cmd_simulate(args) -> Tuple[AnalysisResult, Dict]:
    kernel = _kernel(args.kernel)
    spec = SampleSpec(args.n, _rho(args), args.seed, latent_mode=args.latent_mode)
    graph, latents = sample_graph(kernel, spec, workers=args.workers)
    result = AnalysisResult('simulate')
    result.payload = {'spec': spec.to_dict(), 'kernel': kernel.to_dict(), 'graph': graph.summary(),
                      'latents': latents.to_rows()}
    result.detailed_report = pd.DataFrame(latents.to_rows(), columns=['vertex', 'x', 'block'])
    if args.edges:
        write_edge_list(graph, args.edges)
        result.payload['edges_path'] = args.edges
    result.summary = (f"sampled n={graph.n} with {graph.edge_count} edges "
                      f"(rho = {spec.rho:.6g}, k = {kernel.k})")
    return result, {'kernel': kernel.to_dict(), 'n': args.n, 'rho': spec.rho}


def cmd_moments(args) -> Tuple[AnalysisResult, Dict]:
    kernel = _kernel(args.kernel)
    motifs = parse_motifs(args.motifs)
    rho = _rho(args)
    rows = density_summary(kernel, motifs, args.n, rho)
    blocks = []
    for b in range(kernel.k):
        mean, cov = moment_vector(kernel, motifs, b, args.n, rho, exact=not args.leading)
        blocks.append({'block': b, 'mean': mean.tolist(), 'covariance': cov.tolist()})
    result = AnalysisResult('moments')
    result.payload = {
        'motifs': [m.to_dict() for m in motifs],
        'epsilon': {m.label: epsilon_parameter(m, args.n, rho) for m in motifs},
        'blocks': blocks,
        'table': rows,
    }
    result.detailed_report = pd.DataFrame(rows)
    result.summary = (f"exact moments for {', '.join(m.label for m in motifs)} at n={args.n}, "
                      f"rho={rho:.6g} over {kernel.k} blocks")
    return result, {'kernel': kernel.to_dict(), 'n': args.n, 'rho': rho, 'exact': not args.leading}


def cmd_fit(args) -> Tuple[AnalysisResult, Dict]:
    graph, _ = _read_graph(args.graph)
    fit = fit_blockmodel(graph, seed=args.seed, scan=not args.no_scan)
    result = AnalysisResult('fit')
    result.payload = {**fit.to_dict(), 'assignment': fit.assignment.tolist()}
    result.detailed_report = pd.DataFrame({'vertex_id': np.arange(graph.n), 'block': fit.assignment})
    result.summary = f"k = {fit.k} blocks (Louvain {fit.louvain_k}), AIC {fit.aic:.2f}"
    return result, {'scan': not args.no_scan}


def cmd_gof(args) -> Tuple[AnalysisResult, Dict]:
    graph, _ = _read_graph(args.graph)
    params = {'motifs': args.motifs, 'alpha': args.alpha, 'replicates': args.replicates,
              'critical_replicates': args.critical_replicates, 'pooled': args.pooled,
              'scan': not args.no_scan, 'seed': args.seed, 'workers': args.workers}
    result = create_analyzer('gof').run(graph=graph, progress=args.progress, **params)
    if args.plot:
        gof = result.artifact
        labels = [f't_{label}' for label in gof.densities.labels]
        write_figure(StatisticVisualizer().create_statistic_scatter(
            gof.t_hat, gof.critical_value, gof.bonferroni_value, labels), args.plot)
    return result, params


def cmd_regress(args) -> Tuple[AnalysisResult, Dict]:
    graph, parser = _read_graph(args.graph)
    covariates = CovariateParser(parser.vertex_ids).parse(args.covariates)
    params = {'motifs': args.motifs, 'extra': args.extra, 'alpha': args.alpha, 'workers': args.workers}
    result = create_analyzer('regress').run(graph=graph, covariates=covariates, **params)
    return result, params


def cmd_validate(args) -> Tuple[AnalysisResult, Dict]:
    preset = PRESET_ALIASES.get(args.preset, args.preset)
    analyzer_name, defaults = PRESETS[preset]
    params = dict(defaults)
    for key in ('motifs', 'replicates', 'alpha'):
        if getattr(args, key) is not None:
            params[key] = getattr(args, key)
    params.update(_parse_overrides(args.overrides))
    params.update(seed=args.seed, workers=args.workers)
    analyzer = create_analyzer(analyzer_name)
    known = {q['key'] for q in analyzer.get_questions()}
    unknown = sorted(set(params) - known)
    if unknown:
        raise UsageError(f"preset {preset} does not take parameter(s): {', '.join(unknown)}")
    kernel = _kernel(args.kernel)
    result = analyzer.run(kernel=kernel, progress=args.progress, **params)
    if args.plot and analyzer_name == 'vertex-clt':
        report = result.artifact
        write_figure(StatisticVisualizer().create_qq_plot(report.qq, report.d), args.plot)
    return result, {'preset': preset, 'analyzer': analyzer_name, 'kernel': kernel.to_dict(), **params}


HANDLERS = {
    'census': cmd_census,
    'overlap': cmd_overlap,
    'verify-identity': cmd_verify_identity,
    'simulate': cmd_simulate,
    'moments': cmd_moments,
    'fit': cmd_fit,
    'gof': cmd_gof,
    'regress': cmd_regress,
    'validate': cmd_validate,
}


def _configure_logging(verbosity: int):
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)
    logging.captureWarnings(True)


def _given(args, name: str, default):
    value = getattr(args, name, None)
    return default if value is None else value


def _run_config(args) -> RunConfig:
    return RunConfig(
        subcommand=args.subcommand,
        graph=getattr(args, 'graph', None),
        motifs=getattr(args, 'motifs', None) or DEFAULT_MOTIFS,
        kernel=getattr(args, 'kernel', None),
        covariates=getattr(args, 'covariates', None),
        alpha=_given(args, 'alpha', DEFAULT_ALPHA),
        replicates=_given(args, 'replicates', DEFAULT_BOOTSTRAP_REPLICATES),
        critical_replicates=_given(args, 'critical_replicates', DEFAULT_CRITICAL_REPLICATES),
        seed=args.seed,
        workers=args.workers,
        out=args.out,
        preset=getattr(args, 'preset', None),
        overrides=_parse_overrides(getattr(args, 'overrides', [])),
    )


def run(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        Exit status: 0 success, 1 user error, 2 internal failure
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.subcommand is None:
            parser.print_help(sys.stderr)
            return EXIT_USER_ERROR
        _configure_logging(args.verbose)
        config = _run_config(args)
        if args.seed is None:
            args.seed = config.ensure_seed()
            print(f"seed: {args.seed}")

        result, params = HANDLERS[args.subcommand](args)

        provenance = {**config.to_dict(), 'parameters': params}
        print(result.summary)
        for recommendation in result.recommendations:
            print(f"  - {recommendation}")
        if args.out:
            emit_report(result, args.out, provenance)
        else:
            print(json.dumps(build_report(result, provenance), indent=2))
        if args.xlsx:
            export_to_excel(result, args.xlsx)
    except InvariantViolation as e:
        logger.error("internal invariant violated: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except (RootedDensityError, FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USER_ERROR
    except SystemExit as e:
        # --help
        return EXIT_OK if not e.code else EXIT_USER_ERROR
    except Exception:
        logger.exception("unexpected failure")
        return EXIT_INTERNAL
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
