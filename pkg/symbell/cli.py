"""Command line front end: ``symbell <command> [options]``.

Results go to stdout (``--json`` for a machine-readable form), diagnostics
to stderr. Exit codes: 0 success, 1 bad input, 2 a recomputed value
disagrees with the expected one, 3 a cost budget was exceeded.
"""
import argparse
import json
import logging
import os
import sys
from dataclasses import replace

from symbell.cache import RunCache, cache_key
from symbell.config import config_hash, load_settings
from symbell.derived import V_LOW, activation_check, critical_efficiency, xy_lower_bound
from symbell.errors import BudgetExceededError, SymbellError, VerificationError
from symbell.fwsolver import UNCERTIFIED, visibility_search
from symbell.inequality_file import InequalityFile
from symbell.localbound import brute_force_local_bound, exact_local_bound
from symbell.lucas4 import lij_table, visibility_m4
from symbell.necklaces import enumerate_necklaces, necklace_count
from symbell.reproduce import DEFAULT_MAX_COST, TABLES, load_table, reproduce_table
from symbell.symcorr import ScenarioParams, validate_class_weights
from symbell.sympoly import enumerate_facets, enumerate_sym_vertices
from symbell.version import version

logger = logging.getLogger('symbell')

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISMATCH = 2
EXIT_BUDGET = 3


def _emit(args, text, doc):
    if args.json:
        print(json.dumps(doc, sort_keys=True))
    else:
        print(text, end='' if text.endswith('\n') else '\n')


def _settings(args):
    settings = load_settings(args.config)
    fw, bound, cache = settings.fw, settings.bound, settings.cache
    if args.lmo is not None:
        fw = replace(fw, lmo_mode=args.lmo)
    if args.seed is not None:
        fw = replace(fw, seed=args.seed)
    bound = replace(bound, n_jobs=args.threads, progress=args.progress or bound.progress)
    if args.cache:
        cache = replace(cache, enabled=True)
    return replace(settings, fw=fw, bound=bound, cache=cache)


def cmd_visibility(args):
    params = ScenarioParams(args.N, args.m)
    settings = _settings(args)
    digest = config_hash(settings)
    cache = RunCache(settings.cache)
    key = cache_key('visibility', (params.n_parties, params.n_inputs), digest)
    stored = cache.load(key)
    if stored is not None:
        ineq = InequalityFile.loads(stored['ineq'])
    else:
        cert, model = visibility_search(params, settings.fw, settings.bound)
        ineq = InequalityFile.from_certificate(cert, settings.fw.seed, digest)
        logger.info("local model: v=%.10f over %d vertices, residual %.3e",
                    model.visibility, len(model.atoms), model.residual)
        if cert.certified != UNCERTIFIED:
            cache.store(key, {'ineq': ineq.dumps()})
    if ineq.certified == UNCERTIFIED:
        logger.warning("no certified facet for %s, reporting the last separating direction", params)
    if args.output:
        ineq.write(args.output)
    _emit(args, ineq.dumps(), json.loads(ineq.to_json()))
    return EXIT_OK


def cmd_local_bound(args):
    settings = _settings(args)
    ineq = InequalityFile.read(args.input)
    f = ineq.functional()
    result = exact_local_bound(f, settings.bound)
    doc = {'L': str(result.bound), 'witness': [str(s) for s in result.witness],
           'evaluated': result.evaluated}
    if args.brute_force:
        brute = brute_force_local_bound(f)
        doc['brute_force'] = str(brute)
        if brute != result.bound:
            raise VerificationError("orbit enumeration gives {} but brute force gives {}".format(
                result.bound, brute))
    if result.bound != ineq.local_bound:
        raise VerificationError("{} records L={} but the exact bound is {}".format(
            args.input, ineq.local_bound, result.bound))
    _emit(args, "L = {}\nwitness = {}".format(result.bound, ' | '.join(doc['witness'])), doc)
    return EXIT_OK


def cmd_vertices(args):
    settings = _settings(args)
    vset = enumerate_sym_vertices(ScenarioParams(args.N, args.m), n_jobs=settings.bound.n_jobs)
    lines = [str(v) for v in vset] + ["# {} vertices".format(len(vset))]
    _emit(args, '\n'.join(lines), {'count': len(vset), 'vertices': [str(v) for v in vset]})
    return EXIT_OK


def cmd_facets(args):
    settings = _settings(args)
    vset = enumerate_sym_vertices(ScenarioParams(args.N, args.m), n_jobs=settings.bound.n_jobs)
    facets = enumerate_facets(vset)
    lines = ["{} <= {}".format(f, L) for f, L in facets]
    lines.append("# {} facets, cross-polytope: {}".format(len(facets), facets.cross_polytope))
    doc = {'facets': [{'coeffs': list(f.integers()), 'L': str(L)} for f, L in facets],
           'cross_polytope': facets.cross_polytope}
    _emit(args, '\n'.join(lines), doc)
    return EXIT_OK


def cmd_necklaces(args):
    necklaces = enumerate_necklaces(args.m)
    count = necklace_count(args.m)
    if len(necklaces) != count:
        raise VerificationError("enumerated {} orbits but u_{} = {}".format(len(necklaces), args.m, count))
    reps = [str(n.rep) for n in necklaces]
    _emit(args, '\n'.join(reps + ["u_{} = {}".format(args.m, count)]), {'m': args.m, 'count': count,
                                                                        'representatives': reps})
    return EXIT_OK


def cmd_m4(args):
    if args.parties is not None:
        vis = visibility_m4(args.parties)
        doc = {'N': vis.n_parties, 'L': vis.local_bound, 'Q': vis.quantum_value, 'v_exact': vis.expression,
               'v': vis.value}
        _emit(args, "L = {}\nQ = {}\nv = {} = {:.5f}".format(vis.local_bound, vis.quantum_value,
                                                               vis.expression, vis.value), doc)
        return EXIT_OK
    table = lij_table(args.table)
    lines = [' '.join('{:>8}'.format(table[i, j]) for j in range(args.table)) for i in range(args.table)]
    rows = [[table[i, j] for j in range(args.table)] for i in range(args.table)]
    _emit(args, '\n'.join(lines), {'L': rows})
    return EXIT_OK


def cmd_efficiency(args):
    result = critical_efficiency(args.visibility, args.N)
    _emit(args, "eta_crit = {:.6f}".format(result.eta_crit),
          {'eta_crit': result.eta_crit, 'residual': result.residual})
    return EXIT_OK


def cmd_xy_bound(args):
    if args.input:
        ineq = InequalityFile.read(args.input)
        v, m, n = ineq.visibility, ineq.n_inputs, ineq.n_parties
    elif args.visibility is None or args.m is None or args.N is None:
        raise ValueError("xy-bound needs -v, -m and -N, or an inequality file")
    else:
        v, m, n = args.visibility, args.m, args.N
    bound = xy_lower_bound(v, m, n)
    _emit(args, "v_XY >= {:.6f}".format(bound), {'v_m': v, 'm': m, 'N': n, 'v_xy': bound})
    return EXIT_OK


def cmd_activation(args):
    report = activation_check(args.visibility, args.N, args.vlow)
    doc = {'v_m': report.v_m, 'N': report.n_parties, 'v_low': report.v_low, 'threshold': report.threshold,
           'activated': report.activated, 'margin': report.margin,
           'asymptotic_check': report.asymptotic_check}
    _emit(args, "v_low^N = {:.5f}, activated: {}".format(report.threshold, report.activated), doc)
    return EXIT_OK


def cmd_reproduce(args):
    settings = _settings(args)
    report = reproduce_table(args.table, args.max_cost, settings.fw, settings.bound)
    doc = {'table': report.name, 'passed': report.passed,
           'rows': [{'cell': r.key, 'expected': r.expected, 'computed': r.computed, 'status': r.status}
                    for r in report.rows]}
    _emit(args, report.format(), doc)
    report.check()
    return EXIT_OK


def cmd_plot(args):
    # matplotlib and its backend are only set up when a plot is asked for
    from symbell.plotting import plot_polytope, plot_visibilities
    if args.kind == 'polytope':
        filename = plot_polytope(ScenarioParams(args.N, args.m), args.output)
    else:
        filename = plot_visibilities(load_table('V'), args.output)
    _emit(args, filename, {'filename': filename})
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help="Print results as JSON.")
    common.add_argument('--threads', type=int, default=os.cpu_count() or 1,
                        help="Worker processes (default: all cores; 1 is the serial reference run).")
    common.add_argument('--config', default=None, help="INI file with [fw], [localbound], [cache] sections.")
    common.add_argument('--cache', action='store_true', help="Reuse and store results in the run cache.")
    common.add_argument('--progress', action='store_true', help="Show progress bars on stderr.")
    common.add_argument('--seed', type=int, default=None, help="Seed of the heuristic restarts.")
    common.add_argument('--lmo', choices=('exact', 'heuristic', 'auto'), default=None,
                        help="Linear minimisation oracle.")

    parser = argparse.ArgumentParser(prog='symbell',
                                     description='Symmetric Bell inequalities for the GHZ state.')
    parser.add_argument('-v', '--verbose', action='count', default=0, help="-v for INFO, -vv for DEBUG.")
    parser.add_argument('--version', action='version', version='%(prog)s {}'.format(version))
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    def add(name, func, text):
        p = sub.add_parser(name, parents=[common], help=text, description=text)
        p.set_defaults(func=func)
        return p

    p = add('visibility', cmd_visibility, "Visibility of the GHZ state and its certified facet.")
    p.add_argument('-N', type=int, required=True, help="Number of parties.")
    p.add_argument('-m', type=int, required=True, help="Number of inputs per party.")
    p.add_argument('-o', '--output', default=None, help="Write the inequality file here.")

    p = add('local-bound', cmd_local_bound, "Recompute the local bound of an inequality file.")
    p.add_argument('-i', '--input', required=True, help="Inequality file.")
    p.add_argument('--brute-force', action='store_true', help="Cross-check against full enumeration.")

    for name, func, text in (('vertices', cmd_vertices, "Symmetrised vertices."),
                             ('facets', cmd_facets, "Facets of the symmetrised polytope.")):
        p = add(name, func, text)
        p.add_argument('-N', type=int, required=True, help="Number of parties.")
        p.add_argument('-m', type=int, required=True, help="Number of inputs per party.")

    p = add('necklaces', cmd_necklaces, "Strategy orbit representatives.")
    p.add_argument('-m', type=int, required=True, help="Number of inputs per party.")

    p = add('m4', cmd_m4, "Closed forms for four inputs.")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument('--parties', type=int, help="Local bound and visibility for N parties.")
    group.add_argument('--table', type=int, help="Print L_ij for i, j below this size.")

    p = add('efficiency', cmd_efficiency, "Critical detection efficiency.")
    p.add_argument('-v', dest='visibility', type=float, required=True, help="Visibility.")
    p.add_argument('-N', type=int, required=True, help="Number of parties.")

    p = add('xy-bound', cmd_xy_bound, "Visibility bound for measurements in the XY plane.")
    p.add_argument('-v', dest='visibility', type=float, default=None, help="Visibility for m inputs.")
    p.add_argument('-m', type=int, default=None, help="Number of inputs per party.")
    p.add_argument('-N', type=int, default=None, help="Number of parties.")
    p.add_argument('-i', '--input', default=None, help="Take v, m and N from an inequality file.")

    p = add('activation', cmd_activation, "Nonlocality activation in star networks.")
    p.add_argument('-v', dest='visibility', type=float, required=True, help="Visibility.")
    p.add_argument('-N', type=int, required=True, help="Number of parties.")
    p.add_argument('--vlow', type=float, default=V_LOW, help="Two-qubit locality threshold.")

    p = add('reproduce', cmd_reproduce, "Recompute a published table and diff it.")
    p.add_argument('--table', choices=TABLES, required=True, help="Table name.")
    p.add_argument('--max-cost', type=int, default=DEFAULT_MAX_COST,
                   help="Skip cells costing more than this.")

    p = add('plot', cmd_plot, "Draw a polytope or the visibility table.")
    p.add_argument('kind', choices=('polytope', 'visibilities'), help="What to draw.")
    p.add_argument('-N', type=int, default=2, help="Number of parties.")
    p.add_argument('-m', type=int, default=3, help="Number of inputs per party.")
    p.add_argument('-o', '--output', required=True, help="Output image.")
    return parser


def setup_logging(verbosity):
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s :: %(asctime)s :: %(name)s :: %(message)s",
                        datefmt="%Y-%m-%d %H:%M:%S")


def main(argv=None):
    """Run one command and return its exit code."""
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        validate_class_weights()
        return args.func(args)
    except VerificationError as err:
        logger.error("verification failed: %s", err)
        return EXIT_MISMATCH
    except BudgetExceededError as err:
        logger.error("%s", err)
        return EXIT_BUDGET
    except (SymbellError, ValueError, OSError) as err:
        logger.error("%s", err)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
