"""Command line interface.

   Run as ``credalvol SUBCOMMAND [options]`` (or
   ``python -m credalvol.cli``). Each subcommand reads its settings into a
   :class:`RunConfig`, calls into the library, and writes JSON (or CSV for
   curves and sweeps) to standard output or the ``--out`` file. The
   resolved configuration is echoed into every output.

   Exit status is 0 on success, 1 for bad input or usage, and 2 for a
   numerical failure.
"""

import argparse
import contextlib
import json
import os
import sys
import warnings
import credalvol
import credalvol.axioms
import credalvol.experiments
import credalvol.format
import credalvol.lift
import credalvol.measures
import credalvol.packing
import credalvol.schema
import credalvol.volume
from credalvol.util import _get_relative_path, _parse_range, _parse_floats

#: Environment variable used if --threads is not given.
THREADS_ENV = 'CREDALVOL_THREADS'

#: Default values of the overridable tolerances.
DEFAULT_TOLERANCES = {
    'sum': credalvol.TOL_SUM, 'dedupe': credalvol.TOL_DEDUPE,
    'rank': credalvol.TOL_RANK, 'contains': credalvol.TOL_CONTAINS,
    'max_entropy': 1e-6, 'axiom': 1e-12, 'isometry': 1e-10,
    'additivity': 1e-10}

# Tolerances that map onto package-wide constants
_GLOBAL_TOLERANCES = {'sum': 'TOL_SUM', 'dedupe': 'TOL_DEDUPE',
                      'rank': 'TOL_RANK', 'contains': 'TOL_CONTAINS'}

_PACKING_COLUMNS = [f for f in credalvol.packing.Theorem1Report._fields
                    if not f.startswith('certificate')]
_CARL_PAJOR_COLUMNS = ['d', 'm', 'samples', 'ratio', 'stderr',
                       'exact_ratio', 'bound', 'within_bound']
_CONTINUITY_COLUMNS = ['n', 'h', 'vol2', 'vol1', 'width']


class UnknownSubcommandError(ValueError):
    """Exception raised for a subcommand name that is not recognized"""
    pass


class UsageError(ValueError):
    """Exception raised for bad command line arguments"""
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("%s%s" % (self.format_usage(), message))


class RunConfig(object):
    """Fully resolved settings for one command line run.

       Values come from (lowest to highest precedence) the built-in
       defaults, a JSON config file, the :data:`THREADS_ENV` environment
       variable, and command line flags.

       :param str subcommand: The subcommand being run.
       :param str input: Input file name, if any.
       :param str out: Output file name, or None for standard output.
       :param int seed: Random seed.
       :param int samples: Number of Monte Carlo samples.
       :param int threads: Maximum number of worker threads.
       :param str format: Output format, 'json' or 'csv'.
       :param dict tolerances: Overrides of :data:`DEFAULT_TOLERANCES`.
    """
    _fields = ('subcommand', 'input', 'out', 'seed', 'samples', 'threads',
               'format', 'tolerances')

    def __init__(self, subcommand, input=None, out=None, seed=0,
                 samples=100000, threads=None, format='json',
                 tolerances=None):
        self.subcommand, self.input, self.out = subcommand, input, out
        self.seed, self.samples = int(seed), int(samples)
        self.threads = None if threads is None else int(threads)
        if self.threads is not None and self.threads < 1:
            raise ValueError("Need at least one thread, not %d"
                             % self.threads)
        if format not in ('json', 'csv'):
            raise ValueError("Invalid output format %s; valid values are "
                             "json, csv" % repr(format))
        self.format = format
        self.tolerances = dict(DEFAULT_TOLERANCES)
        for key, value in (tolerances or {}).items():
            if key not in DEFAULT_TOLERANCES:
                raise ValueError(
                    "Unknown tolerance %s; valid names are %s"
                    % (repr(key), ", ".join(sorted(DEFAULT_TOLERANCES))))
            self.tolerances[key] = float(value)

    @classmethod
    def resolve(cls, args, environ=None, default_format='json'):
        """Build the configuration from parsed arguments.

           :param args: Namespace from the command line parser.
           :param dict environ: Environment (default `os.environ`).
           :param str default_format: Format used if neither the config
                  file nor the command line name one.
        """
        if environ is None:
            environ = os.environ
        values = {'format': default_format}
        tolerances = {}
        if args.config:
            fvalues = _read_config_file(args.config)
            tolerances.update(fvalues.pop('tolerances', {}))
            values.update(fvalues)
        if environ.get(THREADS_ENV):
            try:
                values['threads'] = int(environ[THREADS_ENV])
            except ValueError:
                raise ValueError("%s must be an integer, not %s"
                                 % (THREADS_ENV, repr(environ[THREADS_ENV])))
        for field in cls._fields[1:-1]:
            flag = getattr(args, field, None)
            if flag is not None:
                values[field] = flag
        for text in args.tolerance or []:
            name, sep, value = text.partition('=')
            if not sep:
                raise UsageError("Tolerance %s should be NAME=VALUE"
                                 % repr(text))
            try:
                tolerances[name] = float(value)
            except ValueError:
                raise UsageError("Invalid tolerance value %s" % repr(value))
        return cls(args.subcommand, tolerances=tolerances, **values)

    def as_dict(self):
        """Return the configuration as a JSON-compatible dict"""
        return dict((f, getattr(self, f)) for f in self._fields)

    def axiom_config(self):
        """Return the :class:`credalvol.axioms.AxiomConfig` to use"""
        tols = self.tolerances
        return credalvol.axioms.AxiomConfig(
            tol=tols['axiom'], isometry_tol=tols['isometry'],
            additivity_tol=tols['additivity'], seed=self.seed)


def _read_config_file(fname):
    """Read RunConfig values from a JSON file. Relative file names in it
       are taken relative to the file itself."""
    with open(fname) as fh:
        try:
            data = json.load(fh)
        except ValueError as exc:
            raise ValueError("Invalid config file %s: %s" % (fname, exc))
    if not isinstance(data, dict):
        raise ValueError("Config file %s must hold a JSON object" % fname)
    unknown = set(data) - set(RunConfig._fields[1:])
    if unknown:
        raise ValueError("Unknown keys in config file %s: %s"
                         % (fname, ", ".join(sorted(unknown))))
    if not isinstance(data.get('tolerances', {}), dict):
        raise ValueError("'tolerances' in config file %s must be an object"
                         % fname)
    for key in ('input', 'out'):
        if data.get(key):
            data[key] = _get_relative_path(fname, data[key])
    return data


@contextlib.contextmanager
def _tolerances(tols):
    """Temporarily set the package-wide tolerance constants"""
    old = dict((attr, getattr(credalvol, attr))
               for attr in _GLOBAL_TOLERANCES.values())
    try:
        for key, attr in _GLOBAL_TOLERANCES.items():
            setattr(credalvol, attr, tols[key])
        yield
    finally:
        for attr, value in old.items():
            setattr(credalvol, attr, value)


class _Table(object):
    """Rows of a curve or sweep, written as CSV by default"""
    def __init__(self, columns, rows):
        self.columns, self.rows = list(columns), rows


def _write_output(result, config, fh):
    if isinstance(result, _Table) and config.format == 'csv':
        w = credalvol.format.CsvWriter(
            fh, result.columns,
            comment="config " + credalvol.format.dumps(config.as_dict()))
        for row in result.rows:
            w.write(row)
        return
    if isinstance(result, _Table):
        result = {'columns': result.columns, 'rows': result.rows}
    elif config.format == 'csv':
        raise UsageError("%s output is only available as json"
                         % config.subcommand)
    result = dict(result)
    result['config'] = config.as_dict()
    credalvol.format.JsonWriter(fh).write(result)


def _need(args, *names):
    for name in names:
        if getattr(args, name.replace('-', '_')) is None:
            raise UsageError("%s needs --%s" % (args.subcommand, name))


def _read_input(config):
    if config.input is None:
        raise UsageError("%s needs --input" % config.subcommand)
    return credalvol.format.read_credal_set_file(config.input)


def _run_volume(args, config):
    p = _read_input(config)
    if args.mc:
        v = credalvol.volume.volume_mc(p, config.samples, config.seed,
                                       config.threads)
    else:
        v = credalvol.volume.volume_exact(p)
    return {'k': v.k, 'value': v.value, 'stderr': v.stderr,
            'method': v.method}


def _run_measures(args, config):
    p = _read_input(config)
    return credalvol.measures.summarize(
        p, tol=config.tolerances['max_entropy'])


def _run_axioms(args, config):
    axconfig = config.axiom_config()
    if args.example == 'example1':
        _need(args, 'base', 'n')
        table = credalvol.axioms.continuity_counterexample(
            args.base, args.n, h=args.height, config=axconfig)
        rows = list(table.rows)
        rows.append({'n': 'limit', 'h': 0., 'vol2': table.limit['vol2'],
                     'vol1': table.limit['vol1'],
                     'width': table.limit['width']})
        # Triangle of height h against its base segment
        mono = table.monotonicity.witness
        rows.append({'n': 'a3', 'h': args.height, 'vol2': mono['outer'],
                     'vol1': mono['inner']})
        _report_failures([table.consistency, table.monotonicity])
        return _Table(_CONTINUITY_COLUMNS, rows)
    elif args.example == 'a3':
        _need(args, 'base')
        _, _, report = credalvol.axioms.a3_counterexample(
            args.base, args.height, axconfig)
        reports = [report]
    elif args.example == 'lift-continuity':
        _need(args, 'base', 'n')
        reports = [credalvol.axioms.lift_continuity_counterexample(
            args.base, args.n, axconfig)['report']]
    else:
        p = _read_input(config)
        q = None
        if args.nested:
            q = credalvol.format.read_credal_set_file(args.nested)
        reports = credalvol.axioms.check_axioms(p, q, args.measure, axconfig)
        if args.grouping:
            with open(args.grouping) as fh:
                grouping = credalvol.format.read_grouping(fh)
            reports.extend(credalvol.axioms.check_subadditivity(
                p, grouping, axconfig))
    _report_failures(reports)
    return {'reports': [r.as_dict() for r in reports]}


def _report_failures(reports):
    for r in reports:
        if r.verdict == 'fail':
            print("%s: fail" % r.axiom, file=sys.stderr)


def _run_packing(args, config):
    if args.sweep_d:
        reports = credalvol.packing.theorem1_sweep(
            _parse_range(args.sweep_d), _parse_floats(args.ratios), args.r,
            seed=config.seed, restarts=args.restarts,
            threads=config.threads, samples=config.samples)
        return _Table(_PACKING_COLUMNS, [r.as_dict() for r in reports])
    _need(args, 'd', 'eps')
    return credalvol.packing.theorem1_experiment(
        args.d, args.eps, args.r, seed=config.seed, restarts=args.restarts,
        threads=config.threads, samples=config.samples).as_dict()


def _run_carl_pajor(args, config):
    _need(args, 'm')

    def run(d):
        return credalvol.packing.carl_pajor_experiment(
            d, args.m, config.samples, config.seed, config.threads).as_dict()
    if args.sweep_d:
        return _Table(_CARL_PAJOR_COLUMNS,
                      [run(d) for d in _parse_range(args.sweep_d)])
    _need(args, 'd')
    return run(args.d)


def _run_lift(args, config):
    _need(args, 'target-d')
    p = _read_input(config)
    res = credalvol.lift.lift_probability_set(p, args.target_d,
                                              config.threads)
    return {'d': res.lifted.d, 'vertices': res.lifted.vertex_array,
            'V': res.spec.V, 'b': res.spec.b, 'gap': res.gap,
            'source_volume': res.source_volume,
            'lifted_volume': res.lifted_volume, 'params': list(res.params)}


def _run_idm_sim(args, config):
    _need(args, 'p', 'n')
    rows = credalvol.experiments.idm_curve(
        _parse_floats(args.p), args.n, s=args.s, seed=config.seed,
        tol=config.tolerances['max_entropy'])
    return _Table(credalvol.experiments.CURVE_COLUMNS, rows)


def _run_prior_shrinkage(args, config):
    _need(args, 'eps')
    rows = credalvol.experiments.prior_shrinkage(args.eps,
                                                 _parse_range(args.c_range))
    return _Table(credalvol.experiments.SHRINKAGE_COLUMNS, rows)


def _run_validate(args, config):
    if config.input is None:
        raise UsageError("validate needs --input")
    with open(config.input) as fh:
        try:
            obj = json.load(fh)
        except ValueError as exc:
            raise credalvol.format.CredalFormatError(
                "Invalid JSON: %s" % exc)
    credalvol.schema.validate(obj, args.schema)


def _run_convert(args, config):
    p = _read_input(config)
    if config.out is None:
        raise UsageError("convert needs --out")
    credalvol.format.write_credal_set_file(p, config.out)


# Handler, and True if the output is a data file written by the handler
_HANDLERS = {
    'volume': (_run_volume, False),
    'measures': (_run_measures, False),
    'axioms': (_run_axioms, False),
    'packing-experiment': (_run_packing, False),
    'carl-pajor': (_run_carl_pajor, False),
    'lift': (_run_lift, False),
    'idm-sim': (_run_idm_sim, False),
    'prior-shrinkage': (_run_prior_shrinkage, False),
    'validate': (_run_validate, True),
    'convert': (_run_convert, True)}


def _make_parser():
    common = _ArgumentParser(add_help=False)
    common.add_argument('--input', help="Input credal set file")
    common.add_argument('--out', help="Output file (default stdout)")
    common.add_argument('--seed', type=int, help="Random seed")
    common.add_argument('--samples', type=int,
                        help="Number of Monte Carlo samples")
    common.add_argument('--threads', type=int,
                        help="Maximum worker threads (default $%s)"
                        % THREADS_ENV)
    common.add_argument('--format', choices=['json', 'csv'],
                        help="Output format")
    common.add_argument('--config', help="JSON file of default settings")
    common.add_argument('--tolerance', action='append', metavar='NAME=VALUE',
                        help="Override a tolerance (%s)"
                        % ", ".join(sorted(DEFAULT_TOLERANCES)))
    common.add_argument('--quiet', action='store_true',
                        help="Suppress warnings")

    parser = _ArgumentParser(
        prog='credalvol',
        description="Volume of credal sets as a measure of epistemic "
                    "uncertainty")
    sub = parser.add_subparsers(dest='subcommand', metavar='SUBCOMMAND')

    def add(name, help):
        return sub.add_parser(name, parents=[common], help=help)

    p = add('volume', "Volume of a credal set")
    p.add_argument('--mc', action='store_true',
                   help="Estimate by Monte Carlo rather than exactly")

    add('measures', "All uncertainty measures of a credal set")

    p = add('axioms', "Check axioms or run a counterexample")
    p.add_argument('example', nargs='?',
                   choices=['example1', 'a3', 'lift-continuity'],
                   help="Run a built-in counterexample instead")
    p.add_argument('--nested', help="Credal set nested in --input (A3)")
    p.add_argument('--grouping', help="Grouping file (A5, A6)")
    p.add_argument('--measure', default='volume',
                   choices=credalvol.measures.MEASURES)
    p.add_argument('--base', type=float, help="Counterexample base length")
    p.add_argument('--height', type=float, default=1.0,
                   help="Triangle height for the a3 and example1 "
                        "counterexamples")
    p.add_argument('--n', type=int, help="Length of the sequence")

    p = add('packing-experiment', "Volume concentration experiment")
    p.add_argument('--d', type=int, help="Number of labels")
    p.add_argument('--eps', type=float, help="Erosion distance")
    p.add_argument('--r', type=float, default=0.15, help="Packing radius")
    p.add_argument('--restarts', type=int, default=16)
    p.add_argument('--sweep-d', help="Sweep label counts LO:HI")
    p.add_argument('--ratios', default='0.1,0.25,0.5',
                   help="Ratios eps/r for a sweep")

    p = add('carl-pajor', "Random polytope volume against its bound")
    p.add_argument('--d', type=int, help="Dimension")
    p.add_argument('--m', type=int, help="Number of points")
    p.add_argument('--sweep-d', help="Sweep dimensions LO:HI")

    p = add('lift', "Lift a credal set into more labels")
    p.add_argument('--target-d', type=int, help="Target number of labels")

    p = add('idm-sim', "Imprecise Dirichlet Model learning curve")
    p.add_argument('--p', help="True distribution, e.g. 0.2,0.3,0.5")
    p.add_argument('--n', type=int, help="Number of observations")
    p.add_argument('--s', type=float, default=1.0, help="Prior strength")

    p = add('prior-shrinkage', "Volume of eroded simplices")
    p.add_argument('--eps', type=float, help="Erosion distance")
    p.add_argument('--c-range', default='2:12', help="Label counts LO:HI")

    p = add('validate', "Check a JSON file against a shipped schema")
    p.add_argument('--schema', required=True,
                   choices=credalvol.schema.get_names())

    add('convert', "Convert a credal set between JSON and msgpack")
    return parser


def _is_table(args):
    return (args.subcommand in ('idm-sim', 'prior-shrinkage')
            or getattr(args, 'example', None) == 'example1'
            or bool(getattr(args, 'sweep_d', None)))


def dispatch(argv=None, environ=None):
    """Run the command line interface.

       :param list argv: Arguments, excluding the program name (default
              `sys.argv[1:]`).
       :param dict environ: Environment (default `os.environ`).
       :return: The exit status: 0 on success, 1 for bad input or usage,
                or 2 for a numerical failure.
    """
    if argv is None:
        argv = sys.argv[1:]
    argv = list(argv)
    parser = _make_parser()
    try:
        if not argv or argv[0] not in _HANDLERS:
            if argv and argv[0] in ('-h', '--help'):
                parser.print_help()
                return 0
            raise UnknownSubcommandError(
                "Unknown subcommand %s; valid subcommands are %s"
                % (repr(argv[0]) if argv else "(none)",
                   ", ".join(_HANDLERS)))
        args = parser.parse_args(argv)
        config = RunConfig.resolve(
            args, environ,
            default_format='csv' if _is_table(args) else 'json')
        handler, writes_own = _HANDLERS[args.subcommand]
        with warnings.catch_warnings():
            if args.quiet:
                warnings.simplefilter('ignore')
            with _tolerances(config.tolerances):
                result = handler(args, config)
        if not writes_own:
            if config.out:
                with open(config.out, 'w') as fh:
                    _write_output(result, config, fh)
            else:
                _write_output(result, config, sys.stdout)
        return 0
    except UnknownSubcommandError as exc:
        print(parser.format_usage().rstrip(), file=sys.stderr)
        print("credalvol: error: %s" % exc, file=sys.stderr)
        return 1
    except SystemExit as exc:
        # argparse --help
        return exc.code or 0
    except (ValueError, OSError, ImportError) as exc:
        print("credalvol: error: %s" % exc, file=sys.stderr)
        return 1
    except Exception as exc:
        print("credalvol: numerical failure: %s: %s"
              % (type(exc).__name__, exc), file=sys.stderr)
        return 2


def main():
    sys.exit(dispatch())


if __name__ == '__main__':
    main()
