"""
The psbeatty command line.

Every command prints one JSON report (schema psbeatty.report.v1) or, with
--format csv, its table. --out writes the report to a file instead,
atomically. Exit codes: 0 on success, 1 on usage errors, 2 when a command
fails with a psbeatty error, whose JSON body is printed on stdout.

Examples::

    psbeatty crtable --rmin 13 --rmax 21 --format csv
    psbeatty sieve scan --x 1e6 --c 25/24 --alpha "sqrt(2)" --D 30
    psbeatty suite --seed 7 --out suite.json
"""
import argparse
import json
import logging
import sys

from .constants import REPORT_SCHEMA
from .errors import PsBeattyError
from .handlers import CommandHandler
from .reporters import (CsvReporter, JsonReporter, MultiReporter,
                        StreamReporter, dumps)
from .runners.pool_runner import PoolRunner, worker_count
from .runners.suite_runner import SuiteRunner

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    """
    An ArgumentParser which raises UsageError instead of exiting.
    """
    def error(self, message):
        raise UsageError('{}\n{}: error: {}'.format(
            self.format_usage().rstrip(), self.prog, message))


def _common_options():
    common = ArgumentParser(add_help=False)
    common.add_argument('--out', default=None,
                        help='Write the report to this file.')
    common.add_argument('--format', default='json', choices=('json', 'csv'),
                        help='Report format (default: json).')
    common.add_argument('--seed', type=int, default=argparse.SUPPRESS,
                        help='Seed of the randomised checks.')
    common.add_argument('-v', '--verbose', action='count', default=0,
                        help='Log INFO (-v) or DEBUG (-vv) to stderr.')
    return common


def _command(actions, name, command, help_text, common):
    parser = actions.add_parser(name, help=help_text, parents=[common],
                                argument_default=argparse.SUPPRESS)
    parser.set_defaults(command=command)
    return parser


def _add_beatty(parser):
    parser.add_argument('--alpha', help='Beatty alpha > 1, e.g. "sqrt(2)".')
    parser.add_argument('--beta', help='Beatty beta (default 0).')


def _add_experiment(parser):
    parser.add_argument('--x', help='Upper bound x, e.g. 1e6.')
    parser.add_argument('--c', help='PS exponent c in (1, 2), e.g. 25/24.')
    _add_beatty(parser)
    parser.add_argument('--R', help='Almost-prime order R.')
    parser.add_argument('--D', help='Largest modulus d of the scan.')
    parser.add_argument('--eps', type=float, help='Epsilon of the budgets.')


def _add_expsum(parser):
    for flag in ('lo', 'hi', 'j', 'd', 'gamma', 'm1'):
        parser.add_argument('--' + flag)
    parser.add_argument('--weight', choices=('lambda', 'unit', 'log'))
    parser.add_argument('--bound', choices=('combined', 'type_I', 'type_II'))
    parser.add_argument('--eps', type=float)


def build_parser():
    """
    The argument parser with all subcommands.
    """
    common = _common_options()
    parser = ArgumentParser(
        prog='psbeatty',
        description='Primes in Beatty and Piatetski-Shapiro sequences with '
                    'almost-prime indices: desk-scale experiments.')
    groups = parser.add_subparsers(dest='group', metavar='command')
    groups.required = True

    seq = groups.add_parser('seq', help='Sequence terms and indicators.')
    actions = seq.add_subparsers(dest='action', metavar='action')
    actions.required = True
    beatty = _command(actions, 'beatty', 'seq beatty',
                      'Beatty terms floor(alpha n + beta).', common)
    _add_beatty(beatty)
    ps = _command(actions, 'ps', 'seq ps', 'PS terms floor(n^c).', common)
    ps.add_argument('--c')
    for sub in (beatty, ps):
        sub.add_argument('--n', help='Number of terms.')
        sub.add_argument('--mmax', help='Emit chi(m) for 1 <= m <= mmax.')

    count = groups.add_parser('count', help='Prime counts.')
    actions = count.add_subparsers(dest='action', metavar='action')
    actions.required = True
    psprimes = _command(actions, 'psprimes', 'count psprimes',
                        'PS primes up to x, counted both ways.', common)
    psprimes.add_argument('--c')
    psprimes.add_argument('--x')
    beattyprimes = _command(actions, 'beattyprimes', 'count beattyprimes',
                            'Beatty primes up to x.', common)
    _add_beatty(beattyprimes)
    beattyprimes.add_argument('--x')

    dioph = groups.add_parser('dioph', help='Diophantine approximation.')
    actions = dioph.add_subparsers(dest='action', metavar='action')
    actions.required = True
    cf = _command(actions, 'cf', 'dioph cf', 'Continued fraction.', common)
    cf.add_argument('--x')
    cf.add_argument('--k')
    kind = _command(actions, 'type', 'dioph type',
                    'Irrationality type estimate.', common)
    kind.add_argument('--x')
    kind.add_argument('--n')
    kind.add_argument('--closure', action='store_true',
                      help='Also estimate 1/x, 2/x and 3/x.')

    vaaler = groups.add_parser('vaaler', help='Vaaler approximation.')
    actions = vaaler.add_subparsers(dest='action', metavar='action')
    actions.required = True
    check = _command(actions, 'check', 'vaaler check',
                     'Check the pointwise inequality on a grid.', common)
    check.add_argument('--H')
    check.add_argument('--grid')
    check.add_argument('--adversarial')
    check.add_argument('--construction', choices=('vaaler', 'fejer'))

    srinivasan = groups.add_parser(
        'srinivasan', parents=[common], argument_default=argparse.SUPPRESS,
        help='Srinivasan bound, explicit or a random suite.')
    srinivasan.set_defaults(command='srinivasan')
    srinivasan.add_argument('--A', help='Terms "c:e,..." of growing powers.')
    srinivasan.add_argument('--B', help='Terms "c:e,..." of decaying powers.')
    srinivasan.add_argument('--H1')
    srinivasan.add_argument('--H2')
    srinivasan.add_argument('--count', help='Size of the random suite.')

    expsum = groups.add_parser('expsum', help='Exponential sums.')
    actions = expsum.add_subparsers(dest='action', metavar='action')
    actions.required = True
    _add_expsum(_command(actions, 'eval', 'expsum eval',
                         'Evaluate one sum.', common))
    hbcheck = _command(actions, 'hbcheck', 'expsum hbcheck',
                       'Check the Heath-Brown identity.', common)
    hbcheck.add_argument('--nmax')
    hbcheck.add_argument('--ks', type=int, nargs='+')
    compare = _command(actions, 'compare', 'expsum compare',
                       'Compare a suite of sums with a bound.', common)
    compare.add_argument('--suite', required=True,
                         help='JSON list of sum specifications.')
    compare.add_argument('--bound', choices=('combined', 'type_I', 'type_II'))
    compare.add_argument('--eps', type=float)
    deriv = _command(actions, 'deriv', 'expsum deriv',
                     'Random monomial sums against the derivative tests.',
                     common)
    deriv.add_argument('--count')
    index = _command(actions, 'index', 'expsum index',
                     'Reduction of a prime sum to a Lambda sum.', common)
    for flag in ('N', 'j', 'd', 'gamma', 'm1'):
        index.add_argument('--' + flag)

    sieve = groups.add_parser('sieve', help='The sieve experiment.')
    actions = sieve.add_subparsers(dest='action', metavar='action')
    actions.required = True
    _add_experiment(_command(actions, 'scan', 'sieve scan',
                             'Slice counts A_d for d <= D.', common))
    _add_experiment(_command(actions, 'theorem', 'sieve theorem',
                             'Count primes with almost-prime index.',
                             common))
    admissible = _command(actions, 'admissible', 'sieve admissible',
                          'Greaves admissibility for R and gamma.', common)
    admissible.add_argument('--R')
    admissible.add_argument('--gamma')
    sieve_crtable = _command(actions, 'crtable', 'sieve crtable',
                             'The c_R table.', common)

    crtable = groups.add_parser(
        'crtable', parents=[common], argument_default=argparse.SUPPRESS,
        help='The c_R table.')
    crtable.set_defaults(command='crtable')
    for sub in (sieve_crtable, crtable):
        sub.add_argument('--rmin')
        sub.add_argument('--rmax')

    suite = groups.add_parser(
        'suite', parents=[common], argument_default=argparse.SUPPRESS,
        help='Run a suite of commands (the built-in one by default).')
    suite.set_defaults(command='suite')
    suite.add_argument('files', nargs='*', help='JSON suite files.')
    return parser


def _configure_logging(verbose):
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')


def _reporter(out, fmt):
    if out is None:
        sink = StreamReporter(sys.stdout, fmt)
    elif fmt == 'csv':
        sink = CsvReporter(out)
    else:
        sink = JsonReporter(out)
    return MultiReporter([sink])


def _load_specs(path):
    try:
        with open(path, 'r') as f:
            specs = json.load(f)
    except (OSError, ValueError) as e:
        raise UsageError('Cannot read suite {}: {}'.format(path, e))
    if not isinstance(specs, list):
        raise UsageError('Suite {} must hold a list of sum specifications'
                         .format(path))
    return specs


def run(argv=None):
    """
    Run the command line and return the exit code.

    Args:
        argv (list): Arguments without the program name (sys.argv[1:] when
            omitted).

    Returns:
        int: 0 on success, 1 on usage errors, 2 on psbeatty errors.
    """
    parser = build_parser()
    try:
        options = vars(parser.parse_args(argv))
        if 'suite' in options and options.get('command') == 'expsum compare':
            options['specs'] = _load_specs(options.pop('suite'))
    except UsageError as e:
        sys.stderr.write('{}\n'.format(e))
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return e.code or EXIT_OK

    command = options.pop('command')
    out = options.pop('out')
    fmt = options.pop('format')
    _configure_logging(options.pop('verbose'))
    options.pop('group', None)
    options.pop('action', None)

    reporter = _reporter(out, fmt)
    logger.info('Running {} with {}'.format(command, options))
    try:
        pool = PoolRunner(workers=worker_count())
        if command == 'suite':
            runner = SuiteRunner(options.get('files') or None, reporter,
                                 seed=options.get('seed', 0), runner=pool)
            documents = runner.run()
            failures = [doc for doc in documents if 'error' in doc]
        else:
            handler = CommandHandler(reporter, runner=pool)
            failures = [doc for doc in [handler.on_command(command, options)]
                        if 'error' in doc]
    except PsBeattyError as e:
        sys.stdout.write(dumps({
            'schema': REPORT_SCHEMA,
            'command': command,
            'error': {'type': type(e).__name__, 'message': str(e)},
        }))
        return EXIT_FAILED
    except (ValueError, KeyError, OSError) as e:
        sys.stderr.write('psbeatty: error: {}\n'.format(e))
        return EXIT_USAGE
    finally:
        reporter.close()

    if failures:
        if out is not None:
            for document in failures:
                sys.stdout.write(dumps(document))
        return EXIT_FAILED
    return EXIT_OK


def main():
    sys.exit(run())
