import logging

import numpy as np

from .arith import primes_up_to
from .constants import C_VDC, REPORT_SCHEMA
from .dioph import cf_expand, type_closure_check, type_estimate
from .errors import InvariantViolation, PsBeattyError
from .exactreal import parse_integer, parse_real
from .expsum import (BOUNDS, ExpSumSpec, default_eps, derivative_test_suite,
                     empirical_vs_bound, exp_sum, heath_brown_check,
                     index_reduction_check)
from .sawtooth import (CONSTRUCTIONS, SrinivasanBound, adversarial_grid,
                       random_srinivasan_spec, srinivasan_bound,
                       srinivasan_witness, uniform_grid, vaaler_build,
                       vaaler_check)
from .seq import (BeattyParams, PSParams, beatty_indicator_array,
                  beatty_prime_count, beatty_terms_array, pi_c_asymptotic,
                  pi_c_count, ps_indicator_array, ps_prime_values,
                  ps_terms_array)
from .sievelab import (ExperimentConfig, admissibility, crtable,
                       discrepancy_scan, main_term_X, theorem_count)


class UnknownCommand(PsBeattyError, KeyError):
    pass


class CommandHandler(object):
    """
    The CommandHandler runs psbeatty commands and reports their results.

    A command is a name such as 'sieve scan' plus a dict of arguments.
    Argument values may be text ("sqrt(2)", "1e6", "25/24") or numbers;
    omitted arguments take the defaults below. Every completed command is
    handed to the reporter as one document::

        {'schema': 'psbeatty.report.v1', 'command': ..., 'config': ...,
         'result': ...}

    preceded by on_rows() when the result has a tabular part.

    To add commands, extend CommandHandler and override command_handlers().
    """
    def __init__(self, reporter, logger=None, runner=None, seed=0):
        """
        Create a CommandHandler instance.

        Args:
            reporter (Reporter): A reporter to send reports to.
            logger (Logger): The log handler for the command handler.
            runner (PoolRunner): Maps range segments over workers for the
                sieve commands; serial when omitted.
            seed (int): Default seed of the randomised commands.
        """
        self._reporter = reporter
        self._logger = logger or logging.getLogger(__name__)
        self._runner = runner
        self._seed = seed

    @classmethod
    def command_handlers(cls):
        """
        Get the commands we can run, and functions to run them.

        Returns:
            dict: A dict with command names as keys and functions as values.
        """
        return {
            # Sequences and prime counts.
            'seq beatty': cls._on_seq_beatty,
            'seq ps': cls._on_seq_ps,
            'count psprimes': cls._on_count_psprimes,
            'count beattyprimes': cls._on_count_beattyprimes,
            # Diophantine approximation.
            'dioph cf': cls._on_dioph_cf,
            'dioph type': cls._on_dioph_type,
            # Sawtooth approximation.
            'vaaler check': cls._on_vaaler_check,
            'srinivasan': cls._on_srinivasan,
            # Exponential sums.
            'expsum eval': cls._on_expsum_eval,
            'expsum hbcheck': cls._on_expsum_hbcheck,
            'expsum compare': cls._on_expsum_compare,
            'expsum deriv': cls._on_expsum_deriv,
            'expsum index': cls._on_expsum_index,
            # The sieve experiment.
            'sieve scan': cls._on_sieve_scan,
            'sieve theorem': cls._on_sieve_theorem,
            'sieve admissible': cls._on_sieve_admissible,
            'sieve crtable': cls._on_crtable,
            'crtable': cls._on_crtable,
        }

    def on_command(self, name, args=None):
        """
        Run one command and send its report.

        Domain errors are reported through on_error() instead of being
        raised; programming errors propagate.

        Args:
            name (str): The command name.
            args (dict): The command arguments.

        Returns:
            dict: The report or error document.

        Raises:
            UnknownCommand: For a name command_handlers() does not know.
        """
        args = dict(args or {})
        handlers = self.command_handlers()
        if name not in handlers:
            raise UnknownCommand(name)

        self._logger.debug('Running {} with {}'.format(name, args))
        try:
            config, result, table = handlers[name](self, args)
        except PsBeattyError as e:
            self._logger.warning('{} failed: {}'.format(name, e))
            document = {
                'schema': REPORT_SCHEMA,
                'command': name,
                'config': _echo_args(args),
                'error': {'type': type(e).__name__, 'message': str(e)},
            }
            self._reporter.on_error(document)
            return document

        document = {
            'schema': REPORT_SCHEMA,
            'command': name,
            'config': config,
            'result': result,
        }
        if table is not None:
            columns, rows = table
            self._reporter.on_rows(name, columns, rows)
        self._reporter.on_report(document)
        return document

    def _rng(self, args):
        seed = int(args.get('seed', self._seed))
        return seed, np.random.default_rng(seed)

    def _on_seq_beatty(self, args):
        """
        The first n Beatty terms, or chi(m) for 1 <= m <= mmax.
        """
        params = BeattyParams(args.get('alpha', 'sqrt(2)'),
                              args.get('beta', 0))
        config = params.echo()
        if 'mmax' in args:
            ms = np.arange(1, parse_integer(args['mmax']) + 1,
                           dtype=np.int64)
            chi = beatty_indicator_array(params, ms)
            rows = [{'m': int(m), 'chi': int(c)} for m, c in zip(ms, chi)]
            config['mmax'] = len(ms)
            return config, {'members': int(chi.sum())}, (['m', 'chi'], rows)

        n = parse_integer(args.get('n', 20))
        terms = beatty_terms_array(params, n)
        config['n'] = n
        rows = [{'n': i + 1, 'term': int(t)} for i, t in enumerate(terms)]
        return config, {'terms': terms}, (['n', 'term'], rows)

    def _on_seq_ps(self, args):
        """
        The first n PS terms, or chi^(c)(m) for 1 <= m <= mmax.
        """
        params = PSParams(args.get('c', '3/2'))
        config = params.echo()
        if 'mmax' in args:
            ms = np.arange(1, parse_integer(args['mmax']) + 1,
                           dtype=np.int64)
            chi = ps_indicator_array(params, ms)
            rows = [{'m': int(m), 'chi': int(c)} for m, c in zip(ms, chi)]
            config['mmax'] = len(ms)
            return config, {'members': int(chi.sum())}, (['m', 'chi'], rows)

        n = parse_integer(args.get('n', 20))
        terms = ps_terms_array(params, n)
        config['n'] = n
        rows = [{'n': i + 1, 'term': int(t)} for i, t in enumerate(terms)]
        return config, {'terms': terms}, (['n', 'term'], rows)

    def _on_count_psprimes(self, args):
        """
        pi^(c)(x) from the indicator side against the generator side.
        """
        params = PSParams(args.get('c', '5/4'))
        x = parse_integer(args.get('x', 10 ** 6))
        primes = primes_up_to(x)
        indicator = pi_c_count(params, x, primes=primes)
        generator = len(ps_prime_values(params, x))
        if indicator != generator:
            raise InvariantViolation(
                'Indicator count {} and generator count {} of PS primes '
                'differ for c={} x={}'.format(indicator, generator,
                                              params.c, x))
        asymptotic = pi_c_asymptotic(params, x)
        config = params.echo()
        config['x'] = x
        return config, {
            'count': indicator,
            'generator_count': generator,
            'asymptotic': asymptotic,
            'ratio': indicator / asymptotic,
        }, None

    def _on_count_beattyprimes(self, args):
        """
        #{p <= x : chi_{alpha,beta}(p) = 1} against pi(x) / alpha.
        """
        params = BeattyParams(args.get('alpha', 'sqrt(2)'),
                              args.get('beta', 0))
        x = parse_integer(args.get('x', 10 ** 6))
        primes = primes_up_to(x)
        count = beatty_prime_count(params, primes)
        density = count / len(primes) if len(primes) else 0.0
        config = params.echo()
        config['x'] = x
        return config, {
            'count': count,
            'pi_x': len(primes),
            'density': density,
            'expected_density': params.a_float,
            'deviation': abs(density - params.a_float),
        }, None

    def _on_dioph_cf(self, args):
        """
        Partial quotients and convergents.
        """
        x = parse_real(args.get('x', 'sqrt(2)'))
        k = parse_integer(args.get('k', 20))
        cf = cf_expand(x, k)
        rows = [{'k': i, 'a': a, 'p': p, 'q': q}
                for i, (a, (p, q)) in enumerate(
                    zip(cf.partial_quotients, cf.convergents))]
        period = None
        if cf.period is not None:
            period = {'preperiod': cf.period[0], 'block': cf.period[1]}
        return {'x': x.text(), 'k': k}, {
            'partial_quotients': cf.partial_quotients,
            'convergents': [list(pair) for pair in cf.convergents],
            'period': period,
            'terminated': cf.terminated,
        }, (['k', 'a', 'p', 'q'], rows)

    def _on_dioph_type(self, args):
        """
        The irrationality type estimate, optionally for 1/x and n/x too.
        """
        x = parse_real(args.get('x', 'sqrt(2)'))
        n = parse_integer(args.get('n', 10 ** 6))
        estimate = type_estimate(x, n)
        result = {
            'tau_hat': estimate.tau_hat,
            'witness': (None if estimate.witness is None else
                        {'q': estimate.witness[0],
                         'distance': estimate.witness[1]}),
        }
        if args.get('closure'):
            result['closure'] = type_closure_check(x, n)
        return {'x': x.text(), 'n': n}, result, None

    def _on_vaaler_check(self, args):
        """
        The Vaaler inequality on a uniform plus a near-integer grid.
        """
        seed, rng = self._rng(args)
        H = parse_integer(args.get('H', 64))
        size = parse_integer(args.get('grid', 10 ** 4))
        adversarial = parse_integer(args.get('adversarial', 10 ** 3))
        construction = args.get('construction', 'vaaler')
        if construction not in CONSTRUCTIONS:
            raise ValueError('Unknown construction {!r}'.format(construction))
        grid = uniform_grid(size)
        if adversarial:
            grid = np.concatenate([grid, adversarial_grid(adversarial, rng)])
        approx = vaaler_build(H, construction)
        report = vaaler_check(approx, grid, strict=construction == 'vaaler')
        report['mean_err_bound'] = 2.0 / H
        return {'H': H, 'grid': size, 'adversarial': adversarial,
                'construction': construction, 'seed': seed}, report, None

    def _on_srinivasan(self, args):
        """
        The Srinivasan bound for explicit terms, or a seeded random suite.

        Terms are given as "coefficient:exponent" pairs separated by
        commas, e.g. A="1:1,1:2" and B="1:1".
        """
        if 'A' in args or 'B' in args:
            spec = SrinivasanBound(_terms(args.get('A', '')),
                                   _terms(args.get('B', '')),
                                   float(args.get('H1', 1)),
                                   float(args.get('H2', 100)))
            H_star, L_star = srinivasan_witness(spec)
            bound = srinivasan_bound(spec)
            return {'A': spec.A, 'B': spec.B, 'H1': spec.H1,
                    'H2': spec.H2}, {
                'bound': bound,
                'witness_H': H_star,
                'witness_L': L_star,
                'C_S': spec.C_S,
                'ok': L_star <= spec.C_S * bound,
            }, None

        seed, rng = self._rng(args)
        count = parse_integer(args.get('count', 10 ** 3))
        rows = []
        for i in range(count):
            spec = random_srinivasan_spec(rng)
            H_star, L_star = srinivasan_witness(spec)
            bound = srinivasan_bound(spec)
            rows.append({'case': i, 'm': len(spec.A), 'n': len(spec.B),
                         'H1': spec.H1, 'H2': spec.H2, 'bound': bound,
                         'witness_L': L_star,
                         'ratio': L_star / (spec.C_S * bound)})
        failures = [row['case'] for row in rows if row['ratio'] > 1]
        if failures:
            raise InvariantViolation(
                'Srinivasan witness above 2mn x bound for cases {}'.format(
                    failures))
        return {'count': count, 'seed': seed}, {
            'cases': count,
            'max_ratio': max((row['ratio'] for row in rows), default=0.0),
        }, (['case', 'm', 'n', 'H1', 'H2', 'bound', 'witness_L', 'ratio'],
            rows)

    def _on_expsum_eval(self, args):
        """
        One exponential sum, with the selected bound when j != 0.
        """
        spec = _expsum_spec(args)
        value = exp_sum(spec)
        result = {'value': value, 'modulus': abs(value)}
        if spec.j != 0:
            which = args.get('bound', 'combined')
            eps = float(args.get('eps', default_eps()))
            result['bound'] = empirical_vs_bound(spec, which, eps).as_dict()
        return spec.echo(), result, None

    def _on_expsum_hbcheck(self, args):
        """
        The Heath-Brown identity against Lambda(n) for n <= nmax.
        """
        nmax = parse_integer(args.get('nmax', 5000))
        ks = tuple(int(k) for k in args.get('ks', (1, 2, 3)))
        report = heath_brown_check(nmax, ks)
        if report['failures']:
            raise InvariantViolation(
                'Heath-Brown identity fails for {} cases, first {}'.format(
                    len(report['failures']), report['failures'][0]))
        return {'nmax': nmax, 'ks': list(ks)}, report, None

    def _on_expsum_compare(self, args):
        """
        Empirical sums against a bound for a list of specs.

        `specs` is a list of ExpSumSpec argument dicts.
        """
        which = args.get('bound', 'combined')
        if which not in BOUNDS:
            raise ValueError('Unknown bound {!r}, expected one of {}'.format(
                which, ', '.join(BOUNDS)))
        eps = float(args.get('eps', default_eps()))
        rows = []
        for entry in args.get('specs', []):
            spec = _expsum_spec(entry)
            report = empirical_vs_bound(spec, which, eps)
            row = spec.echo()
            row.update({'empirical': report.empirical,
                        'total_bound': report.total_bound,
                        'ratio': report.ratio})
            rows.append(row)
        columns = list(ExpSumSpec._fields) + ['empirical', 'total_bound',
                                              'ratio']
        return {'bound': which, 'eps': eps, 'specs': len(rows)}, {
            'max_ratio': max((row['ratio'] for row in rows), default=0.0),
        }, (columns, rows)

    def _on_expsum_deriv(self, args):
        """
        The seeded random suite of monomial sums against both derivative
        tests.
        """
        seed, rng = self._rng(args)
        count = parse_integer(args.get('count', 100))
        rows = derivative_test_suite(rng, count)
        failures = [i for i, row in enumerate(rows)
                    if max(row['ratio2'], row['ratio3']) > C_VDC]
        if failures:
            raise InvariantViolation(
                'Monomial sums above {} x the derivative test bounds for '
                'cases {}'.format(C_VDC, failures))
        result = {
            'count': count,
            'max_ratio2': max((row['ratio2'] for row in rows), default=0.0),
            'max_ratio3': max((row['ratio3'] for row in rows), default=0.0),
        }
        return {'count': count, 'seed': seed}, result, (
            ['A', 'a', 'gamma', 'empirical', 'lambda2', 'lambda3', 'ratio2',
             'ratio3'], rows)

    def _on_expsum_index(self, args):
        """
        Both sides of the reduction from a prime sum to a Lambda sum.
        """
        N = parse_integer(args.get('N', 10 ** 4))
        j = int(args.get('j', 1))
        d = int(args.get('d', 1))
        gamma = float(parse_real(args.get('gamma', '0.5')))
        m1 = float(parse_real(args.get('m1', 0)))
        report = index_reduction_check(N, j, d, gamma, m1)
        return {'N': N, 'j': j, 'd': d, 'gamma': gamma, 'm1': m1}, \
            report, None

    def _on_sieve_scan(self, args):
        """
        Direct and dual slice counts for d <= D.
        """
        config = _experiment(args)
        report = discrepancy_scan(config, runner=self._runner)
        rows = report.per_d
        columns = ['d', 'count_direct', 'count_dual', 'main_term', 'error',
                   'S1', 'S2', 'S3', 'S0', 'S12', 'residual']
        result = report.as_dict()
        del result['config']
        return config.echo(), result, (columns, rows)

    def _on_sieve_theorem(self, args):
        """
        The almost-prime count next to x**gamma / (alpha log x).
        """
        config = _experiment(args)
        count = theorem_count(config)
        _, X_asym = main_term_X(config)
        return config.echo(), {
            'count': count,
            'X_asym': X_asym,
            'ratio': count / X_asym,
        }, None

    def _on_sieve_admissible(self, args):
        """
        The Greaves admissibility arithmetic for R and gamma.
        """
        R = parse_integer(args.get('R', 13))
        gamma = args.get('gamma', '0.997')
        report = admissibility(R, gamma)
        return {'R': R, 'gamma': str(gamma)}, report.as_dict(), None

    def _on_crtable(self, args):
        """
        c_R, its 4-place value and the threshold gamma for R in a range.
        """
        rmin = parse_integer(args.get('rmin', 13))
        rmax = parse_integer(args.get('rmax', 21))
        rows = crtable(rmin, rmax)
        return {'rmin': rmin, 'rmax': rmax}, {'rows': rows}, (
            ['R', 'c_R', 'c_R_4dp', 'threshold_gamma', 'delta_R', 'g',
             'sieve_ok'], rows)


def _echo_args(args):
    return {key: (value if isinstance(value, (int, float, bool)) or
                  value is None else str(value))
            for key, value in args.items()}


def _terms(text):
    """
    Parse "c1:e1,c2:e2" into [(c1, e1), (c2, e2)].
    """
    if isinstance(text, (list, tuple)):
        return [tuple(pair) for pair in text]
    terms = []
    for item in str(text).split(','):
        item = item.strip()
        if not item:
            continue
        try:
            coefficient, exponent = item.split(':')
            terms.append((float(parse_real(coefficient)),
                          float(parse_real(exponent))))
        except ValueError:
            raise ValueError('Expected coefficient:exponent, got {!r}'.format(
                item))
    return terms


def _expsum_spec(args):
    return ExpSumSpec(
        lo=parse_integer(args.get('lo', 0)),
        hi=parse_integer(args.get('hi', 10 ** 4)),
        j=int(args.get('j', 1)),
        d=int(args.get('d', 1)),
        gamma=float(parse_real(args.get('gamma', '0.5'))),
        m1=float(parse_real(args.get('m1', 0))),
        weight=args.get('weight', 'lambda'),
    )


def _experiment(args):
    return ExperimentConfig(
        x=parse_integer(args.get('x', 10 ** 6)),
        beatty=BeattyParams(args.get('alpha', 'sqrt(2)'),
                            args.get('beta', 0)),
        ps=PSParams(args.get('c', '25/24')),
        R=parse_integer(args.get('R', 21)),
        D=parse_integer(args.get('D', 1)),
        eps=float(args.get('eps', default_eps())),
    )
