"""
Exponential sums over primes and the bounds they are compared against.

exp_sum() evaluates sums of the shape

    sum_{lo < n <= hi} w(n) e(j/d * n**gamma + m1 * n)

directly, with w one of Lambda, 1 or log. The bound calculators return the
displayed formulas term by term so that reports can show which term
dominates. heath_brown() verifies the combinatorial identity for Lambda
exactly by collecting integer multiples of log p.
"""
import logging
import math
import os
from collections import OrderedDict, namedtuple
from functools import lru_cache
from math import comb

import mpmath
import numpy as np

from .arith import (divisors, factorize, mobius, sieve_segment,
                    von_mangoldt)
from .constants import (DEFAULT_EPS, ENV_EPS, EXP_SUM_MAX_HI,
                        HEATH_BROWN_MAX_N, HEATH_BROWN_MAX_TERMS,
                        HIGH_PRECISION_MAX_TERMS, SIEVE_SEGMENT)
from .errors import PsBeattyError
from .exactreal import Rational, certified_floor, parse_real

logger = logging.getLogger(__name__)

WEIGHTS = ('lambda', 'unit', 'log')
COEFFICIENT_CLASSES = ('unit', 'log', 'mobius', 'random')
BOUNDS = ('combined', 'type_I', 'type_II')


class RangeTooLarge(PsBeattyError):
    pass


class HypothesisViolated(PsBeattyError, ValueError):
    pass


class TooManyFactorizations(PsBeattyError):
    pass


class ZeroFrequency(PsBeattyError, ValueError):
    pass


def default_eps():
    """
    The epsilon of the bound calculators: PSBEATTY_EPS or 0.01.
    """
    value = os.environ.get(ENV_EPS)
    if value is None:
        return DEFAULT_EPS
    try:
        eps = float(value)
    except ValueError:
        raise ValueError('{} must be a positive number, got {!r}'.format(
            ENV_EPS, value))
    if not eps > 0:
        raise ValueError('{} must be a positive number, got {!r}'.format(
            ENV_EPS, value))
    return eps


class ExpSumSpec(namedtuple(
    'ExpSumSpecBase', 'lo hi j d gamma m1 weight'
)):
    """
    One exponential sum over the range (lo, hi].

    j = 0 is allowed here (the sum is then a linear phase sum over Lambda);
    the bound comparisons reject it.
    """

    def __new__(cls, lo, hi, j, d=1, gamma=0.5, m1=0.0, weight='lambda'):
        lo, hi, j, d = int(lo), int(hi), int(j), int(d)
        gamma, m1 = float(gamma), float(m1)
        if not 0 <= lo <= hi:
            raise ValueError('Need 0 <= lo <= hi, got ({}, {}]'.format(
                lo, hi))
        if d < 1:
            raise ValueError('d must be >= 1, got {}'.format(d))
        if not 0 < gamma < 1:
            raise ValueError('gamma must lie in (0, 1), got {}'.format(gamma))
        if weight not in WEIGHTS:
            raise ValueError('Unknown weight {!r}, expected one of {}'.format(
                weight, ', '.join(WEIGHTS)))
        return super().__new__(cls, lo, hi, j, d, gamma, m1, weight)

    def conjugate(self):
        """
        The spec with (j, m1) negated, whose sum is the complex conjugate.
        """
        return self._replace(j=-self.j, m1=-self.m1)

    def echo(self):
        return dict(self._asdict())


class BoundReport(namedtuple(
    'BoundReportBase', 'empirical bound_terms total_bound ratio meta'
)):
    """
    An empirical exponential sum next to a bound evaluated term by term.
    """

    def as_dict(self):
        return {
            'empirical': self.empirical,
            'bound_terms': dict(self.bound_terms),
            'total_bound': self.total_bound,
            'ratio': self.ratio,
            'meta': self.meta,
        }


class HBDecomposition(namedtuple('HBDecompositionBase', 'n k z terms')):
    """
    The k terms of the Heath-Brown identity for Lambda(n).

    `terms` is a list of (j, contribution) for j = 1..k.
    """

    @property
    def total(self):
        return math.fsum(value for _, value in self.terms)


# ===================================================================
# Direct evaluation
# ===================================================================

def _fractional(values):
    return values - np.floor(values)


def _phase_array(n, j, d, gamma, m1):
    """
    j/d * n**gamma + m1 * n reduced mod 1.
    """
    nf = n.astype(np.float64)
    phase = np.zeros(len(n))
    if j:
        phase = _fractional(j / d * np.power(nf, gamma))
    if m1:
        whole = math.floor(m1)
        # n * whole is an integer and drops out mod 1.
        phase = phase + _fractional((m1 - whole) * nf)
    return _fractional(phase)


def _weights(lo, hi, weight):
    if weight == 'unit':
        return np.ones(hi - lo + 1)
    if weight == 'log':
        return np.log(np.arange(lo, hi + 1, dtype=np.float64))
    return np.asarray(sieve_segment(lo, hi).lam, dtype=np.float64)


def _segment_sum(spec, start, end, zero_phase):
    n = np.arange(start, end + 1, dtype=np.int64)
    weights = _weights(start, end, spec.weight)
    if zero_phase:
        return complex(np.sum(weights))
    angle = 2 * np.pi * _phase_array(n, spec.j, spec.d, spec.gamma, spec.m1)
    return complex(np.sum(weights * np.cos(angle)),
                   np.sum(weights * np.sin(angle)))


def exp_sum(spec, zero_phase=False, segment=SIEVE_SEGMENT):
    """
    Evaluate the sum directly.

    Phases are reduced modulo 1 in double precision. Within a segment the
    terms are added pairwise, and the segment totals are added with
    math.fsum, so the result does not depend on the segmentation beyond
    rounding. The absolute error stays below 1e-6 per term times the
    largest weight for hi <= 10**9.

    Args:
        spec (ExpSumSpec): The sum.
        zero_phase (bool): Replace every phase by 0, leaving the sum of
            the weights.
        segment (int): Segment length.

    Returns:
        complex: The sum.

    Raises:
        RangeTooLarge: If hi exceeds 10**9.
    """
    if spec.hi > EXP_SUM_MAX_HI:
        raise RangeTooLarge('exp_sum is capped at hi <= {}, got {}'.format(
            EXP_SUM_MAX_HI, spec.hi))
    lo = max(spec.lo + 1, 1)
    real, imag = [], []
    start = lo
    while start <= spec.hi:
        end = min(start + segment - 1, spec.hi)
        value = _segment_sum(spec, start, end, zero_phase)
        real.append(value.real)
        imag.append(value.imag)
        start = end + 1
    return complex(math.fsum(real), math.fsum(imag))


def high_precision_exp_sum(spec, dps=30):
    """
    Recompute exp_sum() term by term with mpmath at `dps` digits.

    Raises:
        RangeTooLarge: For more than 10**4 terms.
    """
    if spec.hi - spec.lo > HIGH_PRECISION_MAX_TERMS:
        raise RangeTooLarge('high_precision_exp_sum is capped at {} terms'
                            .format(HIGH_PRECISION_MAX_TERMS))
    with mpmath.workdps(dps):
        total = mpmath.mpc(0)
        gamma = mpmath.mpf(spec.gamma)
        m1 = mpmath.mpf(spec.m1)
        for n in range(max(spec.lo + 1, 1), spec.hi + 1):
            if spec.weight == 'lambda':
                weight = _mp_von_mangoldt(n)
                if not weight:
                    continue
            elif spec.weight == 'log':
                weight = mpmath.log(n)
            else:
                weight = mpmath.mpf(1)
            phase = mpmath.mpf(spec.j) / spec.d * mpmath.power(n, gamma)
            phase += m1 * n
            total += weight * mpmath.expjpi(2 * phase)
        return complex(total)


def _mp_von_mangoldt(n):
    factors = factorize(n)
    if len(factors) == 1:
        return mpmath.log(next(iter(factors)))
    return 0


def monomial_sum(A, gamma, a, b):
    """
    sum_{a < n <= b} e(A * n**gamma) with unit weights.
    """
    n = np.arange(a + 1, b + 1, dtype=np.float64)
    angle = 2 * np.pi * _fractional(A * np.power(n, gamma))
    return complex(np.sum(np.cos(angle)), np.sum(np.sin(angle)))


def monomial_lambdas(A, gamma, a, b):
    """
    The smallest values of |f''| and |f'''| on [a, b] for f(t) = A t**gamma.

    Both derivatives are monotone in t for gamma < 2, so the minima sit at
    an endpoint.

    Returns:
        tuple: (lambda2, lambda3)
    """
    c2 = abs(A * gamma * (gamma - 1))
    c3 = abs(A * gamma * (gamma - 1) * (gamma - 2))
    lambda2 = min(c2 * a ** (gamma - 2), c2 * b ** (gamma - 2))
    lambda3 = min(c3 * a ** (gamma - 3), c3 * b ** (gamma - 3))
    return lambda2, lambda3


# ===================================================================
# Heath-Brown identity
# ===================================================================

@lru_cache(maxsize=65536)
def _ordered_factorizations(m, parts):
    """
    Number of ordered factorizations of m into `parts` factors.
    """
    if parts == 0:
        return 1 if m == 1 else 0
    count = 1
    for e in factorize(m).values():
        count *= comb(e + parts - 1, parts - 1)
    return count


@lru_cache(maxsize=65536)
def _mobius_products(m, parts, z):
    """
    Sum over ordered m = m_1 ... m_parts with every m_i <= z of the
    product of mu(m_i).
    """
    if parts == 0:
        return 1 if m == 1 else 0
    total = 0
    for first in divisors(m):
        if first > z:
            break
        mu = mobius(first)
        if mu:
            total += mu * _mobius_products(m // first, parts - 1, z)
    return total


@lru_cache(maxsize=65536)
def _log_coefficients(a, parts):
    """
    Sum over ordered a = n_1 ... n_parts of log(n_1), as ((p, multiple of
    log p), ...).
    """
    coefficients = {}
    for first in divisors(a):
        if first == 1:
            continue
        count = _ordered_factorizations(a // first, parts - 1)
        if not count:
            continue
        for p, e in factorize(first).items():
            coefficients[p] = coefficients.get(p, 0) + count * e
    return tuple(sorted(coefficients.items()))


def heath_brown(n, k, z):
    """
    The terms of the Heath-Brown identity

        Lambda(n) = sum_{j=1}^k (-1)**(j-1) C(k, j)
                    sum_{n_1 ... n_2j = n, n_{j+1..2j} <= z}
                    log(n_1) mu(n_{j+1}) ... mu(n_2j)

    valid for n <= 2 z**k. The inner sums are enumerated over ordered
    divisor chains and collected as integer multiples of log p, so
    cancellation is exact.

    Args:
        n (int): 2 <= n <= 10**5.
        k (int): 1 <= k <= 3.
        z (real): z >= 1.

    Returns:
        HBDecomposition: The k contributions.

    Raises:
        HypothesisViolated: If n > 2 z**k.
        TooManyFactorizations: Above the enumeration caps.
    """
    if not 1 <= k <= 3:
        raise ValueError('k must lie in [1, 3], got {}'.format(k))
    if z < 1:
        raise ValueError('z must be >= 1, got {}'.format(z))
    if n < 2:
        raise ValueError('n must be >= 2, got {}'.format(n))
    z_floor = int(math.floor(z))
    if n > 2 * z ** k:
        raise HypothesisViolated('n={} exceeds 2*z**k with z={}, k={}'.format(
            n, z, k))
    if n > HEATH_BROWN_MAX_N:
        raise TooManyFactorizations('n={} is above the enumeration cap {}'
                                    .format(n, HEATH_BROWN_MAX_N))
    work = sum(_ordered_factorizations(n, 2 * j) for j in range(1, k + 1))
    if work > HEATH_BROWN_MAX_TERMS:
        raise TooManyFactorizations('{} ordered factorizations of {} exceed '
                                    'the cap {}'.format(work, n,
                                                        HEATH_BROWN_MAX_TERMS))

    terms = []
    for j in range(1, k + 1):
        sign = (-1) ** (j - 1) * comb(k, j)
        coefficients = {}
        for b in divisors(n):
            weight = _mobius_products(b, j, z_floor)
            if not weight:
                continue
            for p, count in _log_coefficients(n // b, j):
                coefficients[p] = coefficients.get(p, 0) + sign * weight * count
        terms.append((j, math.fsum(c * math.log(p)
                                   for p, c in coefficients.items() if c)))
    return HBDecomposition(n=n, k=k, z=z, terms=terms)


def heath_brown_check(nmax, ks=(1, 2, 3), tolerance=1e-9):
    """
    Compare heath_brown() with Lambda(n) for 2 <= n <= nmax and z in
    {ceil((n/2)**(1/k)), n}.

    Returns:
        dict: cases checked, worst deviation and the failing cases.
    """
    checked, worst, failures = 0, 0.0, []
    for n in range(2, nmax + 1):
        expected = von_mangoldt(n)
        for k in ks:
            z_low = _ceil_root(n, k)
            for z in sorted({z_low, n}):
                deviation = abs(heath_brown(n, k, z).total - expected)
                checked += 1
                worst = max(worst, deviation)
                if deviation > tolerance:
                    failures.append({'n': n, 'k': k, 'z': z,
                                     'deviation': deviation})
    return {'nmax': nmax, 'checked': checked, 'max_deviation': worst,
            'failures': failures}


def _ceil_root(n, k):
    """
    ceil((n/2)**(1/k)), the smallest integer z with 2 z**k >= n.
    """
    z = max(int(round((n / 2) ** (1.0 / k))), 1)
    while 2 * z ** k < n:
        z += 1
    while z > 1 and 2 * (z - 1) ** k >= n:
        z -= 1
    return z


# ===================================================================
# Bound calculators
# ===================================================================

def vinogradov_bound(N, q):
    """
    (N q**(-1/2) + N**(4/5) + N**(1/2) q**(1/2)) (log N)**4.
    """
    if N < 3 or q < 1:
        raise ValueError('Need N >= 3 and q >= 1, got N={} q={}'.format(N, q))
    return ((N / math.sqrt(q) + N ** 0.8 + math.sqrt(N * q)) *
            math.log(N) ** 4)


def type_bound(M, h, tau, eps, eps_tail=None):
    """
    h**(1/2) M**(1 - 1/(2 tau) + eps) + M**(1 - eps_tail).

    The two epsilons play different roles and are independent; eps_tail
    defaults to eps.
    """
    if M < 2 or h < 1 or tau < 1 or not eps > 0:
        raise ValueError('Need M >= 2, h >= 1, tau >= 1, eps > 0')
    if eps_tail is None:
        eps_tail = eps
    return (math.sqrt(h) * M ** (1 - 1 / (2 * tau) + eps) +
            M ** (1 - eps_tail))


def ttr_bound_sum(H, M, tau, eps):
    """
    sum_{0 < h <= H} type_bound(M, h, tau, eps) / h.
    """
    return math.fsum(type_bound(M, h, tau, eps) / h
                     for h in range(1, int(H) + 1))


def deriv_bound_2(a, lambda2):
    """
    a lambda2**(1/2) + lambda2**(-1/2).
    """
    if a < 1 or not lambda2 > 0:
        raise ValueError('Need a >= 1 and lambda2 > 0')
    return a * math.sqrt(lambda2) + 1 / math.sqrt(lambda2)


def deriv_bound_3(a, lambda3):
    """
    a lambda3**(1/6) + lambda3**(-1/3).
    """
    if a < 1 or not lambda3 > 0:
        raise ValueError('Need a >= 1 and lambda3 > 0')
    return a * lambda3 ** (1 / 6) + lambda3 ** (-1 / 3)


def _check_bound_args(j, d, x, gamma):
    if j == 0:
        raise ZeroFrequency('The bounds need j != 0')
    if d < 1 or x < 2 or not 0 < gamma < 1:
        raise ValueError('Need d >= 1, x >= 2 and gamma in (0, 1)')


def type_I_terms(j, d, x, gamma, eps=None):
    _check_bound_args(j, d, x, gamma)
    eps = default_eps() if eps is None else eps
    j = abs(j)
    return OrderedDict([
        ('j^(1/6)d^(-1/6)x^(g/6+3/4+eps)',
         j ** (1 / 6) * d ** (-1 / 6) * x ** (gamma / 6 + 0.75 + eps)),
        ('j^(-1/3)d^(1/3)x^(1-g/3+eps)',
         j ** (-1 / 3) * d ** (1 / 3) * x ** (1 - gamma / 3 + eps)),
    ])


def type_II_terms(j, d, x, gamma):
    """
    The four terms of the Type II bound for x**(1/2) << K << x**(39/50).

    None of them depends on K.
    """
    _check_bound_args(j, d, x, gamma)
    j = abs(j)
    return OrderedDict([
        ('j^(1/4)d^(-1/4)x^(g/4+5/8)',
         j ** 0.25 * d ** -0.25 * x ** (gamma / 4 + 0.625)),
        ('j^(-1/4)d^(1/4)x^(1-g/4)',
         j ** -0.25 * d ** 0.25 * x ** (1 - gamma / 4)),
        ('x^(89/100)', x ** 0.89),
        ('j^(1/6)d^(-1/6)x^(g/6+3/4)',
         j ** (1 / 6) * d ** (-1 / 6) * x ** (gamma / 6 + 0.75)),
    ])


def combined_terms(j, d, x, gamma, eps=None):
    """
    The five terms of the bound for max_t |sum_{x/2<n<=t} Lambda(n) e(...)|,
    each carrying the factor x**eps.
    """
    _check_bound_args(j, d, x, gamma)
    eps = default_eps() if eps is None else eps
    scale = x ** eps
    j = abs(j)
    return OrderedDict([
        ('j^(1/6)d^(-1/6)x^(g/6+3/4)',
         scale * j ** (1 / 6) * d ** (-1 / 6) * x ** (gamma / 6 + 0.75)),
        ('j^(-1/3)d^(1/3)x^(1-g/3)',
         scale * j ** (-1 / 3) * d ** (1 / 3) * x ** (1 - gamma / 3)),
        ('j^(1/4)d^(-1/4)x^(g/4+5/8)',
         scale * j ** 0.25 * d ** -0.25 * x ** (gamma / 4 + 0.625)),
        ('j^(-1/4)d^(1/4)x^(1-g/4)',
         scale * j ** -0.25 * d ** 0.25 * x ** (1 - gamma / 4)),
        ('x^(89/100)', scale * x ** 0.89),
    ])


def type_I_bound(j, d, x, gamma, eps=None):
    return math.fsum(type_I_terms(j, d, x, gamma, eps).values())


def type_II_bound(j, d, x, gamma):
    return math.fsum(type_II_terms(j, d, x, gamma).values())


def combined_bound(j, d, x, gamma, eps=None):
    return math.fsum(combined_terms(j, d, x, gamma, eps).values())


def bound_terms(which, j, d, x, gamma, eps=None):
    """
    Per-term breakdown of the selected bound.
    """
    if which == 'type_I':
        return type_I_terms(j, d, x, gamma, eps)
    if which == 'type_II':
        return type_II_terms(j, d, x, gamma)
    if which == 'combined':
        return combined_terms(j, d, x, gamma, eps)
    raise ValueError('Unknown bound {!r}, expected one of {}'.format(
        which, ', '.join(BOUNDS)))


# ===================================================================
# Plumbing of the main argument
# ===================================================================

def H_param(x, eps):
    """
    H = x**eps, the truncation of the Vaaler expansion in the Beatty part.
    """
    return x ** eps


def J_param(x, gamma, eps, d):
    """
    J = x**(1 - gamma + eps) d, the truncation in the PS part.
    """
    return x ** (1 - gamma + eps) * d


def theta_h(a, h):
    """
    e(a h) - 1; its modulus is at most 2.
    """
    value = parse_real(a) * h
    frac = (value - Rational(certified_floor(value))).to_float()
    return complex(np.exp(2j * np.pi * frac)) - 1


def phi_j(j, d, gamma, t):
    """
    e(j/d ((t+1)**gamma - t**gamma)) - 1.
    """
    difference = math.expm1(gamma * math.log1p(1 / t)) * t ** gamma
    phase = j / d * difference
    return complex(np.exp(2j * np.pi * (phase - math.floor(phase)))) - 1


def phi_j_bound(j, d, gamma, t):
    """
    min(2, 2 pi |j| gamma t**(gamma-1) / d), the size of phi_j(t).
    """
    return min(2.0, 2 * math.pi * abs(j) * gamma * t ** (gamma - 1) / d)


def s21_exponent_table(gamma, D, x, eps=None):
    """
    The five D-weighted terms of the second error estimate, each scaled by
    x**(gamma - 1 + eps).

    Returns:
        OrderedDict: term label -> value, plus 'total'.
    """
    eps = default_eps() if eps is None else eps
    scale = x ** (gamma - 1 + eps)
    table = OrderedDict()
    for label, exponent in (('D x^(23/12-g)', 23 / 12),
                            ('D x^(5/3-g)', 5 / 3),
                            ('D x^(15/8-g)', 15 / 8),
                            ('D x^(7/4-g)', 7 / 4),
                            ('D x^(189/100-g)', 189 / 100)):
        table[label] = D * x ** (exponent - gamma) * scale
    table['total'] = math.fsum(table.values())
    return table


def empirical_vs_bound(spec, which='combined', eps=None):
    """
    Compare |exp_sum(spec)| with the selected bound at x = spec.hi.

    Raises:
        ZeroFrequency: For j = 0.
    """
    if spec.j == 0:
        raise ZeroFrequency('empirical_vs_bound needs j != 0')
    eps = default_eps() if eps is None else eps
    x = spec.hi
    terms = bound_terms(which, spec.j, spec.d, x, spec.gamma, eps)
    empirical = abs(exp_sum(spec))
    total = math.fsum(terms.values())
    meta = {
        'which': which,
        'eps': eps,
        'x': x,
        'H': H_param(x, eps),
        'J': J_param(x, spec.gamma, eps, spec.d),
        'phi_j': abs(phi_j(spec.j, spec.d, spec.gamma, max(x / 2, 1))),
        'phi_j_bound': phi_j_bound(spec.j, spec.d, spec.gamma, max(x / 2, 1)),
        'spec': spec.echo(),
    }
    return BoundReport(empirical=empirical, bound_terms=terms,
                       total_bound=total, ratio=empirical / total, meta=meta)


def derivative_test_suite(rng, count=100, a_range=(10 ** 2, 10 ** 4)):
    """
    Random unit-weight monomial sums on (a, 2a] against both derivative
    tests.

    Returns:
        list: dicts with the tuple (A, a, gamma), the empirical modulus and
        the ratios to deriv_bound_2 and deriv_bound_3.
    """
    rows = []
    for _ in range(count):
        a = int(10 ** rng.uniform(math.log10(a_range[0]),
                                  math.log10(a_range[1])))
        gamma = rng.uniform(0.2, 0.9)
        A = 10 ** rng.uniform(0, 3)
        lambda2, lambda3 = monomial_lambdas(A, gamma, a, 2 * a)
        empirical = abs(monomial_sum(A, gamma, a, 2 * a))
        rows.append({
            'A': A, 'a': a, 'gamma': gamma, 'empirical': empirical,
            'lambda2': lambda2, 'lambda3': lambda3,
            'ratio2': empirical / deriv_bound_2(a, lambda2),
            'ratio3': empirical / deriv_bound_3(a, lambda3),
        })
    return rows


# ===================================================================
# Bilinear sums and the reduction to Lambda
# ===================================================================

def _coefficients(kind, lo, hi, rng):
    n = np.arange(lo, hi + 1, dtype=np.int64)
    if kind == 'unit':
        return np.ones(len(n))
    if kind == 'log':
        return np.log(n.astype(np.float64))
    if kind == 'mobius':
        return sieve_segment(lo, hi).mobius.astype(np.float64)
    if kind == 'random':
        return rng.choice([-1.0, 1.0], len(n))
    raise ValueError('Unknown coefficient class {!r}, expected one of {}'
                     .format(kind, ', '.join(COEFFICIENT_CLASSES)))


BilinearSum = namedtuple('BilinearSum', 'value kind K L trivial')


def bilinear_sum(K, L, a_class, b_class, j, d, gamma, m1=0.0, rng=None):
    """
    sum_{K<k<=2K} sum_{L<l<=2L} a_k b_l e(j/d (k l)**gamma + m1 k l).

    The sum is of Type I when b is 'unit' or 'log', else of Type II.

    Returns:
        BilinearSum: The value, its type and the trivial bound
        sum |a_k| |b_l|.
    """
    if K < 1 or L < 1:
        raise ValueError('K and L must be >= 1')
    if K * L > 10 ** 8:
        raise RangeTooLarge('bilinear_sum is capped at K*L <= 10**8')
    rng = rng if rng is not None else np.random.default_rng(0)
    a = _coefficients(a_class, K + 1, 2 * K, rng)
    b = _coefficients(b_class, L + 1, 2 * L, rng)
    ell = np.arange(L + 1, 2 * L + 1, dtype=np.int64)
    real, imag = [], []
    for row, k in enumerate(range(K + 1, 2 * K + 1)):
        if not a[row]:
            continue
        angle = 2 * np.pi * _phase_array(k * ell, j, d, gamma, m1)
        real.append(a[row] * np.sum(b * np.cos(angle)))
        imag.append(a[row] * np.sum(b * np.sin(angle)))
    kind = 'I' if b_class in ('unit', 'log') else 'II'
    trivial = float(np.sum(np.abs(a)) * np.sum(np.abs(b)))
    return BilinearSum(complex(math.fsum(real), math.fsum(imag)), kind, K, L,
                       trivial)


def index_reduction_check(N, j, d, gamma, m1=0.0, N_prime=None):
    """
    Both sides of the reduction from primes to Lambda for the bounded
    function f(n) = e(j/d n**gamma + m1 n):

        |sum_{N<p<=N'} f(p)|  vs  max_{N<N1<=2N} |sum_{N<n<=N1}
                                   Lambda(n) f(n)| / log N + N**(1/2)

    Returns:
        dict: lhs, rhs, their ratio, and the N1 attaining the maximum.
    """
    if N < 2:
        raise ValueError('N must be >= 2, got {}'.format(N))
    N_prime = 2 * N if N_prime is None else N_prime
    if not N < N_prime <= 2 * N:
        raise ValueError('Need N < N_prime <= 2N')
    table = sieve_segment(N + 1, 2 * N)
    n = table.values()
    angle = 2 * np.pi * _phase_array(n, j, d, gamma, m1)
    f = np.exp(1j * angle)
    primes = table.is_prime & (n <= N_prime)
    lhs = abs(complex(np.sum(f[primes])))
    partial = np.abs(np.cumsum(table.lam * f))
    best = int(np.argmax(partial))
    rhs = float(partial[best]) / math.log(N) + math.sqrt(N)
    return {'N': N, 'N_prime': N_prime, 'lhs': lhs, 'rhs': rhs,
            'ratio': lhs / rhs, 'argmax_N1': int(n[best])}
