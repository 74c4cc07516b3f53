"""
Beatty and Piatetski-Shapiro sequences and their membership indicators.

Both indicators are differences of two floors of certified reals, so they
only ever return 0 or 1. The *_array variants evaluate many indices at once
in floating point and re-floor every value near an integer exactly.
"""
import logging
import math
from collections import namedtuple

import mpmath
import numpy as np

from .arith import SieveTable, primes_up_to
from .errors import PsBeattyError
from .exactreal import (Rational, certified_floor, certified_floor_array,
                        floor_power, floor_root_power, parse_real, power)

logger = logging.getLogger(__name__)


class RationalAlphaRejected(PsBeattyError, ValueError):
    pass


class BeattyParams(namedtuple('BeattyParamsBase', 'alpha beta a')):
    """
    Parameters of the Beatty sequence floor(alpha*n + beta).

    Usage::

        params = BeattyParams('sqrt(2)', 0)
        params.a  # 1/alpha, exact when alpha is rational or quadratic
    """

    def __new__(cls, alpha, beta=0):
        alpha = parse_real(alpha)
        beta = parse_real(beta)
        if not alpha > 1:
            raise ValueError('Beatty alpha must exceed 1, got {}'.format(
                alpha))
        return super().__new__(cls, alpha, beta, Rational(1) / alpha)

    def __getnewargs__(self):
        return self.alpha, self.beta

    @property
    def alpha_float(self):
        return self.alpha.to_float()

    @property
    def beta_float(self):
        return self.beta.to_float()

    @property
    def a_float(self):
        return self.a.to_float()

    def echo(self):
        return {'alpha': self.alpha.text(), 'beta': self.beta.text()}


class PSParams(namedtuple('PSParamsBase', 'c gamma exact_rational')):
    """
    Parameters of the Piatetski-Shapiro sequence floor(n**c), gamma = 1/c.
    """

    def __new__(cls, c):
        c = parse_real(c)
        if not c > 1:
            raise ValueError('PS exponent c must exceed 1, got {}'.format(c))
        exact_rational = isinstance(c, Rational)
        if exact_rational and c.q == 1:
            raise ValueError('PS exponent c must not be an integer, got '
                             '{}'.format(c))
        return super().__new__(cls, c, Rational(1) / c, exact_rational)

    def __getnewargs__(self):
        return (self.c,)

    @property
    def gamma_float(self):
        return self.gamma.to_float()

    @property
    def c_float(self):
        return self.c.to_float()

    def echo(self):
        return {'c': self.c.text()}


def _certified(value):
    return certified_floor(value)


# ===================================================================
# Beatty sequence
# ===================================================================

def beatty_term(params, n):
    """
    floor(alpha*n + beta).
    """
    if n < 1:
        raise ValueError('Beatty index must be >= 1, got {}'.format(n))
    return _certified(params.alpha * n + params.beta)


def beatty_terms_array(params, N):
    """
    The first N Beatty terms as an int64 array.
    """
    n = np.arange(1, N + 1, dtype=np.float64)
    approx = params.alpha_float * n + params.beta_float
    return certified_floor_array(
        approx, lambda i: beatty_term(params, i + 1))


def _beatty_floor(params, m):
    # floor(-a*(m - beta))
    return _certified(-(params.a * (m - params.beta)))


def beatty_indicator(params, m):
    """
    chi_{alpha,beta}(m) = floor(-a(m-beta)) - floor(-a(m+1-beta)).

    The value is 1 exactly when some integer n satisfies
    a(m-beta) <= n < a(m-beta) + a. That n may be <= 0; use
    is_beatty_member() to require n >= 1.

    Returns:
        int: 0 or 1.
    """
    value = _beatty_floor(params, m) - _beatty_floor(params, m + 1)
    assert value in (0, 1), (params, m, value)
    return value


def beatty_indicator_array(params, ms):
    """
    beatty_indicator() over an integer array.

    Returns:
        numpy.ndarray: int64 array of 0/1 values.
    """
    ms = np.asarray(ms, dtype=np.int64)
    if len(ms) == 0:
        return np.zeros(0, dtype=np.int64)
    a, beta = params.a_float, params.beta_float
    lower = -a * (ms.astype(np.float64) - beta)
    upper = -a * (ms.astype(np.float64) + 1.0 - beta)
    f1 = certified_floor_array(
        lower, lambda i: _beatty_floor(params, int(ms[i])))
    f2 = certified_floor_array(
        upper, lambda i: _beatty_floor(params, int(ms[i]) + 1))
    values = f1 - f2
    assert np.all((values == 0) | (values == 1))
    return values


def beatty_index(params, m):
    """
    The integer n with floor(alpha*n + beta) = m, or None.
    """
    if not beatty_indicator(params, m):
        return None
    return -_beatty_floor(params, m)


def membership_threshold(params):
    """
    ceil(alpha + beta); every m at or above it with chi(m) = 1 has n >= 1.
    """
    return -_certified(-(params.alpha + params.beta))


def is_beatty_member(params, m, require_positive_index=True):
    """
    Whether m = floor(alpha*n + beta) for some n (n >= 1 by default).
    """
    n = beatty_index(params, m)
    if n is None:
        return False
    return n >= 1 or not require_positive_index


def beatty_members(params, M, require_positive_index=True):
    """
    Generator-side membership: {floor(alpha*n + beta) <= M}.

    Args:
        params (BeattyParams): The sequence.
        M (int): Upper bound on the terms.
        require_positive_index (bool): Only n >= 1 when True; otherwise
            every integer n whose term lies in [1, M].

    Returns:
        set: The terms.
    """
    members = set()
    n = 1 if require_positive_index else _certified(
        (1 - params.beta) * params.a) - 1
    while True:
        term = _certified(params.alpha * n + params.beta)
        if term > M:
            break
        if term >= 1:
            members.add(term)
        n += 1
    return members


def beatty_psi_form(params, p):
    """
    a + psi(-a(p+1-beta)) - psi(-a(p-beta)), which equals chi(p).

    Raises:
        RationalAlphaRejected: For rational alpha, where the expansion is
            not used.

    Returns:
        float: The evaluated right-hand side.
    """
    if isinstance(params.alpha, Rational):
        raise RationalAlphaRejected(
            'beatty_psi_form needs irrational alpha, got {}'.format(
                params.alpha))
    u = -(params.a * (p + 1 - params.beta))
    v = -(params.a * (p - params.beta))
    half = Rational(1, 2)
    psi_u = u - certified_floor(u) - half
    psi_v = v - certified_floor(v) - half
    return float((params.a + psi_u - psi_v).to_mpf(128))


def beatty_prime_count(params, primes):
    """
    #{p in primes : chi_{alpha,beta}(p) = 1}.

    Args:
        params (BeattyParams): The sequence.
        primes (numpy.ndarray): Primes to test.

    Returns:
        int: The count.
    """
    return int(np.sum(beatty_indicator_array(params, primes)))


# ===================================================================
# Piatetski-Shapiro sequence
# ===================================================================

def ps_term(params, n):
    """
    floor(n**c).
    """
    if n < 1:
        raise ValueError('PS index must be >= 1, got {}'.format(n))
    if params.exact_rational:
        return floor_power(n, params.c)
    return _certified(power(Rational(n), params.c))


def ps_terms_array(params, N):
    """
    The first N PS terms as an int64 array.
    """
    n = np.arange(1, N + 1, dtype=np.float64)
    approx = np.power(n, params.c_float)
    return certified_floor_array(approx, lambda i: ps_term(params, i + 1))


def _ceil_gamma_power(params, m):
    """
    ceil(m**gamma), exactly.
    """
    if params.exact_rational:
        num, den = params.gamma.p, params.gamma.q
        r = floor_root_power(m, num, den)
        return r if r ** den == m ** num else r + 1
    return -_certified(-power(Rational(m), params.gamma))


def ps_indicator(params, m):
    """
    chi^(c)(m) = floor(-m**gamma) - floor(-(m+1)**gamma).

    Returns:
        int: 1 if m = floor(n**c) for some n >= 1, else 0.
    """
    if m < 1:
        raise ValueError('PS indicator needs m >= 1, got {}'.format(m))
    value = _ceil_gamma_power(params, m + 1) - _ceil_gamma_power(params, m)
    assert value in (0, 1), (params, m, value)
    return value


def _neg_power_floor_array(params, ms, shift):
    values = ms + shift
    approx = -np.power(values.astype(np.float64), params.gamma_float)
    return certified_floor_array(
        approx, lambda i: -_ceil_gamma_power(params, int(values[i])))


def ps_indicator_array(params, ms):
    """
    ps_indicator() over an integer array.

    Returns:
        numpy.ndarray: int64 array of 0/1 values.
    """
    ms = np.asarray(ms, dtype=np.int64)
    if len(ms) == 0:
        return np.zeros(0, dtype=np.int64)
    values = (_neg_power_floor_array(params, ms, 0) -
              _neg_power_floor_array(params, ms, 1))
    assert np.all((values == 0) | (values == 1))
    return values


def gamma_power_ceil_array(params, ms):
    """
    ceil(m**gamma) over an integer array, exactly.
    """
    ms = np.asarray(ms, dtype=np.int64)
    if len(ms) == 0:
        return np.zeros(0, dtype=np.int64)
    return -_neg_power_floor_array(params, ms, 0)


def ps_members(params, M):
    """
    Generator-side membership: {floor(n**c) <= M : n >= 1}.
    """
    N = int(M ** params.gamma_float) + 2
    terms = ps_terms_array(params, N)
    return set(int(t) for t in terms if t <= M)


def ps_residual_bound(params, m):
    """
    gamma(1-gamma)/2 * m**(gamma-2), the Taylor bound of the PS expansion.
    """
    gamma = params.gamma_float
    return gamma * (1 - gamma) / 2 * m ** (gamma - 2)


def ps_expansion_residual(params, m, prec=160):
    """
    chi(m) - gamma*m**(gamma-1) - psi(-(m+1)**gamma) + psi(-m**gamma).

    Floors are taken exactly, the smooth parts at `prec` bits.

    Returns:
        float: The residual; |residual| <= ps_residual_bound(params, m).
    """
    if m < 2:
        raise ValueError('ps_expansion_residual needs m >= 2')
    chi = ps_indicator(params, m)
    f_m = -_ceil_gamma_power(params, m)
    f_m1 = -_ceil_gamma_power(params, m + 1)
    with mpmath.workprec(prec):
        gamma = params.gamma.to_mpf(prec)
        y_m = mpmath.power(m, gamma)
        y_m1 = mpmath.power(m + 1, gamma)
        psi_m = -y_m - f_m - mpmath.mpf(1) / 2
        psi_m1 = -y_m1 - f_m1 - mpmath.mpf(1) / 2
        residual = chi - gamma * mpmath.power(m, gamma - 1) - psi_m1 + psi_m
        return float(residual)


def ps_prime_values(params, x, primes=None):
    """
    The distinct primes among {floor(n**c) <= x}, counted from the
    generator side.

    Args:
        params (PSParams): The sequence.
        x (int): Upper bound.
        primes (SieveTable): Optional table covering [.., x].

    Returns:
        numpy.ndarray: Sorted distinct prime values.
    """
    if x < 2:
        return np.zeros(0, dtype=np.int64)
    N = int(x ** params.gamma_float) + 2
    terms = ps_terms_array(params, N)
    terms = terms[terms <= x]
    if isinstance(primes, SieveTable) and primes.lo <= 2 and primes.hi >= x:
        mask = primes.is_prime[terms - primes.lo]
    else:
        prime_array = primes_up_to(x)
        mask = np.isin(terms, prime_array)
    return np.unique(terms[mask])


def pi_c_count(params, x, primes=None):
    """
    pi^(c)(x) = sum over primes p <= x of chi^(c)(p).

    Args:
        params (PSParams): The sequence.
        x (int): Upper bound.
        primes (SieveTable|numpy.ndarray): Optional primes covering [2, x].

    Returns:
        int: The count.
    """
    if x < 2:
        return 0
    prime_array = _primes_upto(x, primes)
    return int(np.sum(ps_indicator_array(params, prime_array)))


def pi_c_asymptotic(params, x):
    """
    x**gamma / log x.
    """
    return x ** params.gamma_float / math.log(x)


def _primes_upto(x, primes):
    if isinstance(primes, SieveTable):
        if primes.lo > 2 or primes.hi < x:
            raise ValueError('Sieve table [{}, {}] does not cover [2, {}]'
                             .format(primes.lo, primes.hi, x))
        prime_array = primes.primes()
    elif primes is not None:
        prime_array = np.asarray(primes, dtype=np.int64)
    else:
        prime_array = primes_up_to(x)
    return prime_array[prime_array <= x]
