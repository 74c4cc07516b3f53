"""
Continued fractions, convergents and irrationality type estimates.

Rationals are expanded with Euclid's algorithm and quadratic irrationals
with the exact periodic (P + sqrt(N)) / Q recurrence. Adaptive values are
expanded from the two rational endpoints of a certified interval: the
quotients both endpoints agree on are certified.
"""
import logging
import math
from collections import namedtuple
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import PsBeattyError
from .exactreal import (PRECISION_CAP, PRECISION_START, PrecisionExhausted,
                        Quadratic, Rational, _floor_linear_surd,
                        fractional_distance, parse_real)

logger = logging.getLogger(__name__)


class RationalInput(PsBeattyError, ValueError):
    pass


class ContinuedFraction(namedtuple(
    'ContinuedFractionBase', 'value partial_quotients convergents period'
)):
    """
    The first partial quotients [a0; a1, a2, ...] of a real and their
    convergents p_k/q_k.

    `period` is (preperiod length, repeating block) once the expansion of a
    quadratic irrational has been seen to repeat, else None.
    """

    @property
    def terminated(self):
        """
        Whether the expansion ended because the value is rational.
        """
        if not isinstance(self.value, Rational):
            return False
        p, q = self.convergents[-1]
        return Fraction(p, q) == self.value.value

    def determinants(self):
        """
        p_k q_{k-1} - p_{k-1} q_k for k >= 1; each equals (-1)**(k-1).
        """
        pairs = self.convergents
        return [pairs[k][0] * pairs[k - 1][1] - pairs[k - 1][0] * pairs[k][1]
                for k in range(1, len(pairs))]


class TypeEstimate(namedtuple(
    'TypeEstimateBase', 'tau_hat witness search_bound'
)):
    """
    A finite-N proxy for the irrationality type of a real.

    `witness` is (q, ||q x||) for the convergent denominator q realising
    tau_hat, or None when no convergent qualified.
    """
    pass


def convergents_from_quotients(quotients):
    """
    Convergents p_k/q_k of [a0; a1, ...].

    Returns:
        list: (p_k, q_k) tuples.
    """
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    result = []
    for a in quotients:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        result.append((p, q))
    return result


def _euclid(fraction, K):
    quotients = []
    p, q = fraction.numerator, fraction.denominator
    while q and len(quotients) < K:
        a = p // q
        quotients.append(a)
        p, q = q, p - a * q
    return quotients


def _quadratic_expansion(x, K):
    """
    Exact expansion of a quadratic irrational.

    The state (P, Q) of x_k = (P + sqrt(N)) / Q repeats once the expansion
    becomes periodic; expansion continues past K (boundedly) to find it.

    Returns:
        tuple: (quotients, period or None)
    """
    P, Qc, L = x.integer_form()
    N = Qc * Qc * x.D
    if Qc < 0:
        P, L = -P, -L
    # Make Q divide N - P^2 so the recurrence stays integral.
    if (N - P * P) % L:
        P, N, L = P * abs(L), N * L * L, L * abs(L)

    quotients = []
    seen = {}
    period = None
    limit = 5 * K + 64
    while len(quotients) < K or (period is None and len(quotients) < limit):
        state = (P, L)
        if period is None and state in seen:
            start = seen[state]
            period = (start, tuple(quotients[start:]))
            if len(quotients) >= K:
                break
        seen.setdefault(state, len(quotients))
        if L > 0:
            a = _floor_linear_surd(P, 1, N, L)
        else:
            a = _floor_linear_surd(-P, -1, N, -L)
        quotients.append(a)
        P = a * L - P
        L = (N - P * P) // L
    return quotients[:K], period


def _mpf_to_fraction(value):
    sign, man, exp, _ = value._mpf_
    if sign:
        man = -man
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def _interval_expansion(x, K, cap):
    prec = PRECISION_START
    while prec <= cap:
        interval = x.interval(prec)
        lo = _euclid(_mpf_to_fraction(interval.lo), K + 2)
        hi = _euclid(_mpf_to_fraction(interval.hi), K + 2)
        common = 0
        while (common < min(len(lo), len(hi)) and
               lo[common] == hi[common]):
            common += 1
        # The last shared quotient can still differ inside the interval.
        certified = max(common - 1, 0)
        if certified >= K:
            return lo[:K]
        prec *= 2
    raise PrecisionExhausted(
        'Could not certify {} partial quotients of {} at {} bits'.format(
            K, x, cap))


@lru_cache(maxsize=256)
def _cf_expand_cached(x, K, cap):
    if isinstance(x, Rational):
        quotients, period = _euclid(x.value, K), None
    elif isinstance(x, Quadratic):
        quotients, period = _quadratic_expansion(x, K)
    else:
        quotients, period = _interval_expansion(x, K, cap), None
    return ContinuedFraction(
        value=x,
        partial_quotients=tuple(quotients),
        convergents=tuple(convergents_from_quotients(quotients)),
        period=period,
    )


def cf_expand(x, K, cap=PRECISION_CAP):
    """
    First K partial quotients and convergents of x.

    Args:
        x (CertifiedReal|str): The value.
        K (int): Number of partial quotients, >= 1.
        cap (int): Precision cap for adaptive values.

    Returns:
        ContinuedFraction: The (possibly shorter, for rationals) expansion.

    Raises:
        PrecisionExhausted: If an adaptive value cannot be certified.
    """
    if K < 1:
        raise ValueError('K must be >= 1, got {}'.format(K))
    return _cf_expand_cached(parse_real(x), K, cap)


def _expand_past(x, M):
    """
    Expand x until a convergent denominator exceeds M (or x terminates).
    """
    K = 8
    while True:
        cf = cf_expand(x, K)
        if cf.convergents[-1][1] > M or len(cf.partial_quotients) < K:
            return cf
        K *= 2


def best_convergent_below(x, M):
    """
    The convergent p/q of x with the largest denominator q <= M.

    Then |x - p/q| <= 1/(qM) unless p/q = x.

    Returns:
        tuple: (p, q)
    """
    if M < 1:
        raise ValueError('M must be >= 1, got {}'.format(M))
    x = parse_real(x)
    cf = _expand_past(x, M)
    best = cf.convergents[0]
    for p, q in cf.convergents:
        if q > M:
            break
        best = (p, q)
    return best


def type_estimate(x, N):
    """
    Estimate the irrationality type of x from its convergents.

    tau_hat is the maximum of log(q_{k+1}) / log(q_k) over convergent
    denominators sqrt(N) <= q_k <= N, since ||q_k x|| is of order
    1/q_{k+1}. The first few quotients say nothing about the type and are
    left out; when no denominator falls in that range the largest one
    below N is used.

    Args:
        x (CertifiedReal|str): An irrational value.
        N (int): Search bound, >= 10.

    Returns:
        TypeEstimate: The estimate and its witness.

    Raises:
        RationalInput: For rational x.
    """
    x = parse_real(x)
    if isinstance(x, Rational):
        raise RationalInput('type_estimate needs an irrational, got '
                            '{}'.format(x))
    if N < 10:
        raise ValueError('N must be >= 10, got {}'.format(N))
    cf = _expand_past(x, N)
    tau_hat, witness = 1.0, None
    denominators = [q for _, q in cf.convergents]
    pairs = [(q, q_next) for q, q_next in zip(denominators, denominators[1:])
             if 2 <= q <= N]
    tail = [pair for pair in pairs if pair[0] * pair[0] >= N]
    if not tail and pairs:
        tail = pairs[-1:]
    for q, q_next in tail:
        ratio = math.log(q_next) / math.log(q)
        if ratio > tau_hat:
            tau_hat = ratio
            witness = (q, float(fractional_distance(x * q).to_mpf(64)))
    return TypeEstimate(tau_hat=tau_hat, witness=witness, search_bound=N)


def fractional_distance_array(x, n):
    """
    ||x n|| for an array of positive integers n.

    x is split into a head with few enough bits that n * head is exact in
    double precision, plus a small tail.

    Returns:
        numpy.ndarray: Distances to the nearest integer.
    """
    x = parse_real(x)
    n = np.asarray(n, dtype=np.int64)
    bits = max(52 - int(n.max()).bit_length(), 8) if len(n) else 52
    scaled = math.floor(x.to_float() * 2 ** bits)
    tail = (x - Rational(Fraction(scaled, 2 ** bits))).to_float()
    whole = scaled % (2 ** bits)
    # n * whole / 2**bits exactly, reduced mod 1 with integer arithmetic.
    frac_head = ((n * whole) % (2 ** bits)).astype(np.float64) / 2 ** bits
    frac = np.mod(frac_head + n.astype(np.float64) * tail, 1.0)
    return np.minimum(frac, 1.0 - frac)


def type_inequality_constant(x, rho, N):
    """
    min over 1 <= n <= N of ||x n|| * n**rho, the best constant c with
    ||x n|| > c n**(-rho) at scale N.

    Raises:
        RationalInput: For rational x.
    """
    x = parse_real(x)
    if isinstance(x, Rational):
        raise RationalInput('type_inequality_constant needs an irrational')
    if N < 1:
        raise ValueError('N must be >= 1, got {}'.format(N))
    n = np.arange(1, N + 1, dtype=np.int64)
    values = fractional_distance_array(x, n) * np.power(
        n.astype(np.float64), rho)
    return float(values.min())


def type_closure_check(x, N, multipliers=(1, 2, 3)):
    """
    Type estimates of x, 1/x and n/x side by side.

    Returns:
        dict: label -> tau_hat.
    """
    x = parse_real(x)
    result = {'x': type_estimate(x, N).tau_hat}
    for n in multipliers:
        result['{}/x'.format(n)] = type_estimate(Rational(n) / x, N).tau_hat
    return result


def ttr_denominator_bound(constant, rho, h, M, eta):
    """
    C0 / h * M**(1/rho - eta/rho) with C0 = constant**(1/rho): the lower
    bound on the denominator of the convergent chosen for a*h.
    """
    return constant ** (1.0 / rho) / h * M ** ((1.0 - eta) / rho)


def ttr_convergent(a, h, M, eta):
    """
    The convergent b/d of a*h with the largest d <= M**(1-eta).

    Returns:
        dict: b, d, the cap M**(1-eta), and |a h - b/d| * d * M**(1-eta)
        which is at most 1.
    """
    a = parse_real(a)
    cap = max(int(M ** (1.0 - eta)), 1)
    b, d = best_convergent_below(a * h, cap)
    error = abs(((a * h) - Rational(Fraction(b, d))).to_float())
    return {'b': b, 'd': d, 'cap': cap, 'scaled_error': error * d * cap}
