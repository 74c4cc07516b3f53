"""
Segmented sieves and the arithmetic functions Lambda, mu and Omega.

A SieveTable holds exact primality and factor data for an integer window.
Single values outside any table are handled by trial division with sieved
primes (up to 10**12), and primality of larger values by sympy's
deterministic test.
"""
import logging
import math
from functools import lru_cache

import numpy as np
from sympy import isprime

from .constants import SIEVE_MAX_WINDOW, SIEVE_SEGMENT, TRIAL_DIVISION_LIMIT
from .errors import PsBeattyError

logger = logging.getLogger(__name__)

MAX_WINDOW_VALUE = 2 ** 63 - 1

# Values up to this bound are factored from a cached smallest-prime-factor
# table.
SPF_LIMIT = 10 ** 6


class WindowTooLarge(PsBeattyError):
    pass


def simple_sieve(limit):
    """
    Primes up to `limit` with a plain sieve of Eratosthenes.

    Returns:
        numpy.ndarray: int64 array of primes <= limit.
    """
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


@lru_cache(maxsize=8)
def _base_primes(limit):
    primes = simple_sieve(limit)
    primes.flags.writeable = False
    return primes


def _segment_is_prime(lo, hi, base):
    mask = np.ones(hi - lo + 1, dtype=bool)
    if lo < 2:
        mask[:2 - lo] = False
    for p in base:
        p = int(p)
        if p * p > hi:
            break
        start = max(p * p, -(-lo // p) * p)
        if start <= hi:
            mask[start - lo::p] = False
    return mask


def primes_up_to(x, segment=SIEVE_SEGMENT * 8):
    """
    All primes <= x, sieved segment by segment.

    Args:
        x (int): Upper bound.
        segment (int): Segment length.

    Returns:
        numpy.ndarray: int64 array of primes.
    """
    if x < 2:
        return np.array([], dtype=np.int64)
    base = _base_primes(math.isqrt(x) + 1)
    chunks = []
    lo = 2
    while lo <= x:
        hi = min(lo + segment - 1, x)
        mask = _segment_is_prime(lo, hi, base)
        chunks.append(np.flatnonzero(mask).astype(np.int64) + lo)
        lo = hi + 1
    return np.concatenate(chunks)


def primes_in(lo, hi):
    """
    The primes of the window [lo, hi] as an int64 array.
    """
    lo = max(lo, 2)
    if hi < lo:
        return np.array([], dtype=np.int64)
    base = _base_primes(math.isqrt(hi) + 1)
    return np.flatnonzero(_segment_is_prime(lo, hi, base)).astype(np.int64) + lo


def prime_count(x):
    """
    pi(x), the number of primes <= x.
    """
    if x < 2:
        return 0
    base = _base_primes(math.isqrt(x) + 1)
    count = 0
    lo = 2
    segment = SIEVE_SEGMENT * 8
    while lo <= x:
        hi = min(lo + segment - 1, x)
        count += int(np.count_nonzero(_segment_is_prime(lo, hi, base)))
        lo = hi + 1
    return count


class SieveTable(object):
    """
    Exact primality and factor data for every n in the window [lo, hi].

    The table stores, per element, whether it is prime, Omega(n), mu(n) and
    Lambda(n). Arrays are read-only once built.
    """

    def __init__(self, lo, hi, is_prime, omega, mobius, lam):
        """
        Create a table from precomputed arrays; use build_sieve() instead.

        Args:
            lo (int): First value of the window.
            hi (int): Last value of the window.
            is_prime (numpy.ndarray): Booleans.
            omega (numpy.ndarray): Omega(n) per element.
            mobius (numpy.ndarray): mu(n) per element.
            lam (numpy.ndarray): Lambda(n) per element (natural log).
        """
        self.lo = lo
        self.hi = hi
        self.is_prime = is_prime
        self.omega = omega
        self.mobius = mobius
        self.lam = lam

        for array in (is_prime, omega, mobius, lam):
            assert len(array) == hi - lo + 1
            array.flags.writeable = False

    def __repr__(self):
        return '<SieveTable(window=[{}, {}], primes={})>'.format(
            self.lo, self.hi, int(np.count_nonzero(self.is_prime)))

    def __len__(self):
        return self.hi - self.lo + 1

    def __contains__(self, n):
        return self.lo <= n <= self.hi

    def _index(self, n):
        if n not in self:
            raise KeyError('{} outside window [{}, {}]'.format(
                n, self.lo, self.hi))
        return n - self.lo

    def is_prime_at(self, n):
        return bool(self.is_prime[self._index(n)])

    def omega_at(self, n):
        return int(self.omega[self._index(n)])

    def mobius_at(self, n):
        return int(self.mobius[self._index(n)])

    def lambda_at(self, n):
        return float(self.lam[self._index(n)])

    def primes(self):
        """
        Returns:
            numpy.ndarray: The primes of the window, ascending.
        """
        return np.flatnonzero(self.is_prime).astype(np.int64) + self.lo

    def values(self):
        return np.arange(self.lo, self.hi + 1, dtype=np.int64)

    def prime_count_upto(self, x):
        """
        Number of primes in [lo, x] (x clipped to the window).
        """
        if x < self.lo:
            return 0
        end = min(x, self.hi) - self.lo + 1
        return int(np.count_nonzero(self.is_prime[:end]))

    def equals(self, other):
        """
        Bit-identical comparison of two tables.
        """
        return (
            self.lo == other.lo and self.hi == other.hi and
            np.array_equal(self.is_prime, other.is_prime) and
            np.array_equal(self.omega, other.omega) and
            np.array_equal(self.mobius, other.mobius) and
            np.array_equal(self.lam, other.lam)
        )

    @classmethod
    def concat(cls, tables):
        """
        Join tables of adjacent windows into one table.

        Args:
            tables (list): SieveTables ordered by window, without gaps.

        Returns:
            SieveTable: The combined table.
        """
        tables = list(tables)
        for left, right in zip(tables, tables[1:]):
            if left.hi + 1 != right.lo:
                raise ValueError('Windows [{}, {}] and [{}, {}] are not '
                                 'adjacent'.format(left.lo, left.hi,
                                                   right.lo, right.hi))
        return cls(
            tables[0].lo, tables[-1].hi,
            np.concatenate([t.is_prime for t in tables]),
            np.concatenate([t.omega for t in tables]),
            np.concatenate([t.mobius for t in tables]),
            np.concatenate([t.lam for t in tables]),
        )


def sieve_segment(lo, hi):
    """
    Build the factor data of one window in a single pass.

    Every prime p <= sqrt(hi) divides out its powers from the multiples in
    the window; whatever is left above 1 is one large prime factor.

    Returns:
        SieveTable: The table of [lo, hi].
    """
    base = _base_primes(math.isqrt(hi) + 1)
    size = hi - lo + 1
    rest = np.arange(lo, hi + 1, dtype=np.int64)
    omega = np.zeros(size, dtype=np.int16)
    distinct = np.zeros(size, dtype=np.int16)
    mobius = np.ones(size, dtype=np.int8)
    last_prime = np.ones(size, dtype=np.int64)

    for p in base:
        p = int(p)
        if p * p > hi:
            break
        first = -(-lo // p) * p - lo
        if first >= size:
            continue
        mobius[first::p] *= -1
        distinct[first::p] += 1
        last_prime[first::p] = p
        pk = p
        while pk <= hi:
            offset = -(-lo // pk) * pk - lo
            if offset >= size:
                break
            rest[offset::pk] //= p
            omega[offset::pk] += 1
            if pk > p:
                mobius[offset::pk] = 0
            pk *= p

    large = rest > 1
    omega[large] += 1
    distinct[large] += 1
    mobius[large] *= -1
    last_prime[large] = rest[large]

    values = np.arange(lo, hi + 1, dtype=np.int64)
    is_prime = (omega == 1) & (values >= 2)
    lam = np.where(distinct == 1, np.log(last_prime.astype(np.float64)), 0.0)
    return SieveTable(lo, hi, is_prime, omega, mobius, lam)


def build_sieve(lo, hi, segment=SIEVE_SEGMENT, runner=None):
    """
    Build a SieveTable for [lo, hi] from segments.

    Args:
        lo (int): Window start, >= 2 (1 is accepted and has Omega=0, mu=1).
        hi (int): Window end, <= 2**63 - 1.
        segment (int): Segment length.
        runner (PoolRunner): Optional runner to build segments in parallel.

    Returns:
        SieveTable: The combined table.

    Raises:
        WindowTooLarge: If the window exceeds the configured memory cap.
    """
    if lo < 1 or hi < lo or hi > MAX_WINDOW_VALUE:
        raise ValueError('Invalid sieve window [{}, {}]'.format(lo, hi))
    if hi - lo + 1 > SIEVE_MAX_WINDOW:
        raise WindowTooLarge('Window [{}, {}] exceeds {} values'.format(
            lo, hi, SIEVE_MAX_WINDOW))

    bounds = []
    start = lo
    while start <= hi:
        end = min(start + segment - 1, hi)
        bounds.append((start, end))
        start = end + 1

    if runner is not None:
        tables = runner.map_segments(sieve_segment, bounds)
    else:
        tables = [sieve_segment(a, b) for a, b in bounds]

    logger.debug('Sieved [{}, {}] in {} segments'.format(lo, hi, len(bounds)))
    if len(tables) == 1:
        return tables[0]
    return SieveTable.concat(tables)


@lru_cache(maxsize=1)
def _spf_table():
    spf = np.zeros(SPF_LIMIT + 1, dtype=np.int64)
    for p in simple_sieve(SPF_LIMIT):
        p = int(p)
        untouched = spf[p::p] == 0
        spf[p::p][untouched] = p
    spf.flags.writeable = False
    return spf


def factorize(n):
    """
    Factor n into primes.

    Uses the smallest-prime-factor table for n <= 10**6 and trial division
    by sieved primes up to 10**12.

    Returns:
        dict: {prime: exponent}
    """
    if n < 1:
        raise ValueError('factorize needs n >= 1, got {}'.format(n))
    factors = {}
    if n <= SPF_LIMIT:
        spf = _spf_table()
        while n > 1:
            p = int(spf[n])
            factors[p] = factors.get(p, 0) + 1
            n //= p
        return factors
    if n > TRIAL_DIVISION_LIMIT:
        raise ValueError('{} is beyond the trial division limit {}'.format(
            n, TRIAL_DIVISION_LIMIT))
    for p in _base_primes(math.isqrt(TRIAL_DIVISION_LIMIT) + 1):
        p = int(p)
        if p * p > n:
            break
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def is_prime(n):
    """
    Primality of a single integer (deterministic for 64-bit values).
    """
    if n <= SPF_LIMIT:
        return n >= 2 and int(_spf_table()[n]) == n
    return bool(isprime(n))


def von_mangoldt(n):
    """
    Lambda(n): log p if n = p^k, else 0.
    """
    factors = factorize(n)
    if len(factors) == 1:
        return math.log(next(iter(factors)))
    return 0.0


def mobius(n):
    """
    mu(n) in {-1, 0, 1}.
    """
    factors = factorize(n)
    if any(k > 1 for k in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def big_omega(n):
    """
    Omega(n), the number of prime factors counted with multiplicity.
    """
    return sum(factorize(n).values())


def is_almost_prime(n, R):
    """
    Whether n is an R-almost prime, i.e. Omega(n) <= R.
    """
    if R < 0:
        raise ValueError('R must be non-negative, got {}'.format(R))
    return big_omega(n) <= R


def divisor_count(n):
    count = 1
    for k in factorize(n).values():
        count *= k + 1
    return count


def divisors(n):
    """
    All positive divisors of n in ascending order.
    """
    result = [1]
    for p, k in factorize(n).items():
        result = [d * p ** e for d in result for e in range(k + 1)]
    return sorted(result)


def chebyshev_psi(x):
    """
    Chebyshev's psi(x) = sum of Lambda(n) over n <= x.
    """
    if x < 2:
        return 0.0
    return float(math.fsum(build_sieve(2, x).lam))
