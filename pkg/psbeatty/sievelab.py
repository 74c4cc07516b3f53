"""
The sieve experiment on primes in both sequences with almost-prime indices.

The sieved set is

    A = {n : p = floor(n**c) <= x, p prime, p in the Beatty sequence}

and its slices A_d = {n in A : d | n} are counted twice: directly from the
generator side, and dually as a sum over primes p <= x of the number of
multiples of d in [p**gamma, (p+1)**gamma). The two counts must agree.
"""
import logging
import math
from collections import namedtuple
from fractions import Fraction
from functools import partial

import numpy as np

from .arith import primes_in, sieve_segment
from .constants import (BUILD_A_MAX_X, DEFAULT_EPS, DELTA_R, S2_LEVEL,
                        S3_LEVEL, SIEVE_SEGMENT)
from .errors import InvariantViolation
from .exactreal import (Rational, certified_compare, certified_floor,
                        parse_real)
from .expsum import RangeTooLarge
from .runners.pool_runner import split_range
from .seq import (BeattyParams, PSParams, beatty_indicator_array,
                  gamma_power_ceil_array, ps_terms_array)

logger = logging.getLogger(__name__)

BOUNDARY_CONVENTION = 'n admitted iff floor(n**c) <= x (exact integer floor)'


class MismatchedCounts(InvariantViolation):
    """
    The direct and dual counts of a slice A_d disagree.
    """
    def __init__(self, message, d=None, direct=None, dual=None):
        super().__init__(message)
        self.d = d
        self.direct = direct
        self.dual = dual


class ExperimentConfig(namedtuple(
    'ExperimentConfigBase', 'x beatty ps R D eps'
)):
    """
    Parameters of one run of the sieve experiment.

    Usage::

        config = ExperimentConfig(10 ** 6, BeattyParams('sqrt(2)'),
                                  PSParams('25/24'), R=21, D=30)
    """

    def __new__(cls, x, beatty, ps, R=21, D=1, eps=DEFAULT_EPS):
        if not isinstance(beatty, BeattyParams):
            beatty = BeattyParams(*beatty)
        if not isinstance(ps, PSParams):
            ps = PSParams(ps)
        x, R, D = int(x), int(R), int(D)
        if x < 2:
            raise ValueError('x must be >= 2, got {}'.format(x))
        if R < 1:
            raise ValueError('R must be >= 1, got {}'.format(R))
        if D < 1:
            raise ValueError('D must be >= 1, got {}'.format(D))
        if not ps.c < 2:
            raise ValueError('c must lie in (1, 2), got {}'.format(ps.c))
        return super().__new__(cls, x, beatty, ps, R, D, float(eps))

    def __getnewargs__(self):
        return tuple(self)

    def echo(self):
        echo = {'x': self.x, 'R': self.R, 'D': self.D, 'eps': self.eps}
        echo.update(self.beatty.echo())
        echo.update(self.ps.echo())
        return echo


class DiscrepancyReport(namedtuple(
    'DiscrepancyReportBase',
    'per_d X_hat X_asym total_error D_budget D_budget_s3 config'
)):
    """
    Per-d slice counts against the main term X_hat / d.
    """

    def as_dict(self):
        return {
            'per_d': self.per_d,
            'X_hat': self.X_hat,
            'X_asym': self.X_asym,
            'total_error': self.total_error,
            'D_budget': self.D_budget,
            'D_budget_s3': self.D_budget_s3,
            'boundary': BOUNDARY_CONVENTION,
            'config': self.config,
        }


class AdmissibilityReport(namedtuple(
    'AdmissibilityReportBase',
    'R c_R g delta_R sieve_ok window theta theta_g_ok'
)):
    """
    The admissibility arithmetic for one R and gamma.

    `window` is the open interval (8/(8R-1), gamma - 11/12) of level
    exponents, or None when it is empty. `theta` is its midpoint.
    """

    def as_dict(self):
        return {
            'R': self.R,
            'c_R': str(self.c_R),
            'g': str(self.g),
            'delta_R': str(self.delta_R),
            'sieve_ok': self.sieve_ok,
            'window': (None if self.window is None else
                       [_text(self.window[0]), _text(self.window[1])]),
            'theta': None if self.theta is None else _text(self.theta),
            'theta_g_ok': self.theta_g_ok,
        }


def _text(value):
    if isinstance(value, Fraction):
        return str(value)
    return value.text()


# ===================================================================
# Admissibility arithmetic
# ===================================================================

def c_R(R):
    """
    (96R - 12) / (88R + 85), exactly.
    """
    if R < 1:
        raise ValueError('R must be >= 1, got {}'.format(R))
    return Fraction(96 * R - 12, 88 * R + 85)


def g_R(R):
    """
    The sieve degree (8R - 1) / 8.
    """
    return Fraction(8 * R - 1, 8)


def threshold_gamma(R):
    """
    (88R + 85) / (96R - 12): the window is non-empty iff gamma exceeds it.
    """
    return 1 / c_R(R)


def admissibility(R, gamma):
    """
    Check the sieve condition g < R - delta_R and the level window.

    Args:
        R (int): R >= 1.
        gamma (real): gamma in (0, 1); floats are read as the decimal they
            print as.

    Returns:
        AdmissibilityReport: The report.
    """
    if R < 1:
        raise ValueError('R must be >= 1, got {}'.format(R))
    gamma = parse_real(gamma)
    if not (gamma > 0 and gamma < 1):
        raise ValueError('gamma must lie in (0, 1), got {}'.format(gamma))
    g = g_R(R)
    sieve_ok = g < R - DELTA_R

    lo = Fraction(8, 8 * R - 1)
    hi = gamma - Rational(Fraction(11, 12))
    window, theta, theta_g_ok = None, None, False
    if certified_compare(hi, Rational(lo)) > 0:
        window = (lo, hi)
        theta = (hi + Rational(lo)) / 2
        theta_g_ok = certified_compare(theta * Rational(g), Rational(1)) > 0
    return AdmissibilityReport(R=R, c_R=c_R(R), g=g, delta_R=DELTA_R,
                               sieve_ok=sieve_ok, window=window, theta=theta,
                               theta_g_ok=theta_g_ok)


def decimal_floor(value, places=4):
    """
    A Fraction rounded down to `places` decimals, as text.
    """
    scale = 10 ** places
    whole = math.floor(value * scale)
    return '{}.{:0{}d}'.format(whole // scale, whole % scale, places)


def crtable(rmin, rmax):
    """
    Rows (R, c_R, c_R to 4 places, threshold gamma, delta_R, g, sieve_ok).

    c_R is rounded down, so the printed value is itself admissible.
    """
    if not 1 <= rmin <= rmax:
        raise ValueError('Need 1 <= rmin <= rmax, got {}..{}'.format(
            rmin, rmax))
    rows = []
    for R in range(rmin, rmax + 1):
        value = c_R(R)
        rows.append({
            'R': R,
            'c_R': str(value),
            'c_R_4dp': decimal_floor(value),
            'threshold_gamma': str(threshold_gamma(R)),
            'delta_R': '{:.6f}'.format(float(DELTA_R)),
            'g': str(g_R(R)),
            'sieve_ok': g_R(R) < R - DELTA_R,
        })
    return rows


# ===================================================================
# The sieved set and its slices
# ===================================================================

def _prime_mask(values, x):
    """
    Primality of values in [1, x], by segments of the value range.
    """
    mask = np.zeros(len(values), dtype=bool)
    lo = 2
    while lo <= x:
        hi = min(lo + SIEVE_SEGMENT * 8 - 1, x)
        primes = primes_in(lo, hi)
        selected = (values >= lo) & (values <= hi)
        mask[selected] = np.isin(values[selected], primes)
        lo = hi + 1
    return mask


def _members(config):
    """
    (n, p) arrays of A, ascending in n.
    """
    if config.x > BUILD_A_MAX_X:
        raise RangeTooLarge('build_A is capped at x <= {}, got {}'.format(
            BUILD_A_MAX_X, config.x))
    N = int(config.x ** config.ps.gamma_float) + 2
    values = ps_terms_array(config.ps, N)
    inside = values <= config.x
    n = np.flatnonzero(inside).astype(np.int64) + 1
    p = values[inside]
    keep = _prime_mask(p, config.x)
    n, p = n[keep], p[keep]
    keep = ((beatty_indicator_array(config.beatty, p) == 1) &
            (p > _beta_floor(config)))
    return n[keep], p[keep]


def _beta_floor(config):
    # chi(p) = 1 comes from an index n >= 1 exactly when p > beta.
    return certified_floor(config.beatty.beta)


def build_A(config):
    """
    All n with floor(n**c) <= x such that floor(n**c) is a prime of the Beatty
    sequence.

    Returns:
        numpy.ndarray: Sorted int64 array.

    Raises:
        RangeTooLarge: For x above 10**8.
    """
    n, _ = _members(config)
    logger.info('Built A with {} elements for x={}'.format(len(n), config.x))
    return n


def _block_terms(config, D, lo, hi):
    """
    Per-d contributions of the primes in [lo, hi] to the dual counts and
    the error terms.

    Returns:
        dict: arrays indexed by d - 1, plus the block's part of X_hat.
    """
    p = primes_in(lo, hi)
    a = config.beatty.a_float
    gamma = config.ps.gamma_float
    chi_int = beatty_indicator_array(config.beatty, p)
    chi = chi_int.astype(np.float64)
    positive = chi_int * (p > _beta_floor(config))
    psi_beatty = chi - a
    ceil_p = gamma_power_ceil_array(config.ps, p)
    ceil_p1 = gamma_power_ceil_array(config.ps, p + 1)
    pf = p.astype(np.float64)
    # (p+1)**gamma - p**gamma without cancellation.
    delta = np.power(pf, gamma) * np.expm1(gamma * np.log1p(1.0 / pf))
    main = gamma * np.power(pf, gamma - 1)
    s12 = float(np.sum(np.power(pf, gamma - 2)))

    result = {
        'dual': np.zeros(D, dtype=np.int64),
        'dual_all': np.zeros(D, dtype=np.int64),
        'S1': np.zeros(D), 'S2': np.zeros(D), 'S3': np.zeros(D),
        'S0': np.zeros(D), 'S12': np.zeros(D),
        'X_hat': a * float(np.sum(main)),
    }
    for d in range(1, D + 1):
        slots = -(-ceil_p1 // d) + (-ceil_p // d)
        psi_ps = slots - delta / d
        result['dual'][d - 1] = int(np.sum(positive * slots))
        result['dual_all'][d - 1] = int(np.sum(chi_int * slots))
        result['S1'][d - 1] = np.sum(delta / d * psi_beatty)
        result['S2'][d - 1] = np.sum(psi_ps * psi_beatty)
        result['S3'][d - 1] = a * np.sum(psi_ps)
        result['S0'][d - 1] = a * np.sum(delta - main) / d
        result['S12'][d - 1] = s12 / d
    return result


def _dual_terms(config, D, runner=None):
    bounds = split_range(2, config.x, max(1, config.x // (SIEVE_SEGMENT * 8)))
    func = partial(_block_terms, config, D)
    if runner is not None:
        blocks = runner.map_segments(func, bounds)
    else:
        blocks = [func(lo, hi) for lo, hi in bounds]

    merged = {key: np.zeros(D, dtype=np.int64)
              for key in ('dual', 'dual_all')}
    for block in blocks:
        merged['dual'] += block['dual']
        merged['dual_all'] += block['dual_all']
    for key in ('S1', 'S2', 'S3', 'S0', 'S12'):
        merged[key] = np.array([
            math.fsum(block[key][i] for block in blocks) for i in range(D)])
    merged['X_hat'] = math.fsum(block['X_hat'] for block in blocks)
    return merged


def count_A_d(config, d, A=None, terms=None):
    """
    |A_d| counted directly from A and dually over the primes p <= x.

    Args:
        config (ExperimentConfig): The experiment.
        d (int): d >= 1.
        A (numpy.ndarray): The set A (built when omitted).
        terms (dict): Precomputed dual terms covering d.

    Returns:
        tuple: (direct, dual)

    Raises:
        MismatchedCounts: When the two counts differ.
    """
    if d < 1:
        raise ValueError('d must be >= 1, got {}'.format(d))
    A = build_A(config) if A is None else np.asarray(A, dtype=np.int64)
    if terms is None or len(terms['dual']) < d:
        terms = _dual_terms(config, d)
    direct = int(np.count_nonzero(A % d == 0))
    dual = int(terms['dual'][d - 1])
    if direct != dual:
        raise MismatchedCounts(
            'Direct count {} and dual count {} of A_{} differ for {}'.format(
                direct, dual, d, config.echo()),
            d=d, direct=direct, dual=dual)
    return direct, dual


def main_term_X(config, primes=None, gamma=None):
    """
    X_hat = a gamma sum_{p <= x} p**(gamma-1) and X_asym = x**gamma /
    (alpha log x).

    Args:
        config (ExperimentConfig): The experiment.
        primes (numpy.ndarray|SieveTable): Primes covering [2, x].
        gamma (float): Overrides gamma (gamma = 1 gives pi(x)/alpha).

    Returns:
        tuple: (X_hat, X_asym)
    """
    if config.x < 100:
        raise ValueError('main_term_X needs x >= 100, got {}'.format(config.x))
    gamma = config.ps.gamma_float if gamma is None else gamma
    if primes is None:
        p = primes_in(2, config.x)
    elif hasattr(primes, 'primes'):
        p = primes.primes()
    else:
        p = np.asarray(primes, dtype=np.int64)
    p = p[p <= config.x].astype(np.float64)
    a = config.beatty.a_float
    X_hat = a * gamma * math.fsum(np.power(p, gamma - 1))
    X_asym = (config.x ** gamma / math.log(config.x)) * a
    return X_hat, X_asym


def level_budgets(config):
    """
    x**(gamma - 11/12 - eps) and x**(gamma - 380/441 - eps).
    """
    gamma = config.ps.gamma_float
    return (config.x ** (gamma - float(S2_LEVEL) - config.eps),
            config.x ** (gamma - float(S3_LEVEL) - config.eps))


def error_terms(config, d, terms=None):
    """
    The pieces of |A_d| = X_hat/d + S1 + S2 + S3 + S0.

    S1 carries the exact floor difference in place of gamma p**(gamma-1)/d
    plus its O-term, and S0 collects the difference that replacement makes
    in the main term; S12 = sum p**(gamma-2) / d is reported alongside.
    The identity is checked against the count with every Beatty index,
    which differs from |A_d| only for primes p <= beta.

    Returns:
        dict: count, X_hat/d, S1, S2, S3, S0, S12 and the residual of the
        identity.
    """
    if terms is None or len(terms['dual']) < d:
        terms = _dual_terms(config, d)
    i = d - 1
    count = int(terms['dual'][i])
    count_all = int(terms['dual_all'][i])
    pieces = {key: float(terms[key][i])
              for key in ('S1', 'S2', 'S3', 'S0', 'S12')}
    main = terms['X_hat'] / d
    assembled = math.fsum([main, pieces['S1'], pieces['S2'], pieces['S3'],
                           pieces['S0']])
    pieces.update({'d': d, 'count': count, 'main_term': main,
                   'residual': count_all - assembled})
    return pieces


def discrepancy_scan(config, runner=None):
    """
    Count every slice A_d for d <= D both ways against X_hat / d.

    Returns:
        DiscrepancyReport: The per-d table and the level budgets.

    Raises:
        MismatchedCounts: When a direct and dual count differ.
    """
    A = build_A(config)
    terms = _dual_terms(config, config.D, runner=runner)
    X_hat = terms['X_hat']
    X_asym = (config.beatty.a_float * config.x ** config.ps.gamma_float /
              math.log(config.x))

    per_d = []
    for d in range(1, config.D + 1):
        direct, dual = count_A_d(config, d, A=A, terms=terms)
        row = error_terms(config, d, terms=terms)
        row.update({'count_direct': direct, 'count_dual': dual,
                    'error': abs(direct - X_hat / d)})
        del row['count']
        per_d.append(row)
    budget, budget_s3 = level_budgets(config)
    logger.info('Scanned D={} slices for x={}'.format(config.D, config.x))
    return DiscrepancyReport(
        per_d=per_d, X_hat=X_hat, X_asym=X_asym,
        total_error=math.fsum(row['error'] for row in per_d),
        D_budget=budget, D_budget_s3=budget_s3, config=config.echo())


def theorem_count(config, R=None):
    """
    #{p <= x prime in the Beatty sequence : p = floor(n**c) with
    Omega(n) <= R}.

    Args:
        config (ExperimentConfig): The experiment.
        R (int): Overrides config.R; R = 0 admits no n.

    Returns:
        int: The number of distinct such primes.
    """
    R = config.R if R is None else R
    if R < 0:
        raise ValueError('R must be >= 0, got {}'.format(R))
    n, p = _members(config)
    if not len(n):
        return 0
    keep = np.zeros(len(n), dtype=bool)
    lo = 1
    top = int(n[-1])
    while lo <= top:
        hi = min(lo + SIEVE_SEGMENT - 1, top)
        selected = (n >= lo) & (n <= hi)
        if np.any(selected):
            table = sieve_segment(lo, hi)
            keep[selected] = table.omega[n[selected] - lo] <= R
        lo = hi + 1
    return int(len(np.unique(p[keep])))
