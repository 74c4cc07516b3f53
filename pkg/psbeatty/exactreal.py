"""
Certified real arithmetic.

Every floor and comparison in the indicator functions goes through this
module so that boundary cases are decided exactly. Three variants exist:

* ``Rational``: an exact fraction.
* ``Quadratic``: an exact element a + b*sqrt(D) of one real quadratic field.
* ``Adaptive``: an expression tree evaluated with interval arithmetic at
  increasing precision until the answer is certified.

Arithmetic between values of one field stays exact; anything else falls
back to an ``Adaptive`` tree.
"""
import logging
import math
from collections import namedtuple
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
from mpmath import iv, libmp, mp
from sympy import Add, Integer, Mul, Pow, Rational as SympyRational
from sympy import exp as sympy_exp, integer_nthroot, log as sympy_log
from sympy.parsing.sympy_parser import (convert_xor, parse_expr, rationalize,
                                        standard_transformations)

from .constants import (FLOAT_FLOOR_MARGIN, PRECISION_CAP, PRECISION_START,
                        PRECISION_WARN)
from .errors import PsBeattyError

logger = logging.getLogger(__name__)

LESS = -1
EQUAL = 0
GREATER = 1


class AmbiguousFloor(PsBeattyError):
    pass


class AmbiguousCompare(PsBeattyError):
    pass


class PrecisionExhausted(PsBeattyError):
    pass


class ParseError(PsBeattyError, ValueError):
    pass


class Interval(namedtuple('IntervalBase', 'lo hi')):
    """
    A closed interval [lo, hi] of mpmath reals known to contain a value.
    """

    @property
    def width(self):
        return self.hi - self.lo

    def contains_integer_boundary(self):
        """
        Whether the interval does not pin down a single floor.

        Returns:
            bool: True if floor(lo) and floor(hi) differ.
        """
        return _raw_floor(self.lo._mpf_) != _raw_floor(self.hi._mpf_)


@contextmanager
def _interval_precision(prec):
    saved = iv.prec
    iv.prec = prec
    try:
        yield
    finally:
        iv.prec = saved


def _raw_floor(raw):
    return libmp.to_int(raw, libmp.round_floor)


def _squarefree_split(n):
    """
    Write a positive integer as s*s*D with D square-free.

    Returns:
        tuple: (s, D)
    """
    s, D = 1, 1
    k = 2
    while k * k <= n:
        while n % (k * k) == 0:
            n //= k * k
            s *= k
        if n % k == 0:
            n //= k
            D *= k
        k += 1
    return s, D * n


def _is_squarefree(n):
    return _squarefree_split(n)[0] == 1


class CertifiedReal(object):
    """
    Base class of the three real variants.

    Values are immutable. Arithmetic operators accept ints and Fractions on
    either side.
    """
    __slots__ = ()

    exact = False

    def _parts(self):
        """
        Exact field representation of the value.

        Returns:
            tuple: (a, b, D) with the value equal to a + b*sqrt(D); D is None
            for rationals. None for adaptive values.
        """
        return None

    def _iv(self, prec):
        raise NotImplementedError

    def interval(self, prec=PRECISION_START):
        """
        Enclose the value in an interval computed at `prec` bits.

        Args:
            prec (int): Working precision in bits.

        Returns:
            Interval: An interval containing the true value.
        """
        with _interval_precision(prec):
            value = self._iv(prec)
        lo, hi = value._mpi_
        return Interval(mp.make_mpf(lo), mp.make_mpf(hi))

    def floor(self):
        return certified_floor(self)

    def to_float(self):
        interval = self.interval(80)
        return float((interval.lo + interval.hi) / 2)

    def to_mpf(self, prec=128):
        """
        Return a (non-certified) mpmath approximation at `prec` bits.
        """
        interval = self.interval(prec + 16)
        with mp.workprec(prec):
            return (interval.lo + interval.hi) / 2

    def __float__(self):
        return self.to_float()

    def __neg__(self):
        return _combine('mul', Rational(-1), self)

    def __pos__(self):
        return self

    def __add__(self, other):
        return _combine('add', self, other)

    def __radd__(self, other):
        return _combine('add', other, self)

    def __sub__(self, other):
        return _combine('sub', self, other)

    def __rsub__(self, other):
        return _combine('sub', other, self)

    def __mul__(self, other):
        return _combine('mul', self, other)

    def __rmul__(self, other):
        return _combine('mul', other, self)

    def __truediv__(self, other):
        return _combine('div', self, other)

    def __rtruediv__(self, other):
        return _combine('div', other, self)

    def __pow__(self, exponent):
        return power(self, exponent)

    def __lt__(self, other):
        return certified_compare(self, other) == LESS

    def __le__(self, other):
        return certified_compare(self, other) != GREATER

    def __gt__(self, other):
        return certified_compare(self, other) == GREATER

    def __ge__(self, other):
        return certified_compare(self, other) != LESS

    def sign(self):
        return certified_compare(self, Rational(0))

    def is_rational(self):
        return isinstance(self, Rational)

    def text(self):
        """
        A textual form which parse_real() reads back to the same value.
        """
        return str(self)


class Rational(CertifiedReal):
    """
    An exact rational number p/q in lowest terms with q >= 1.
    """
    __slots__ = ('value',)

    exact = True

    def __init__(self, value, q=1):
        if isinstance(value, Rational):
            value = value.value
        object.__setattr__(self, 'value', Fraction(value, q) if q != 1
                           else Fraction(value))

    def __setattr__(self, key, value):
        raise AttributeError('Rational is immutable')

    def __reduce__(self):
        return Rational, (self.value,)

    @property
    def p(self):
        return self.value.numerator

    @property
    def q(self):
        return self.value.denominator

    def _parts(self):
        return self.value, Fraction(0), None

    def _iv(self, prec):
        return iv.mpf(self.p) / iv.mpf(self.q)

    def to_float(self):
        return float(self.value)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return isinstance(other, Rational) and self.value == other.value

    def __hash__(self):
        return hash(('rational', self.value))

    def __repr__(self):
        return 'Rational({})'.format(self.value)

    def __str__(self):
        return str(self.value)


class Quadratic(CertifiedReal):
    """
    An exact quadratic irrational a + b*sqrt(D).

    D is square-free and at least 2 and b is non-zero; use quadratic() to
    build values which may collapse to a Rational.
    """
    __slots__ = ('a', 'b', 'D')

    exact = True

    def __init__(self, a, b, D):
        a, b, D = Fraction(a), Fraction(b), int(D)
        if D < 2 or not _is_squarefree(D):
            raise ValueError(
                'Quadratic radicand must be square-free and >= 2, '
                'got {}'.format(D))
        if b == 0:
            raise ValueError('Quadratic with b=0 is rational, use quadratic()')
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'D', D)

    def __setattr__(self, key, value):
        raise AttributeError('Quadratic is immutable')

    def __reduce__(self):
        return Quadratic, (self.a, self.b, self.D)

    def _parts(self):
        return self.a, self.b, self.D

    def _iv(self, prec):
        a = iv.mpf(self.a.numerator) / iv.mpf(self.a.denominator)
        b = iv.mpf(self.b.numerator) / iv.mpf(self.b.denominator)
        return a + b * iv.sqrt(iv.mpf(self.D))

    def conjugate(self):
        return Quadratic(self.a, -self.b, self.D)

    def norm(self):
        return self.a * self.a - self.b * self.b * self.D

    def integer_form(self):
        """
        Write the value as (P + Q*sqrt(D)) / L with integers and L >= 1.

        Returns:
            tuple: (P, Q, L)
        """
        L = self.a.denominator * self.b.denominator // math.gcd(
            self.a.denominator, self.b.denominator)
        P = self.a.numerator * (L // self.a.denominator)
        Q = self.b.numerator * (L // self.b.denominator)
        return P, Q, L

    def exact_floor(self):
        P, Q, L = self.integer_form()
        return _floor_linear_surd(P, Q, self.D, L)

    def exact_sign(self):
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == 0 or sa == sb:
            return sb
        if self.a * self.a > self.b * self.b * self.D:
            return sa
        return sb

    def __eq__(self, other):
        return (isinstance(other, Quadratic) and
                (self.a, self.b, self.D) == (other.a, other.b, other.D))

    def __hash__(self):
        return hash(('quadratic', self.a, self.b, self.D))

    def __repr__(self):
        return 'Quadratic(a={}, b={}, D={})'.format(self.a, self.b, self.D)

    def __str__(self):
        surd = 'sqrt({})'.format(self.D)
        if self.b != 1:
            surd = '({})*{}'.format(self.b, surd)
        if self.a == 0:
            return surd
        return '({})+{}'.format(self.a, surd)


def _floor_linear_surd(P, Q, D, L):
    """
    Exact floor of (P + Q*sqrt(D)) / L for integers with L >= 1.
    """
    s = Q * Q * D
    t = math.isqrt(s)
    if Q >= 0:
        top = P + t
    elif t * t == s:
        top = P - t
    else:
        top = P - t - 1
    return top // L


class Adaptive(CertifiedReal):
    """
    An expression tree evaluated by interval arithmetic.

    Nodes are ('add'|'sub'|'mul'|'div', x, y), ('sqrt'|'log'|'exp', x),
    ('pow', x, Rational exponent) and ('powr', x, real exponent).
    """
    __slots__ = ('op', 'args')

    OPS = {
        'add': 2, 'sub': 2, 'mul': 2, 'div': 2,
        'sqrt': 1, 'log': 1, 'exp': 1,
        'pow': 2, 'powr': 2,
    }

    def __init__(self, op, *args):
        if op not in self.OPS or len(args) != self.OPS[op]:
            raise ValueError('Unsupported adaptive node {}{}'.format(op, args))
        object.__setattr__(self, 'op', op)
        object.__setattr__(self, 'args', tuple(_coerce(arg) for arg in args))

    def __setattr__(self, key, value):
        raise AttributeError('Adaptive is immutable')

    def __reduce__(self):
        return Adaptive, (self.op,) + self.args

    def _iv(self, prec):
        values = [arg._iv(prec) for arg in self.args]
        if self.op == 'add':
            return values[0] + values[1]
        if self.op == 'sub':
            return values[0] - values[1]
        if self.op == 'mul':
            return values[0] * values[1]
        if self.op == 'div':
            return values[0] / values[1]
        if self.op == 'sqrt':
            return iv.sqrt(values[0])
        if self.op == 'log':
            return iv.log(values[0])
        if self.op == 'exp':
            return iv.exp(values[0])
        # pow and powr: x**e = exp(e * log x) for x > 0.
        return iv.exp(values[1] * iv.log(values[0]))

    def __eq__(self, other):
        return (isinstance(other, Adaptive) and self.op == other.op and
                self.args == other.args)

    def __hash__(self):
        return hash(('adaptive', self.op, self.args))

    def __repr__(self):
        return 'Adaptive({!r}, {})'.format(
            self.op, ', '.join(repr(arg) for arg in self.args))

    def __str__(self):
        x = self.args[0]
        if self.op in ('sqrt', 'log', 'exp'):
            return '{}({})'.format(self.op, x)
        symbol = {'add': '+', 'sub': '-', 'mul': '*', 'div': '/',
                  'pow': '^', 'powr': '^'}[self.op]
        return '({}){}({})'.format(x, symbol, self.args[1])


def _coerce(value):
    if isinstance(value, CertifiedReal):
        return value
    if isinstance(value, (int, Fraction)):
        return Rational(value)
    raise TypeError('Cannot use {!r} as a certified real'.format(value))


def quadratic(a, b, D):
    """
    Build a + b*sqrt(D), collapsing to a Rational when possible.

    D may be any positive integer; square factors are moved into b.

    Returns:
        CertifiedReal: A Rational or a Quadratic.
    """
    a, b, D = Fraction(a), Fraction(b), int(D)
    if D < 1:
        raise ValueError('Radicand must be positive, got {}'.format(D))
    s, D = _squarefree_split(D)
    b *= s
    if b == 0 or D == 1:
        return Rational(a + b)
    return Quadratic(a, b, D)


def sqrt_of(value):
    """
    Square root of a non-negative certified real.
    """
    value = _coerce(value)
    if isinstance(value, Rational):
        r = value.value
        if r < 0:
            raise ValueError('Square root of negative {}'.format(r))
        # sqrt(u/v) = sqrt(u*v)/v
        return quadratic(0, Fraction(1, r.denominator),
                         r.numerator * r.denominator) if r else Rational(0)
    return Adaptive('sqrt', value)


def log_of(value):
    value = _coerce(value)
    if value == Rational(1):
        return Rational(0)
    return Adaptive('log', value)


def exp_of(value):
    value = _coerce(value)
    if value == Rational(0):
        return Rational(1)
    return Adaptive('exp', value)


def power(base, exponent):
    """
    base ** exponent, exact whenever the result stays in the base's field.

    Args:
        base (CertifiedReal): A positive value for non-integer exponents.
        exponent: An int, Fraction or CertifiedReal.

    Returns:
        CertifiedReal: The power.
    """
    base = _coerce(base)
    if isinstance(base, Rational) and base.value == 1:
        return Rational(1)
    if isinstance(exponent, Rational):
        exponent = exponent.value
    if isinstance(exponent, CertifiedReal):
        return Adaptive('powr', base, exponent)
    exponent = Fraction(exponent)
    if exponent.denominator == 1:
        n = exponent.numerator
        if base.exact:
            result = Rational(1)
            square = base if n > 0 else Rational(1) / base
            n = abs(n)
            while n:
                if n & 1:
                    result = result * square
                square = square * square
                n >>= 1
            return result
        return Adaptive('pow', base, Rational(exponent))
    if isinstance(base, Rational) and exponent.denominator == 2:
        return sqrt_of(base.value ** exponent.numerator)
    return Adaptive('pow', base, Rational(exponent))


def _combine(op, x, y):
    x, y = _coerce(x), _coerce(y)
    px, py = x._parts(), y._parts()
    if px is None or py is None:
        return Adaptive(op, x, y)

    ax, bx, Dx = px
    ay, by, Dy = py
    if Dx is not None and Dy is not None and Dx != Dy:
        if op == 'mul' and ax == 0 and ay == 0:
            return quadratic(0, bx * by, Dx * Dy)
        return Adaptive(op, x, y)

    D = Dx if Dx is not None else Dy
    if D is None:
        if op == 'add':
            return Rational(ax + ay)
        if op == 'sub':
            return Rational(ax - ay)
        if op == 'mul':
            return Rational(ax * ay)
        return Rational(ax / ay)

    if op == 'add':
        return quadratic(ax + ay, bx + by, D)
    if op == 'sub':
        return quadratic(ax - ay, bx - by, D)
    if op == 'mul':
        return quadratic(ax * ay + bx * by * D, ax * by + bx * ay, D)
    # Divide by multiplying with the conjugate of y.
    norm = ay * ay - by * by * D
    if norm == 0:
        raise ZeroDivisionError('Division by zero quadratic')
    return quadratic((ax * ay - bx * by * D) / norm,
                     (bx * ay - ax * by) / norm, D)


def _escalate(value, decide, error_class, cap, what):
    """
    Evaluate `value` at increasing precision until `decide` returns a result.

    Args:
        value (CertifiedReal): The value to enclose.
        decide (callable): Takes an Interval, returns a result or None.
        error_class (type): Raised when the cap is reached.
        cap (int): Maximum precision in bits.
        what (str): Description for log and error messages.
    """
    prec = PRECISION_START
    while prec <= cap:
        result = decide(value.interval(prec))
        if result is not None:
            if prec > PRECISION_WARN:
                logger.warning('{} needed {} bits for {}'.format(
                    what, prec, value))
            return result
        prec *= 2
    raise error_class('{} undecided at {} bits for {}'.format(
        what, cap, value))


def certified_floor(x, cap=PRECISION_CAP):
    """
    Return the integer n with n <= x < n + 1.

    Rationals and quadratic irrationals are floored with integer
    arithmetic. Adaptive values are enclosed at 64, 128, ... bits until the
    enclosing interval has a single floor.

    Args:
        x (CertifiedReal): The value (ints and Fractions are accepted).
        cap (int): Precision cap in bits.

    Returns:
        int: The floor of x.

    Raises:
        AmbiguousFloor: If the cap is reached, which usually means x is an
            integer that the expression tree cannot prove to be one.
    """
    x = _coerce(x)
    if isinstance(x, Rational):
        return x.p // x.q
    if isinstance(x, Quadratic):
        return x.exact_floor()

    def decide(interval):
        lo, hi = _raw_floor(interval.lo._mpf_), _raw_floor(interval.hi._mpf_)
        return lo if lo == hi else None

    return _escalate(x, decide, AmbiguousFloor, cap, 'floor')


def certified_compare(x, y, cap=PRECISION_CAP):
    """
    Compare two certified reals exactly.

    Returns:
        int: LESS, EQUAL or GREATER.

    Raises:
        AmbiguousCompare: If an adaptive difference cannot be separated from
            zero below the cap.
    """
    x, y = _coerce(x), _coerce(y)
    if x == y:
        return EQUAL
    difference = x - y
    if isinstance(difference, Rational):
        v = difference.value
        return (v > 0) - (v < 0)
    if isinstance(difference, Quadratic):
        return difference.exact_sign()

    def decide(interval):
        if interval.lo > 0:
            return GREATER
        if interval.hi < 0:
            return LESS
        return None

    return _escalate(difference, decide, AmbiguousCompare, cap, 'compare')


def fractional_distance(x):
    """
    ||x||, the distance from x to the nearest integer, as a CertifiedReal.
    """
    x = _coerce(x)
    n = certified_floor(x)
    below = x - n
    above = Rational(n + 1) - x
    return below if certified_compare(below, above) != GREATER else above


def floor_root_power(m, num, den):
    """
    Exact floor of m ** (num / den) for integers m >= 0, num >= 0, den >= 1.

    A float estimate is corrected with exact integer powers; large results
    go straight to sympy's integer n-th root.
    """
    if m < 0 or num < 0 or den < 1:
        raise ValueError('floor_root_power needs m, num >= 0 and den >= 1')
    if m < 2 or num == 0:
        return m ** num if num else 1
    target = m ** num
    if num * math.log2(m) / den > 48:
        return integer_nthroot(target, den)[0]
    r = int(math.exp(math.log(m) * num / den))
    while r > 0 and r ** den > target:
        r -= 1
    while (r + 1) ** den <= target:
        r += 1
    return r


def floor_power(n, c):
    """
    Exact floor of n ** c for a positive rational exponent c = p/q.

    Computed as the integer q-th root of n**p, with no rounding.

    Args:
        n (int): Base, n >= 1.
        c (Fraction|Rational): Exponent, positive.

    Returns:
        int: floor(n ** c).
    """
    if isinstance(c, Rational):
        c = c.value
    c = Fraction(c)
    if n < 1 or c <= 0:
        raise ValueError('floor_power needs n >= 1 and c > 0')
    return floor_root_power(n, c.numerator, c.denominator)


def certified_floor_array(approx, exact_floor, margin=FLOAT_FLOOR_MARGIN):
    """
    Floor a float array, recomputing every element near an integer exactly.

    An element is trusted when its distance to the nearest integer exceeds
    max(margin, |value| * 2**-40), which dominates the accumulated rounding
    error of the callers' float formulas.

    Args:
        approx (numpy.ndarray): Float approximations of the values.
        exact_floor (callable): Maps an index to the exact floor.
        margin (float): Absolute trust margin.

    Returns:
        numpy.ndarray: int64 floors.
    """
    approx = np.asarray(approx, dtype=np.float64)
    floors = np.floor(approx)
    frac = approx - floors
    tolerance = np.maximum(margin, np.abs(approx) * 2.0 ** -40)
    risky = np.flatnonzero((frac < tolerance) | (frac > 1.0 - tolerance))
    result = floors.astype(np.int64)
    for index in risky:
        result[index] = exact_floor(int(index))
    return result


_TRANSFORMATIONS = standard_transformations + (convert_xor, rationalize)


def parse_real(text):
    """
    Parse a textual real such as "sqrt(2)", "(1+sqrt(5))/2", "355/113" or
    "1.05".

    Decimals are read as exact rationals. Expressions may use + - * / ^,
    sqrt, log and exp.

    Args:
        text (str): The expression.

    Returns:
        CertifiedReal: The parsed value.

    Raises:
        ParseError: On syntax errors or unsupported functions.
    """
    if isinstance(text, CertifiedReal):
        return text
    if isinstance(text, (int, Fraction)):
        return Rational(text)
    try:
        expr = parse_expr(str(text), transformations=_TRANSFORMATIONS)
    except Exception as e:
        raise ParseError('Cannot parse real {!r}: {}'.format(text, e))
    return _from_sympy(expr, text)


def _from_sympy(expr, text):
    if isinstance(expr, (Integer, SympyRational)):
        return Rational(Fraction(int(expr.p), int(expr.q)))
    if isinstance(expr, Add):
        result = Rational(0)
        for arg in expr.args:
            result = result + _from_sympy(arg, text)
        return result
    if isinstance(expr, Mul):
        result = Rational(1)
        for arg in expr.args:
            result = result * _from_sympy(arg, text)
        return result
    if isinstance(expr, Pow):
        base = _from_sympy(expr.base, text)
        if isinstance(expr.exp, (Integer, SympyRational)):
            return power(base, Fraction(int(expr.exp.p), int(expr.exp.q)))
        return power(base, _from_sympy(expr.exp, text))
    if isinstance(expr, sympy_exp):
        return exp_of(_from_sympy(expr.args[0], text))
    if isinstance(expr, sympy_log):
        return log_of(_from_sympy(expr.args[0], text))
    if expr is sympy_exp(1):
        return exp_of(Rational(1))
    raise ParseError('Unsupported term {} in {!r}'.format(expr, text))


def parse_integer(text):
    """
    Parse an integer flag value; accepts forms like "1e6" and "10^7".
    """
    if isinstance(text, int):
        return text
    value = parse_real(text)
    if not isinstance(value, Rational) or value.q != 1:
        raise ParseError('Expected an integer, got {!r}'.format(text))
    return value.p
