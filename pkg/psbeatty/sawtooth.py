"""
The sawtooth function and the two approximation devices built on it.

Vaaler's trigonometric polynomial approximates psi(t) = t - floor(t) - 1/2
with an error that is majorised pointwise by a nonnegative Fejer kernel.
The Srinivasan calculator bounds min L(H) for a posynomial L over [H1, H2].
"""
import logging
import math
from collections import namedtuple

import numpy as np

from .constants import VAALER_C_A, VAALER_C_B, VAALER_TOLERANCE
from .errors import InvariantViolation

logger = logging.getLogger(__name__)

CONSTRUCTIONS = ('vaaler', 'fejer')

# Grid points are evaluated in blocks to bound the size of the phase matrix.
_BLOCK = 4096


class InequalityViolated(InvariantViolation):
    """
    The pointwise Vaaler inequality failed somewhere on the grid.
    """
    def __init__(self, message, worst_t=None, excess=None):
        super().__init__(message)
        self.worst_t = worst_t
        self.excess = excess


def psi(t):
    """
    t - floor(t) - 1/2, in [-1/2, 1/2).
    """
    return t - math.floor(t) - 0.5


def psi_array(t):
    """
    psi() over a float array.
    """
    t = np.asarray(t, dtype=np.float64)
    return t - np.floor(t) - 0.5


class VaalerApprox(namedtuple(
    'VaalerApproxBase', 'H a b C_a C_b construction'
)):
    """
    Coefficients of a trigonometric approximation to psi of degree H.

    `a` holds a_h for h = 1..H and `b` holds b_h for h = 0..H; the negative
    indices follow from a_{-h} = conj(a_h) and b_{-h} = b_h.
    """

    def a_coefficient(self, h):
        if h == 0 or abs(h) > self.H:
            raise KeyError(h)
        value = self.a[abs(h) - 1]
        return value if h > 0 else np.conj(value)

    def b_coefficient(self, h):
        if abs(h) > self.H:
            raise KeyError(h)
        return self.b[abs(h)]


def _vaaler_weight(u):
    """
    pi*u*(1 - u)*cot(pi*u) + u for 0 < u < 1.
    """
    return np.pi * u * (1.0 - u) / np.tan(np.pi * u) + u


def vaaler_build(H, construction='vaaler'):
    """
    Build the degree-H approximation.

    The 'vaaler' construction uses Vaaler's extremal weights

        a_h = -w(h/(H+1)) / (2 pi i h),   b_h = (1 - |h|/(H+1)) / (2H + 2)

    for which the inequality holds everywhere. The 'fejer' construction
    damps the Fourier series of psi with the Fejer weights 1 - |h|/(H+1)
    and keeps the same majorant; it is only meant for cross-checking and
    can violate the inequality near the jumps.

    Args:
        H (int): Degree, >= 1.
        construction (str): 'vaaler' or 'fejer'.

    Returns:
        VaalerApprox: The coefficients.
    """
    if H < 1:
        raise ValueError('H must be >= 1, got {}'.format(H))
    if construction not in CONSTRUCTIONS:
        raise ValueError('Unknown construction {!r}, expected one of '
                         '{}'.format(construction, ', '.join(CONSTRUCTIONS)))

    h = np.arange(1, H + 1, dtype=np.float64)
    u = h / (H + 1)
    if construction == 'vaaler':
        weights = _vaaler_weight(u)
    else:
        weights = 1.0 - u
    a = -weights / (2j * np.pi * h)
    b = (1.0 - np.arange(0, H + 1, dtype=np.float64) / (H + 1)) / (2 * H + 2)

    approx = VaalerApprox(H=H, a=a, b=b, C_a=VAALER_C_A, C_b=VAALER_C_B,
                          construction=construction)
    assert np.all(np.abs(a) * h <= VAALER_C_A)
    assert np.all(b >= 0) and np.all(b <= VAALER_C_B / H)
    return approx


def _phases(approx, t):
    reduced = t - np.floor(t)
    h = np.arange(1, approx.H + 1, dtype=np.float64)
    return 2 * np.pi * np.mod(np.outer(reduced, h), 1.0)


def vaaler_eval(approx, t, with_imag=False):
    """
    Evaluate both trigonometric sums at the points t.

    The sums over -H..H are formed explicitly from the conjugate pairs, so
    any imaginary part left over is rounding error.

    Args:
        approx (VaalerApprox): The coefficients.
        t (numpy.ndarray): Evaluation points.
        with_imag (bool): Also return the largest imaginary part seen.

    Returns:
        tuple: (approximation, majorant) float arrays, plus the imaginary
        residue when requested.
    """
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    approximation = np.empty(len(t))
    majorant = np.empty(len(t))
    imag = 0.0
    for start in range(0, len(t), _BLOCK):
        block = t[start:start + _BLOCK]
        e = np.exp(1j * _phases(approx, block))
        approx_sum = e @ approx.a + np.conj(e) @ np.conj(approx.a)
        major_sum = approx.b[0] + e @ approx.b[1:] + np.conj(e) @ approx.b[1:]
        approximation[start:start + _BLOCK] = approx_sum.real
        majorant[start:start + _BLOCK] = major_sum.real
        imag = max(imag, float(np.max(np.abs(approx_sum.imag))),
                   float(np.max(np.abs(major_sum.imag))))
    if with_imag:
        return approximation, majorant, imag
    return approximation, majorant


def vaaler_check(approx, grid, strict=True, tolerance=VAALER_TOLERANCE):
    """
    Check |psi(t) - sum a_h e(th)| <= sum b_h e(th) at every grid point.

    Args:
        approx (VaalerApprox): The coefficients.
        grid (sequence): Points t, non-empty.
        strict (bool): Raise on the first violating grid.
        tolerance (float): Absolute slack for rounding; the inequality is
            an equality at the integers.

    Returns:
        dict: max_err, mean_err, max_majorant, min_majorant, violations,
        max_imag, worst_t and the grid size.

    Raises:
        InequalityViolated: In strict mode, with the worst t.
    """
    grid = np.atleast_1d(np.asarray(grid, dtype=np.float64))
    if len(grid) == 0:
        raise ValueError('vaaler_check needs a non-empty grid')

    approximation, majorant, imag = vaaler_eval(approx, grid, with_imag=True)
    error = np.abs(psi_array(grid) - approximation)
    excess = error - majorant
    violations = int(np.count_nonzero(excess > tolerance))
    worst = int(np.argmax(excess))

    report = {
        'H': approx.H,
        'construction': approx.construction,
        'grid_size': len(grid),
        'max_err': float(error.max()),
        'mean_err': float(error.mean()),
        'max_majorant': float(majorant.max()),
        'min_majorant': float(majorant.min()),
        'violations': violations,
        'max_imag': imag,
        'worst_t': float(grid[worst]),
        'worst_excess': float(excess[worst]),
        'tolerance': tolerance,
    }
    if violations:
        logger.warning('{} Vaaler violations for H={} ({}), worst at t={}'
                       .format(violations, approx.H, approx.construction,
                               grid[worst]))
        if strict:
            raise InequalityViolated(
                '{} grid points violate the Vaaler inequality for H={}, '
                'worst t={!r}'.format(violations, approx.H, grid[worst]),
                worst_t=float(grid[worst]), excess=float(excess[worst]))
    return report


def uniform_grid(size):
    """
    `size` equally spaced points of [0, 1).
    """
    if size < 1:
        raise ValueError('Grid size must be >= 1, got {}'.format(size))
    return np.arange(size, dtype=np.float64) / size


def adversarial_grid(size, rng):
    """
    Points within 1e-3 of an integer, where psi jumps.

    Args:
        size (int): Number of points.
        rng (numpy.random.Generator): Source of the offsets.

    Returns:
        numpy.ndarray: The grid, including the integers 0 and 1 themselves.
    """
    exponents = rng.uniform(3, 15, size)
    signs = rng.choice([-1.0, 1.0], size)
    centres = rng.integers(-3, 4, size).astype(np.float64)
    grid = centres + signs * np.power(10.0, -exponents)
    grid[:2] = (0.0, 1.0)
    return grid


def vaaler_psi_difference(approx, u, v):
    """
    Expand psi(u) - psi(v) with the approximation.

    This is the shape in which both indicator expansions use the lemma, for
    instance psi(-a(p+1-beta)) - psi(-a(p-beta)).

    Returns:
        dict: exact difference, approximated difference, the error and the
        sum of the two majorants bounding it.
    """
    (approx_u, approx_v), (major_u, major_v) = vaaler_eval(approx, [u, v])
    exact = psi(u) - psi(v)
    approximated = approx_u - approx_v
    return {
        'exact': exact,
        'approximation': float(approximated),
        'error': float(abs(exact - approximated)),
        'majorant': float(major_u + major_v),
    }


# ===================================================================
# Srinivasan's parameter choice
# ===================================================================

class SrinivasanBound(namedtuple('SrinivasanBoundBase', 'A B H1 H2')):
    """
    L(H) = sum A_i H**a_i + sum B_j H**(-b_j) on the range [H1, H2].

    `A` and `B` are tuples of (coefficient, exponent) pairs.
    """

    def __new__(cls, A, B, H1, H2):
        A = tuple((float(c), float(e)) for c, e in A)
        B = tuple((float(c), float(e)) for c, e in B)
        for c, e in A + B:
            if not (c > 0 and e > 0):
                raise ValueError('Coefficients and exponents must be '
                                 'positive, got ({}, {})'.format(c, e))
        if not 0 < H1 <= H2:
            raise ValueError('Need 0 < H1 <= H2, got H1={} H2={}'.format(
                H1, H2))
        return super().__new__(cls, A, B, float(H1), float(H2))

    @property
    def C_S(self):
        """
        The witness constant 2mn (with empty sides counted as one term).
        """
        return 2 * max(len(self.A), 1) * max(len(self.B), 1)


def srinivasan_L(spec, H):
    """
    L(H), vectorised over H.
    """
    H = np.asarray(H, dtype=np.float64)
    value = np.zeros_like(H)
    for c, e in spec.A:
        value = value + c * np.power(H, e)
    for c, e in spec.B:
        value = value + c * np.power(H, -e)
    return value


def srinivasan_bound(spec):
    """
    sum A_i H1**a_i + sum B_j H2**(-b_j)
    + sum_{i,j} (A_i**b_j * B_j**a_i)**(1/(a_i+b_j)).
    """
    total = math.fsum(c * spec.H1 ** e for c, e in spec.A)
    total += math.fsum(c * spec.H2 ** -e for c, e in spec.B)
    total += math.fsum(
        math.exp((b * math.log(A) + a * math.log(B)) / (a + b))
        for A, a in spec.A for B, b in spec.B
    )
    return total


def srinivasan_witness(spec, grid_size=10 ** 4):
    """
    Minimise L over a log-uniform grid of [H1, H2] with both ends included.

    Returns:
        tuple: (H*, L(H*))
    """
    if grid_size < 2:
        raise ValueError('grid_size must be >= 2, got {}'.format(grid_size))
    if spec.H1 == spec.H2:
        return spec.H1, float(srinivasan_L(spec, spec.H1))
    grid = np.geomspace(spec.H1, spec.H2, grid_size)
    grid[0], grid[-1] = spec.H1, spec.H2
    values = srinivasan_L(spec, grid)
    best = int(np.argmin(values))
    return float(grid[best]), float(values[best])


def random_srinivasan_spec(rng, max_terms=3):
    """
    A random spec with 1..max_terms terms per side, exponents in [1/4, 3],
    coefficients log-uniform in [1e-3, 1e3] and H2/H1 <= 1e3.
    """
    def terms():
        count = int(rng.integers(1, max_terms + 1))
        return [(10 ** rng.uniform(-3, 3), rng.uniform(0.25, 3))
                for _ in range(count)]

    H1 = 10 ** rng.uniform(0, 1)
    H2 = H1 * 10 ** rng.uniform(0, 3)
    return SrinivasanBound(terms(), terms(), H1, H2)
