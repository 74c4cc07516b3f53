"""
Constants used throughout psbeatty.

Numbers quoted from the literature are kept exactly as published; the
remaining values are desk-scale caps and the tolerances the test suite
asserts against.
"""
from fractions import Fraction

REPORT_SCHEMA = 'psbeatty.report.v1'

# Greaves' weighted sieve parameter for R >= 13.
DELTA_R = Fraction('0.124820')

# Default epsilon of the bound calculators; PSBEATTY_EPS overrides it.
DEFAULT_EPS = 0.01

# Precision schedule for adaptive reals (bits).
PRECISION_START = 64
PRECISION_CAP = 4096
PRECISION_WARN = 1024

# Desk caps.
EXP_SUM_MAX_HI = 10 ** 9
BUILD_A_MAX_X = 10 ** 8
HEATH_BROWN_MAX_N = 10 ** 5
HEATH_BROWN_MAX_TERMS = 5 * 10 ** 6
SIEVE_MAX_WINDOW = 2 * 10 ** 8
SIEVE_SEGMENT = 2 ** 20
TRIAL_DIVISION_LIMIT = 10 ** 12
HIGH_PRECISION_MAX_TERMS = 10 ** 4

# Vaaler decay constants: |a_h| <= C_A / |h| and b_h <= C_B / H.
VAALER_C_A = 1
VAALER_C_B = 2

# Absolute tolerance for the pointwise Vaaler inequality; the inequality is
# an equality at the integers.
VAALER_TOLERANCE = 1e-12

# Derivative-test comparison constant.
C_VDC = 10

# Floats closer than this to an integer are re-floored exactly.
FLOAT_FLOOR_MARGIN = 1e-6

# Exponents of the level of distribution budgets.
S2_LEVEL = Fraction(11, 12)
S3_LEVEL = Fraction(380, 441)

ENV_THREADS = 'PSBEATTY_THREADS'
ENV_EPS = 'PSBEATTY_EPS'
