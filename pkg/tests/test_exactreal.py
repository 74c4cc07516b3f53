import math
import pickle
from fractions import Fraction
from unittest import TestCase

import numpy as np
from sympy import integer_nthroot

from psbeatty.exactreal import (EQUAL, GREATER, LESS, Adaptive,
                                AmbiguousFloor, ParseError, Quadratic,
                                Rational, certified_compare, certified_floor,
                                certified_floor_array, floor_power,
                                floor_root_power, fractional_distance,
                                parse_integer, parse_real, quadratic,
                                sqrt_of)


class ParseRealTestCase(TestCase):

    def test_quadratic_forms(self):
        root2 = parse_real('sqrt(2)')
        self.assertIsInstance(root2, Quadratic)
        self.assertEqual((root2.a, root2.b, root2.D), (0, 1, 2))

        golden = parse_real('(1+sqrt(5))/2')
        self.assertEqual(golden, Quadratic(Fraction(1, 2), Fraction(1, 2), 5))

        half = parse_real('-sqrt(2)/2')
        self.assertEqual(half, Quadratic(0, Fraction(-1, 2), 2))

    def test_rationals_are_exact(self):
        self.assertEqual(parse_real('355/113'), Rational(355, 113))
        self.assertEqual(parse_real('1.05').value, Fraction(21, 20))
        self.assertEqual(parse_real('0'), Rational(0))
        self.assertEqual(parse_real(7), Rational(7))

    def test_transcendental_forms_are_adaptive(self):
        log3 = parse_real('log(3)')
        self.assertIsInstance(log3, Adaptive)
        self.assertEqual(certified_floor(log3), 1)

        cube_root = parse_real('2^(1/3)')
        self.assertIsInstance(cube_root, Adaptive)
        self.assertAlmostEqual(cube_root.to_float(), 2 ** (1 / 3), places=12)
        self.assertEqual(certified_floor(parse_real('exp(1)')), 2)

    def test_text_reads_back(self):
        for text in ('sqrt(2)', '(1+sqrt(5))/2', '355/113', '3-2*sqrt(7)'):
            value = parse_real(text)
            self.assertEqual(parse_real(value.text()), value)

    def test_bad_input(self):
        with self.assertRaises(ParseError):
            parse_real('sqrt(')
        with self.assertRaises(ParseError):
            parse_real('sin(1)')
        # ParseError doubles as a ValueError for argument validation.
        with self.assertRaises(ValueError):
            parse_real('1/')

    def test_parse_integer(self):
        self.assertEqual(parse_integer('1e6'), 10 ** 6)
        self.assertEqual(parse_integer('10^7'), 10 ** 7)
        self.assertEqual(parse_integer(42), 42)
        with self.assertRaises(ParseError):
            parse_integer('1.5')


class FieldArithmeticTestCase(TestCase):

    def test_quadratic_collapses(self):
        root2 = parse_real('sqrt(2)')
        self.assertEqual(root2 * root2, Rational(2))
        self.assertEqual(root2 - root2, Rational(0))
        self.assertEqual(quadratic(1, 2, 8), Quadratic(1, 4, 2))
        self.assertEqual(sqrt_of(Fraction(9, 4)), Rational(3, 2))

    def test_division_by_conjugate(self):
        golden = parse_real('(1+sqrt(5))/2')
        inverse = Rational(1) / golden
        # 1/phi = phi - 1
        self.assertEqual(inverse, golden - 1)

    def test_mixed_fields_are_adaptive(self):
        value = parse_real('sqrt(2)') + parse_real('sqrt(3)')
        self.assertIsInstance(value, Adaptive)
        self.assertEqual(certified_floor(value), 3)

    def test_values_are_immutable_and_picklable(self):
        value = parse_real('(1+sqrt(5))/2')
        with self.assertRaises(AttributeError):
            value.a = 3
        self.assertEqual(pickle.loads(pickle.dumps(value)), value)
        adaptive = parse_real('log(3)')
        self.assertEqual(pickle.loads(pickle.dumps(adaptive)), adaptive)


class CertifiedFloorTestCase(TestCase):

    def test_rational_floor(self):
        self.assertEqual(certified_floor(Rational(-7, 2)), -4)
        self.assertEqual(certified_floor(Rational(7, 1)), 7)

    def test_quadratic_floor_matches_isqrt(self):
        root2 = parse_real('sqrt(2)')
        for scale in (1, 10, 10 ** 6, 10 ** 15):
            self.assertEqual(certified_floor(root2 * scale),
                             math.isqrt(2 * scale * scale))
            self.assertEqual(certified_floor(-root2 * scale),
                             -math.isqrt(2 * scale * scale) - 1)

    def test_hidden_integer_is_ambiguous(self):
        # (2^(1/3))^3 is 2, which interval arithmetic cannot prove.
        value = parse_real('2^(1/3)') ** 3
        with self.assertRaises(AmbiguousFloor):
            certified_floor(value, cap=256)

    def test_compare(self):
        root2 = parse_real('sqrt(2)')
        self.assertEqual(certified_compare(root2 * root2, 2), EQUAL)
        self.assertEqual(
            certified_compare(root2, Rational(1414213562, 10 ** 9)), GREATER)
        self.assertEqual(
            certified_compare(parse_real('sqrt(2)+sqrt(3)'),
                              parse_real('sqrt(10)')), LESS)
        self.assertTrue(parse_real('log(3)') > 1)

    def test_compare_is_a_total_order(self):
        rng = np.random.default_rng(0)

        def draw():
            a = Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 8)))
            b = Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 4)))
            return quadratic(a, b, int(rng.choice([2, 3, 5, 7])))

        for _ in range(200):
            x, y, z = draw(), draw(), draw()
            xy = certified_compare(x, y)
            self.assertEqual(xy, -certified_compare(y, x), (x, y))
            if xy != GREATER and certified_compare(y, z) != GREATER:
                self.assertNotEqual(certified_compare(x, z), GREATER,
                                    (x, y, z))
            gap = x.to_float() - y.to_float()
            if abs(gap) > 1e-9:
                self.assertEqual(xy, GREATER if gap > 0 else LESS, (x, y))

    def test_fractional_distance(self):
        distance = fractional_distance(parse_real('sqrt(2)'))
        self.assertAlmostEqual(distance.to_float(), math.sqrt(2) - 1)
        distance = fractional_distance(Rational(7, 4))
        self.assertEqual(distance, Rational(1, 4))


class FloorPowerTestCase(TestCase):

    def test_exact_cases(self):
        self.assertEqual(floor_power(10 ** 6, Fraction(3, 2)), 10 ** 9)
        self.assertEqual(floor_power(8, Fraction(1, 3)), 2)
        self.assertEqual(floor_power(7, Fraction(1, 3)), 1)
        self.assertEqual(floor_root_power(2, 1, 2), 1)
        self.assertEqual(floor_root_power(1, 5, 7), 1)

    def test_against_sympy(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            n = int(rng.integers(1, 10 ** 7))
            num, den = int(rng.integers(1, 40)), int(rng.integers(1, 40))
            expected = integer_nthroot(n ** num, den)[0]
            self.assertEqual(floor_root_power(n, num, den), expected,
                             (n, num, den))

    def test_invalid(self):
        with self.assertRaises(ValueError):
            floor_power(0, Fraction(3, 2))
        with self.assertRaises(ValueError):
            floor_root_power(4, 1, 0)


class CertifiedFloorArrayTestCase(TestCase):

    def test_near_integers_are_recomputed(self):
        calls = []

        def exact(index):
            calls.append(index)
            return [2, 3, 4][index]

        # The middle value is a float just below an integer that really is
        # 3; the first and last are far from the boundary.
        approx = np.array([2.5, 3.0 - 1e-12, 4.25])
        result = certified_floor_array(approx, exact)
        self.assertEqual(result.tolist(), [2, 3, 4])
        self.assertEqual(calls, [1])
