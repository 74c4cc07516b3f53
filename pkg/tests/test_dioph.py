from fractions import Fraction
from unittest import TestCase

import mpmath
import numpy as np

from psbeatty.dioph import (RationalInput, best_convergent_below, cf_expand,
                           convergents_from_quotients,
                           fractional_distance_array, ttr_convergent,
                           ttr_denominator_bound, type_closure_check,
                           type_estimate, type_inequality_constant)
from psbeatty.exactreal import (PrecisionExhausted, fractional_distance,
                                parse_real)


class ContinuedFractionTestCase(TestCase):

    def test_sqrt2(self):
        cf = cf_expand('sqrt(2)', 5)
        self.assertEqual(cf.partial_quotients, (1, 2, 2, 2, 2))
        self.assertEqual(cf.convergents,
                         ((1, 1), (3, 2), (7, 5), (17, 12), (41, 29)))
        self.assertEqual(cf.period, (1, (2,)))
        self.assertFalse(cf.terminated)

    def test_golden_ratio(self):
        cf = cf_expand('(1+sqrt(5))/2', 4)
        self.assertEqual(cf.partial_quotients, (1, 1, 1, 1))
        self.assertEqual(cf.period, (0, (1,)))

    def test_sqrt3_period(self):
        cf = cf_expand('sqrt(3)', 9)
        self.assertEqual(cf.partial_quotients, (1, 1, 2, 1, 2, 1, 2, 1, 2))
        self.assertEqual(cf.period, (1, (1, 2)))

    def test_rational_terminates(self):
        cf = cf_expand('3/7', 10)
        self.assertEqual(cf.partial_quotients, (0, 2, 3))
        self.assertEqual(cf.convergents[-1], (3, 7))
        self.assertTrue(cf.terminated)

    def test_adaptive_value(self):
        cf = cf_expand('exp(1)', 10)
        self.assertEqual(cf.partial_quotients,
                         (2, 1, 2, 1, 1, 4, 1, 1, 6, 1))
        self.assertIsNone(cf.period)

    def test_hidden_rational_exhausts_precision(self):
        with self.assertRaises(PrecisionExhausted):
            cf_expand(parse_real('2^(1/3)') ** 3, 3, cap=256)

    def test_invariants(self):
        for text in ('sqrt(2)', 'sqrt(3)', '(1+sqrt(5))/2', '3-sqrt(7)/5',
                     'log(2)', 'exp(1)'):
            x = parse_real(text)
            cf = cf_expand(x, 12)
            self.assertEqual(cf.determinants(),
                             [(-1) ** i for i in range(len(cf.convergents) - 1)],
                             text)
            qs = [q for _, q in cf.convergents]
            self.assertTrue(all(a < b for a, b in zip(qs[1:], qs[2:])), text)
            value = x.to_mpf(300)
            with mpmath.workprec(300):
                for (p, q), (_, q_next) in zip(cf.convergents,
                                               cf.convergents[1:]):
                    error = abs(value - mpmath.mpf(p) / q)
                    self.assertLess(error, mpmath.mpf(1) / (q * q_next), text)

    def test_convergents_from_quotients(self):
        self.assertEqual(convergents_from_quotients([3, 7, 15, 1]),
                         [(3, 1), (22, 7), (333, 106), (355, 113)])

    def test_invalid_K(self):
        with self.assertRaises(ValueError):
            cf_expand('sqrt(2)', 0)


class BestConvergentTestCase(TestCase):

    def test_examples(self):
        self.assertEqual(best_convergent_below('sqrt(2)', 10), (7, 5))
        self.assertEqual(best_convergent_below('sqrt(2)', 12), (17, 12))
        self.assertEqual(best_convergent_below('3/7', 100), (3, 7))

    def test_approximation_quality(self):
        x = parse_real('(1+sqrt(5))/2')
        for M in (10, 1000, 10 ** 6, 10 ** 12):
            p, q = best_convergent_below(x, M)
            self.assertLessEqual(q, M)
            distance = abs(x.to_mpf(200) - mpmath.mpf(p) / q)
            self.assertLessEqual(distance, mpmath.mpf(1) / (q * M))

    def test_ttr_convergent(self):
        result = ttr_convergent('sqrt(2)', 3, 10 ** 4, 0.1)
        self.assertEqual(result['cap'], int(10 ** 3.6))
        self.assertLessEqual(result['d'], result['cap'])
        self.assertLessEqual(result['scaled_error'], 1.0)

    def test_ttr_denominator_bound(self):
        self.assertAlmostEqual(ttr_denominator_bound(0.25, 2.0, 4, 100, 0.5),
                               0.5 / 4 * 100 ** 0.25)


class TypeEstimateTestCase(TestCase):

    def test_quadratic_irrationals_have_type_one(self):
        estimate = type_estimate('sqrt(2)', 10 ** 6)
        self.assertGreaterEqual(estimate.tau_hat, 1.0)
        self.assertLessEqual(estimate.tau_hat, 1.2)
        self.assertEqual(estimate.search_bound, 10 ** 6)
        golden = type_estimate('(1+sqrt(5))/2', 10 ** 6)
        self.assertLessEqual(golden.tau_hat, 1.1)

    def test_liouville_style_value(self):
        # Three terms of sum 10^-k! plus an irrational tail far below them.
        x = parse_real('1/10 + 1/100 + 1/10^6 + sqrt(2)/10^30')
        estimate = type_estimate(x, 10 ** 6)
        self.assertGreater(estimate.tau_hat, 3)
        q, distance = estimate.witness
        self.assertEqual(q, 10 ** 6)
        self.assertLess(distance, 1e-20)

    def test_witness_distance(self):
        x = parse_real('sqrt(2)')
        estimate = type_estimate(x, 10 ** 4)
        if estimate.witness is not None:
            q, distance = estimate.witness
            self.assertAlmostEqual(
                distance, fractional_distance(x * q).to_float(), places=12)

    def test_rational_rejected(self):
        with self.assertRaises(RationalInput):
            type_estimate('3/7', 100)
        with self.assertRaises(ValueError):
            type_estimate('sqrt(2)', 5)

    def test_closure(self):
        result = type_closure_check('sqrt(2)', 10 ** 6)
        self.assertEqual(sorted(result), ['1/x', '2/x', '3/x', 'x'])
        for label, tau in result.items():
            self.assertTrue(1.0 <= tau <= 2.0, (label, tau))


class TypeInequalityTestCase(TestCase):

    def test_distance_array_matches_exact(self):
        x = parse_real('(1+sqrt(5))/2')
        n = np.arange(1, 2001)
        approx = fractional_distance_array(x, n)
        for k in (1, 2, 3, 55, 89, 1597, 2000):
            exact = fractional_distance(x * k).to_float()
            self.assertAlmostEqual(approx[k - 1], exact, places=12)

    def test_constant(self):
        self.assertGreater(type_inequality_constant('sqrt(2)', 1.01, 10 ** 4),
                           0.1)
        # For rho < 1 the best constant decays with the scale.
        self.assertLess(type_inequality_constant('sqrt(2)', 0.5, 10 ** 4),
                        type_inequality_constant('sqrt(2)', 0.5, 100))
        self.assertAlmostEqual(type_inequality_constant('sqrt(2)', 1.5, 1),
                               2 ** 0.5 - 1)
        with self.assertRaises(RationalInput):
            type_inequality_constant(Fraction(3, 7), 1.0, 10)
