import pickle
from unittest import TestCase

import numpy as np
from sympy import integer_nthroot

from psbeatty.arith import primes_up_to
from psbeatty.seq import (BeattyParams, PSParams, RationalAlphaRejected,
                          beatty_index, beatty_indicator,
                          beatty_indicator_array, beatty_members,
                          beatty_prime_count, beatty_psi_form, beatty_term,
                          beatty_terms_array, gamma_power_ceil_array,
                          is_beatty_member, membership_threshold,
                          pi_c_asymptotic, pi_c_count, ps_expansion_residual,
                          ps_indicator, ps_indicator_array, ps_members,
                          ps_prime_values, ps_residual_bound, ps_term,
                          ps_terms_array)


class BeattyTestCase(TestCase):

    def setUp(self):
        self.root2 = BeattyParams('sqrt(2)')

    def test_terms(self):
        terms = [beatty_term(self.root2, n) for n in range(1, 11)]
        self.assertEqual(terms, [1, 2, 4, 5, 7, 8, 9, 11, 12, 14])
        self.assertEqual(beatty_terms_array(self.root2, 10).tolist(), terms)
        with self.assertRaises(ValueError):
            beatty_term(self.root2, 0)

    def test_complementary_sequences_partition_integers(self):
        # 1/sqrt(2) + 1/(2 + sqrt(2)) = 1
        other = BeattyParams('2+sqrt(2)')
        ms = np.arange(1, 5001)
        total = (beatty_indicator_array(self.root2, ms) +
                 beatty_indicator_array(other, ms))
        self.assertTrue(np.all(total == 1))

    def test_indicator_matches_generator(self):
        for params in (self.root2, BeattyParams('(1+sqrt(5))/2', '1/3'),
                       BeattyParams('3/2', 0), BeattyParams('log(7)', 0)):
            members = beatty_members(params, 2000)
            chi = beatty_indicator_array(params, np.arange(1, 2001))
            self.assertEqual(
                members, set(int(m) for m in np.flatnonzero(chi) + 1),
                params)

    def test_array_matches_scalar(self):
        params = BeattyParams('(1+sqrt(5))/2', '1/3')
        ms = np.arange(1, 400)
        self.assertEqual(beatty_indicator_array(params, ms).tolist(),
                         [beatty_indicator(params, int(m)) for m in ms])

    def test_index(self):
        for n in range(1, 50):
            m = beatty_term(self.root2, n)
            self.assertEqual(beatty_index(self.root2, m), n)
        self.assertIsNone(beatty_index(self.root2, 3))

    def test_nonpositive_index(self):
        params = BeattyParams('sqrt(2)', 5)
        # floor(sqrt(2) * -2 + 5) = 2
        self.assertEqual(beatty_indicator(params, 2), 1)
        self.assertEqual(beatty_index(params, 2), -2)
        self.assertFalse(is_beatty_member(params, 2))
        self.assertTrue(is_beatty_member(params, 2,
                                         require_positive_index=False))
        self.assertEqual(membership_threshold(params), 7)
        self.assertNotIn(2, beatty_members(params, 100))
        self.assertIn(2, beatty_members(params, 100,
                                        require_positive_index=False))

    def test_psi_form(self):
        params = BeattyParams('(1+sqrt(5))/2', '1/3')
        for p in (2, 3, 5, 7, 11, 13, 101, 1009):
            self.assertAlmostEqual(beatty_psi_form(params, p),
                                   beatty_indicator(params, p), places=12)
        with self.assertRaises(RationalAlphaRejected):
            beatty_psi_form(BeattyParams('3/2'), 5)

    def test_prime_density(self):
        primes = primes_up_to(10 ** 5)
        density = beatty_prime_count(self.root2, primes) / len(primes)
        self.assertLess(abs(density - 2 ** -0.5), 0.02)

    def test_invalid_alpha(self):
        with self.assertRaises(ValueError):
            BeattyParams('1')
        with self.assertRaises(ValueError):
            BeattyParams('sqrt(2)/2')

    def test_params_pickle(self):
        params = BeattyParams('(1+sqrt(5))/2', '1/3')
        self.assertEqual(pickle.loads(pickle.dumps(params)), params)
        self.assertEqual(params.echo(),
                         {'alpha': params.alpha.text(), 'beta': '1/3'})


class PiatetskiShapiroTestCase(TestCase):

    def test_terms(self):
        params = PSParams('3/2')
        self.assertEqual(ps_term(params, 4), 8)
        self.assertEqual(ps_term(params, 2), 2)
        expected = [integer_nthroot(n ** 3, 2)[0] for n in range(1, 501)]
        self.assertEqual(ps_terms_array(params, 500).tolist(), expected)

    def test_indicator_matches_generator(self):
        for c in ('3/2', '25/24', '1.2'):
            params = PSParams(c)
            chi = ps_indicator_array(params, np.arange(1, 5001))
            self.assertEqual(set(int(m) for m in np.flatnonzero(chi) + 1),
                             ps_members(params, 5000), c)

    def test_irrational_exponent(self):
        params = PSParams('sqrt(2)')
        self.assertFalse(params.exact_rational)
        chi = [ps_indicator(params, m) for m in range(1, 301)]
        members = ps_members(params, 300)
        self.assertEqual(set(m for m, value in zip(range(1, 301), chi)
                             if value), members)

    def test_gamma_power_ceil(self):
        params = PSParams('3/2')
        ms = np.arange(1, 2001)
        expected = []
        for m in ms:
            root, exact = integer_nthroot(int(m) ** 2, 3)
            expected.append(root if exact else root + 1)
        self.assertEqual(gamma_power_ceil_array(params, ms).tolist(),
                         expected)

    def test_expansion_residual_is_bounded(self):
        params = PSParams('25/24')
        for m in range(2, 400, 7):
            residual = ps_expansion_residual(params, m)
            self.assertLessEqual(abs(residual),
                                 ps_residual_bound(params, m) * (1 + 1e-9))

    def test_counting_identity(self):
        params = PSParams('5/4')
        x = 10 ** 5
        primes = primes_up_to(x)
        count = pi_c_count(params, x, primes=primes)
        self.assertEqual(count, len(ps_prime_values(params, x)))
        ratio = count / pi_c_asymptotic(params, x)
        self.assertTrue(0.8 < ratio < 1.4, ratio)

    def test_invalid_exponent(self):
        with self.assertRaises(ValueError):
            PSParams('2')
        with self.assertRaises(ValueError):
            PSParams('1')
        with self.assertRaises(ValueError):
            ps_indicator(PSParams('3/2'), 0)
