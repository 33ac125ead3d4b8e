import utils
import os
import math
import unittest
import numpy as np

TOPDIR = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
utils.set_search_paths(TOPDIR)
import credalvol
import credalvol.experiments
import credalvol.measures
import credalvol.packing
import credalvol.volume


class Tests(unittest.TestCase):
    def test_idm_state(self):
        """Test IdmState class"""
        s = credalvol.experiments.IdmState([2, 1, 0], s=2.)
        self.assertEqual((s.n, s.d, s.s), (3, 3, 2.))
        self.assertRaises(credalvol.experiments.InvalidHyperparameterError,
                          credalvol.experiments.IdmState, [1, 1], 0.)
        self.assertRaises(ValueError, credalvol.experiments.IdmState, [1])
        self.assertRaises(ValueError, credalvol.experiments.IdmState,
                          [1, -1])

    def test_idm_update(self):
        """Updates return a new state"""
        s = credalvol.experiments.IdmState([0, 0])
        s2 = credalvol.experiments.idm_update(s, 1)
        self.assertEqual(s.counts, (0, 0))
        self.assertEqual(s2.counts, (0, 1))
        self.assertEqual(s2.s, s.s)

    def test_idm_credal_set(self):
        """Test idm_credal_set()"""
        cs = credalvol.experiments.idm_credal_set(
            credalvol.experiments.IdmState([0, 0, 0]))
        np.testing.assert_allclose(cs.vertex_array,
                                   credalvol.vacuous(3).vertex_array)
        cs = credalvol.experiments.idm_credal_set(
            credalvol.experiments.IdmState([2, 1, 0]))
        np.testing.assert_allclose(
            cs.vertex_array,
            [[0.5, 0.25, 0.25], [0.5, 0.5, 0.], [0.75, 0.25, 0.]],
            atol=1e-15)
        self.assertAlmostEqual(credalvol.measures.imprecision_width(cs), 0.25,
                               delta=1e-15)
        self.assertAlmostEqual(credalvol.volume.volume_exact(cs).value,
                               0.25 ** 2 * math.sqrt(3.) / 2., delta=1e-12)

    def test_idm_curve(self):
        """Imprecision shrinks as 1/(n+s) along the IDM curve"""
        rows = credalvol.experiments.idm_curve([0.2, 0.3, 0.5], 40, seed=7)
        self.assertEqual(len(rows), 41)
        self.assertEqual([r['n'] for r in rows], list(range(41)))
        for r in rows:
            self.assertEqual(sorted(r.keys()),
                             sorted(credalvol.experiments.CURVE_COLUMNS))
            self.assertAlmostEqual(r['width'], 1. / (r['n'] + 1.),
                                   delta=1e-12)
            self.assertAlmostEqual(
                r['volume'], (1. / (r['n'] + 1.)) ** 2 * math.sqrt(3.) / 2.,
                delta=1e-12)
            self.assertLessEqual(r['max_entropy'], math.log2(3.) + 1e-9)
        self.assertEqual(rows[0]['dh_prev'], 0.)
        self.assertTrue(all(r['dh_prev'] > 0. for r in rows[1:]))
        self.assertTrue(np.all(np.diff([r['volume'] for r in rows]) < 0.))
        again = credalvol.experiments.idm_curve([0.2, 0.3, 0.5], 40, seed=7)
        self.assertEqual(rows, again)

    def test_idm_curve_prior_strength(self):
        """A stronger prior keeps the credal set wider"""
        weak = credalvol.experiments.idm_curve([0.5, 0.5], 10, s=1.)
        strong = credalvol.experiments.idm_curve([0.5, 0.5], 10, s=4.)
        self.assertAlmostEqual(strong[-1]['width'], 4. / 14., delta=1e-12)
        self.assertGreater(strong[-1]['width'], weak[-1]['width'])

    def test_idm_curve_errors(self):
        """Test idm_curve() argument checks"""
        self.assertRaises(ValueError, credalvol.experiments.idm_curve,
                          [0.5, 0.5], 0)
        self.assertRaises(credalvol.InvalidProbabilityVectorError,
                          credalvol.experiments.idm_curve, [0.5, 0.6], 5)
        self.assertRaises(credalvol.experiments.InvalidHyperparameterError,
                          credalvol.experiments.idm_curve, [0.5, 0.5], 5,
                          s=-1.)

    def test_prior_shrinkage(self):
        """Eroded simplices lose a growing share of their volume"""
        eps = 0.05
        rows = credalvol.experiments.prior_shrinkage(eps, range(2, 13))
        self.assertEqual([r['c'] for r in rows], list(range(2, 13)))
        for r in rows:
            self.assertEqual(sorted(r.keys()),
                             sorted(credalvol.experiments.SHRINKAGE_COLUMNS))
            c = r['c']
            self.assertEqual(r['method'], 'exact' if c <= 9 else 'scaling')
            t = 1. - eps / math.sqrt((c - 1.) / c)
            self.assertAlmostEqual(r['t'], t, delta=1e-9)
            self.assertAlmostEqual(r['ratio'], t ** (c - 1), delta=1e-9)
            self.assertAlmostEqual(r['volume_simplex'],
                                   credalvol.volume.simplex_volume(c),
                                   delta=1e-15)
        self.assertTrue(np.all(np.diff([r['ratio'] for r in rows]) < 0.))

    def test_prior_shrinkage_too_large(self):
        """Erosion beyond the simplex radius is refused"""
        self.assertRaises(credalvol.packing.EpsilonTooLargeError,
                          credalvol.experiments.prior_shrinkage, 0.8, [2])
        self.assertRaises(credalvol.packing.EpsilonTooLargeError,
                          credalvol.experiments.prior_shrinkage, 0.99, [20])


if __name__ == '__main__':
    unittest.main()
