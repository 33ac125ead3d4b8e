import utils
import os
import math
import unittest
import warnings
import numpy as np

TOPDIR = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
utils.set_search_paths(TOPDIR)
import credalvol
import credalvol.measures
import credalvol.volume


def _interval():
    return credalvol.make_credal_polytope([[0.2, 0.8], [0.5, 0.5]])


def _not_2_monotone():
    return credalvol.make_credal_polytope([[0.5, 0.5, 0., 0.],
                                           [0., 0., 0.5, 0.5]])


class Tests(unittest.TestCase):
    def test_event_envelope(self):
        """Test event_envelope()"""
        y1 = credalvol.Event.from_labels([0], 3)
        self.assertEqual(credalvol.measures.event_envelope(
            credalvol.vacuous(3), y1), (0., 1.))
        y1 = credalvol.Event.from_labels([0], 2)
        point = credalvol.make_credal_polytope([[0.2, 0.8]])
        lo, up = credalvol.measures.event_envelope(point, y1)
        self.assertAlmostEqual(lo, 0.2, delta=1e-15)
        self.assertAlmostEqual(up, 0.2, delta=1e-15)
        lo, up = credalvol.measures.event_envelope(_interval(), y1)
        self.assertAlmostEqual(lo, 0.2, delta=1e-15)
        self.assertAlmostEqual(up, 0.5, delta=1e-15)
        self.assertRaises(credalvol.InvalidEventError,
                          credalvol.measures.event_envelope,
                          credalvol.vacuous(3), y1)

    def test_envelope_conjugacy(self):
        """Upper probability is the conjugate of the lower"""
        rng = np.random.default_rng(20)
        for d in range(2, 7):
            p = credalvol.random_credal_polytope(d, 6, rng)
            lower, upper = credalvol.measures.envelope_table(p)
            full = (1 << d) - 1
            for mask in range(1 << d):
                self.assertAlmostEqual(upper[mask], 1. - lower[full ^ mask],
                                       delta=1e-12)
            # Monotone under inclusion
            for a in range(1 << d):
                for j in range(d):
                    b = a | (1 << j)
                    self.assertLessEqual(lower[a], lower[b] + 1e-15)
                    self.assertLessEqual(upper[a], upper[b] + 1e-15)

    def test_envelope_table_too_many_labels(self):
        """Event enumeration is refused for many labels"""
        big = credalvol.make_credal_polytope([np.ones(17) / 17.])
        self.assertRaises(credalvol.measures.TooManyLabelsError,
                          credalvol.measures.envelope_table, big)
        self.assertRaises(credalvol.measures.TooManyLabelsError,
                          credalvol.measures.mobius_mass, big)

    def test_imprecision_width(self):
        """Test imprecision_width()"""
        for d in (2, 3, 5):
            self.assertEqual(credalvol.measures.imprecision_width(
                credalvol.vacuous(d)), 1.)
        point = credalvol.make_credal_polytope([[0.2, 0.3, 0.5]])
        self.assertEqual(credalvol.measures.imprecision_width(point), 0.)
        self.assertAlmostEqual(
            credalvol.measures.imprecision_width(_interval()), 0.3,
            delta=1e-15)

    def test_shannon_entropy(self):
        """Test shannon_entropy()"""
        self.assertAlmostEqual(
            credalvol.measures.shannon_entropy([0.5, 0.5]), 1., delta=1e-15)
        self.assertEqual(credalvol.measures.shannon_entropy([1., 0.]), 0.)
        self.assertAlmostEqual(
            credalvol.measures.shannon_entropy(
                credalvol.ProbabilityVector([0.25, 0.75])),
            0.8112781244591328, delta=1e-12)

    def test_max_entropy(self):
        """Test max_entropy()"""
        self.assertAlmostEqual(
            credalvol.measures.max_entropy(credalvol.vacuous(3)),
            math.log2(3.), delta=1e-6)
        self.assertEqual(credalvol.measures.max_entropy(
            credalvol.make_credal_polytope([[1., 0.]])), 0.)
        self.assertAlmostEqual(
            credalvol.measures.max_entropy(_interval()), 1., delta=1e-6)

    def test_maximize_entropy(self):
        """Maximizer lies in the set and beats every vertex"""
        rng = np.random.default_rng(21)
        for d in (3, 4, 6):
            p = credalvol.random_credal_polytope(d, 5, rng)
            res = credalvol.measures.maximize_entropy(p, tol=1e-8)
            self.assertTrue(res.converged)
            self.assertLessEqual(res.gap, 1e-8)
            self.assertTrue(credalvol.contains(p, res.point))
            for v in p.vertices:
                self.assertGreaterEqual(
                    res.value,
                    credalvol.measures.shannon_entropy(v) - 1e-8)

    def test_maximize_entropy_no_convergence(self):
        """Too few iterations give a warning"""
        with warnings.catch_warnings(record=True) as w:
            warnings.simplefilter("always")
            res = credalvol.measures.maximize_entropy(_interval(), tol=1e-12,
                                                      max_iter=1)
        self.assertFalse(res.converged)
        self.assertEqual(len(w), 1)
        self.assertTrue(issubclass(w[0].category,
                                   credalvol.measures.NoConvergenceWarning))

    def test_mobius_mass(self):
        """Test mobius_mass()"""
        y1 = credalvol.Event.from_labels([0], 2)
        y2 = credalvol.Event.from_labels([1], 2)
        whole = credalvol.Event.from_labels([0, 1], 2)
        m = credalvol.measures.mobius_mass(credalvol.vacuous(2))
        self.assertEqual((m[y1], m[y2], m[whole]), (0., 0., 1.))
        self.assertFalse(m.negative)
        m = credalvol.measures.mobius_mass(
            credalvol.make_credal_polytope([[0.3, 0.7]]))
        self.assertAlmostEqual(m[y1], 0.3, delta=1e-12)
        self.assertAlmostEqual(m[y2], 0.7, delta=1e-12)
        self.assertAlmostEqual(m[whole], 0., delta=1e-12)
        m = credalvol.measures.mobius_mass(_interval())
        self.assertAlmostEqual(m[whole], 0.3, delta=1e-12)

    def test_mobius_round_trip(self):
        """Masses sum back to the lower probability"""
        rng = np.random.default_rng(22)
        for d in (2, 3, 4, 5):
            p = credalvol.random_credal_polytope(d, 4, rng)
            m = credalvol.measures.mobius_mass(p)
            lower = credalvol.measures.envelope_table(p)[0]
            self.assertAlmostEqual(m.masses.sum(), 1., delta=1e-8)
            self.assertAlmostEqual(m.masses[0], 0., delta=1e-8)
            np.testing.assert_allclose(m.belief(), lower, atol=1e-8)
            for e in credalvol.Event.all(d):
                self.assertAlmostEqual(m.lower(e), lower[e.mask], delta=1e-8)

    def test_generalized_hartley(self):
        """Test generalized_hartley()"""
        self.assertAlmostEqual(
            credalvol.measures.generalized_hartley(credalvol.vacuous(2)), 1.,
            delta=1e-12)
        self.assertAlmostEqual(
            credalvol.measures.generalized_hartley(
                credalvol.make_credal_polytope([[0.3, 0.7]])), 0.,
            delta=1e-12)
        self.assertAlmostEqual(
            credalvol.measures.generalized_hartley(_interval()), 0.3,
            delta=1e-12)

    def test_generalized_hartley_negative_mass(self):
        """Negative masses give a warning but still a value"""
        p = _not_2_monotone()
        self.assertTrue(credalvol.measures.mobius_mass(p).negative)
        with warnings.catch_warnings(record=True) as w:
            warnings.simplefilter("always")
            gh = credalvol.measures.generalized_hartley(p)
        self.assertTrue(math.isfinite(gh))
        self.assertEqual(len(w), 1)
        self.assertTrue(issubclass(w[0].category,
                                   credalvol.measures.NegativeMassWarning))

    def test_measure(self):
        """Test measure() selector"""
        simplex = credalvol.vacuous(3)
        self.assertAlmostEqual(credalvol.measures.measure(simplex, 'volume'),
                               math.sqrt(3.) / 2., delta=1e-12)
        seg = credalvol.make_credal_polytope([[1., 0., 0.], [0., 1., 0.]])
        self.assertEqual(credalvol.measures.measure(seg, 'volume'), 0.)
        self.assertAlmostEqual(
            credalvol.measures.measure(seg, 'volume-full'), math.sqrt(2.),
            delta=1e-12)
        self.assertAlmostEqual(credalvol.measures.measure(simplex, 'maxent'),
                               math.log2(3.), delta=1e-6)
        self.assertAlmostEqual(credalvol.measures.measure(simplex, 'gh'),
                               math.log2(3.), delta=1e-12)
        self.assertEqual(credalvol.measures.measure(simplex, 'width'), 1.)
        self.assertRaises(credalvol.measures.UnknownMeasureError,
                          credalvol.measures.measure, simplex, 'size')

    def test_measure_bound(self):
        """Test measure_bound()"""
        self.assertAlmostEqual(credalvol.measures.measure_bound(3, 'volume'),
                               math.sqrt(3.) / 2., delta=1e-15)
        self.assertEqual(credalvol.measures.measure_bound(1, 'volume-full'),
                         0.)
        self.assertEqual(credalvol.measures.measure_bound(4, 'width'), 1.)
        self.assertEqual(credalvol.measures.measure_bound(4, 'gh'), 2.)
        self.assertRaises(credalvol.measures.UnknownMeasureError,
                          credalvol.measures.measure_bound, 4, 'size')

    def test_homothety_sequence(self):
        """Width and volume shrink together along homotheties"""
        p = credalvol.vacuous(3)
        widths, vols = [], []
        for n in range(1, 40):
            q = credalvol.homothety(p, 1. / n)
            widths.append(credalvol.measures.imprecision_width(q))
            vols.append(credalvol.volume.volume_exact(q).value)
        self.assertTrue(np.all(np.diff(widths) < 0.))
        self.assertTrue(np.all(np.diff(vols) < 0.))
        self.assertLess(widths[-1], 0.05)
        self.assertLess(vols[-1], 1e-3)

    def test_summarize(self):
        """Test summarize()"""
        s = credalvol.measures.summarize(credalvol.vacuous(3))
        self.assertAlmostEqual(s['volume'], math.sqrt(3.) / 2., delta=1e-12)
        self.assertEqual(s['k'], 2)
        self.assertEqual(s['width'], 1.)
        self.assertAlmostEqual(s['max_entropy'], math.log2(3.), delta=1e-6)
        self.assertAlmostEqual(s['generalized_hartley'], math.log2(3.),
                               delta=1e-12)
        self.assertAlmostEqual(s['entropy_of_centroid'], math.log2(3.),
                               delta=1e-12)
        self.assertEqual(s['flags'], [])
        seg = credalvol.make_credal_polytope([[1., 0., 0.], [0., 1., 0.]])
        s = credalvol.measures.summarize(seg)
        self.assertEqual(s['volume'], 0.)
        self.assertEqual(s['k'], 1)
        self.assertAlmostEqual(s['volume_k'], math.sqrt(2.), delta=1e-12)
        s = credalvol.measures.summarize(_not_2_monotone())
        self.assertEqual(s['flags'], ['negative_mass'])


if __name__ == '__main__':
    unittest.main()
