import utils
import os
import math
import unittest
import numpy as np

TOPDIR = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
utils.set_search_paths(TOPDIR)
import credalvol
import credalvol.lift


def _interval(lo, hi):
    return credalvol.make_credal_polytope([[lo, 1. - lo], [hi, 1. - hi]])


class Tests(unittest.TestCase):
    def test_embedding_spec(self):
        """Test EmbeddingSpec class"""
        spec = credalvol.lift.EmbeddingSpec.coordinate(2, 3)
        self.assertEqual(spec.V.shape, (2, 3))
        self.assertTrue(spec.is_orthonormal())
        np.testing.assert_allclose(spec.embed([0.3, 0.7]), [0.3, 0.7, 0.])
        np.testing.assert_allclose(spec.apply([0.3, 0.7, 0.]), [0.3, 0.7])
        spec = credalvol.lift.EmbeddingSpec([[2., 0.]], [0.])
        self.assertFalse(spec.is_orthonormal())

    def test_lift_interval(self):
        """Lift of an interval has matching area"""
        p = _interval(0.3, 0.7)
        result = credalvol.lift.lift_probability_set(p, 3)
        lifted, spec, gap = result
        self.assertEqual(lifted.d, 3)
        self.assertEqual(lifted.k, 2)
        self.assertLess(gap, 1e-8)
        self.assertAlmostEqual(result.source_volume, 0.4 * math.sqrt(2.),
                               delta=1e-12)
        self.assertAlmostEqual(result.lifted_volume, result.source_volume,
                               delta=1e-8)
        self.assertTrue(credalvol.lift.check_embedding(result, p))
        lam, h = result.params
        self.assertTrue(0. <= lam <= 1. and 0. <= h <= 1.)
        self.assertLess(
            credalvol.lift.relative_volume_variation(p, lifted), 1e-6)

    def test_lift_deterministic(self):
        """Lift does not depend on the number of threads"""
        p = _interval(0.25, 0.5)
        a = credalvol.lift.lift_probability_set(p, 3, threads=1)
        b = credalvol.lift.lift_probability_set(p, 3, threads=4)
        self.assertEqual(a.params, b.params)
        np.testing.assert_array_equal(a.lifted.vertex_array,
                                      b.lifted.vertex_array)

    def test_lift_two_labels(self):
        """Lift by more than one label"""
        p = _interval(0.45, 0.55)
        result = credalvol.lift.lift_probability_set(p, 4)
        self.assertEqual(result.lifted.d, 4)
        self.assertLess(result.gap, 1e-6)
        self.assertTrue(credalvol.lift.check_embedding(result, p))

    def test_lift_too_large(self):
        """A set larger than any cone reports the remaining gap"""
        result = credalvol.lift.lift_probability_set(credalvol.vacuous(2), 3)
        self.assertEqual(result.params, (1., 1.))
        self.assertAlmostEqual(result.gap, math.sqrt(2.) - math.sqrt(3.) / 2.,
                               delta=1e-10)
        np.testing.assert_allclose(result.lifted.vertex_array,
                                   credalvol.vacuous(3).vertex_array,
                                   atol=1e-12)

    def test_lift_same_dimension(self):
        """Lift into the same simplex is the identity"""
        p = credalvol.random_credal_polytope(3, 5, np.random.default_rng(50))
        result = credalvol.lift.lift_probability_set(p, 3)
        self.assertIs(result.lifted, p)
        self.assertEqual(result.gap, 0.)
        self.assertRaises(credalvol.lift.InfeasibleEmbeddingError,
                          credalvol.lift.lift_probability_set, p, 2)

    def test_relative_volume_variation(self):
        """Test relative_volume_variation()"""
        p = credalvol.vacuous(3)
        self.assertEqual(credalvol.lift.relative_volume_variation(p, p), 0.)
        half = credalvol.homothety(p, 0.5)
        self.assertAlmostEqual(
            credalvol.lift.relative_volume_variation(p, half), 0.75,
            delta=1e-12)
        point = credalvol.make_credal_polytope([[0.2, 0.3, 0.5]])
        self.assertRaises(credalvol.lift.ZeroReferenceVolumeError,
                          credalvol.lift.relative_volume_variation, point, p)
        # A zero-volume reference is bad input, not a numerical failure
        self.assertRaises(ValueError,
                          credalvol.lift.relative_volume_variation, point, p)
        self.assertFalse(issubclass(credalvol.lift.ZeroReferenceVolumeError,
                                    ArithmeticError))

    def test_a3_failure_pair(self):
        """The lift of a nested segment escapes a thin triangle"""
        p, q, lifted, outside = credalvol.lift.a3_failure_pair()
        for v in q.vertex_array:
            self.assertTrue(credalvol.contains(p, np.r_[v, 0.]))
        self.assertIsNotNone(outside)
        self.assertFalse(credalvol.contains(p, outside))
        self.assertGreater(
            credalvol.volume.volume_fixed_dim(lifted, 2),
            credalvol.volume.volume_fixed_dim(p, 2))


if __name__ == '__main__':
    unittest.main()
