import utils
import os
import math
import unittest
import numpy as np

TOPDIR = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
utils.set_search_paths(TOPDIR)
import credalvol.geometry

SQUARE = np.array([[0., 0.], [1., 0.], [0., 1.], [1., 1.]])


class Tests(unittest.TestCase):
    def test_chart(self):
        """Test Chart class"""
        c = credalvol.geometry.Chart(origin=[1., 0., 0.],
                                     basis=[[0., 1., 0.]])
        self.assertEqual(c.k, 1)
        np.testing.assert_allclose(c.to_chart([[1., 2., 0.]]), [[2.]])
        np.testing.assert_allclose(c.from_chart([3.]), [1., 3., 0.])
        self.assertRaises(ValueError, c.origin.__setitem__, 0, 2.)

    def test_chart_from_points(self):
        """Test Chart.from_points()"""
        pts = np.eye(4)
        c = credalvol.geometry.Chart.from_points(pts)
        self.assertEqual(c.k, 3)
        np.testing.assert_allclose(c.basis @ c.basis.T, np.eye(3),
                                   atol=1e-12)
        np.testing.assert_allclose(c.from_chart(c.to_chart(pts)), pts,
                                   atol=1e-12)
        # Each basis vector has a positive first nonzero entry
        for row in c.basis:
            self.assertGreater(row[np.flatnonzero(np.abs(row) > 1e-12)[0]],
                               0.)

    def test_chart_rank(self):
        """Chart dimension ignores differences below the tolerance"""
        pts = [[0.5, 0.5, 0.], [0.25, 0.75, 0.], [0.75, 0.25, 0.]]
        self.assertEqual(credalvol.geometry.Chart.from_points(pts).k, 1)
        pts = [[0.5, 0.5], [0.5 + 1e-12, 0.5 - 1e-12]]
        self.assertEqual(credalvol.geometry.Chart.from_points(pts).k, 0)
        self.assertEqual(
            credalvol.geometry.Chart.from_points(pts, tol=1e-14).k, 1)
        c = credalvol.geometry.Chart.from_points([[0.2, 0.8]])
        self.assertEqual(c.k, 0)
        self.assertEqual(c.to_chart([[0.2, 0.8]]).shape, (1, 0))
        self.assertRaises(ValueError, credalvol.geometry.Chart.from_points,
                          [[float('inf'), 0.], [0., 1.]])

    def test_transformation(self):
        """Test Transformation class"""
        t = credalvol.geometry.Transformation.identity()
        np.testing.assert_allclose(t.apply([[1., 2., 3.]]), [[1., 2., 3.]])
        self.assertTrue(t.is_isometry())
        t = credalvol.geometry.Transformation([[0., -1.], [1., 0.]],
                                              [1., 0.])
        np.testing.assert_allclose(t.apply([1., 0.]), [1., 1.])
        np.testing.assert_allclose(t.apply([2., 1.], center=[1., 1.]),
                                   [2., 2.])
        t = credalvol.geometry.Transformation([[2., 0.], [0., 1.]], [0., 0.])
        self.assertFalse(t.is_isometry())

    def test_transformation_random(self):
        """Test Transformation.random()"""
        rng = np.random.default_rng(0)
        for dim in (1, 2, 3, 6):
            t = credalvol.geometry.Transformation.random(dim, rng, angle=0.3,
                                                         shift=0.1)
            self.assertTrue(t.is_isometry())
            self.assertAlmostEqual(np.linalg.det(t.rot_matrix), 1.,
                                   delta=1e-10)
            self.assertAlmostEqual(np.linalg.norm(t.tr_vector), 0.1,
                                   delta=1e-12)
        t = credalvol.geometry.Transformation.random(2, rng, angle=0.3)
        # In the plane the rotation angle is exactly as requested
        self.assertAlmostEqual(abs(math.atan2(t.rot_matrix[1, 0],
                                              t.rot_matrix[0, 0])),
                               0.3, delta=1e-10)
        t = credalvol.geometry.Transformation.random(0, rng)
        self.assertEqual(t.rot_matrix.shape, (0, 0))

    def test_nearest_point(self):
        """Test nearest_point()"""
        n = credalvol.geometry.nearest_point(SQUARE, [2., 0.5])
        self.assertAlmostEqual(n.distance, 1., delta=1e-12)
        np.testing.assert_allclose(n.point, [1., 0.5], atol=1e-12)
        self.assertAlmostEqual(n.weights.sum(), 1., delta=1e-12)
        np.testing.assert_allclose(n.weights @ SQUARE, n.point, atol=1e-12)
        n = credalvol.geometry.nearest_point(SQUARE, [0.3, 0.4])
        self.assertLess(n.distance, 1e-12)
        # Nearest to a corner
        n = credalvol.geometry.nearest_point(SQUARE, [-1., -1.])
        self.assertAlmostEqual(n.distance, math.sqrt(2.), delta=1e-12)
        np.testing.assert_allclose(n.weights, [1., 0., 0., 0.], atol=1e-12)

    def test_nearest_point_simplex(self):
        """Distance from a vertex to the shrunk simplex"""
        c = np.ones(3) / 3.
        shrunk = c + 0.5 * (np.eye(3) - c)
        dist = credalvol.geometry.point_hull_distance(shrunk, [1., 0., 0.])
        self.assertAlmostEqual(dist, 0.5 * math.sqrt(6.) / 3., delta=1e-12)

    def test_nearest_point_random(self):
        """Nearest point satisfies the optimality condition"""
        rng = np.random.default_rng(4)
        for dim in (2, 3, 5):
            pts = rng.normal(size=(10, dim))
            x = rng.normal(size=dim) * 3.
            n = credalvol.geometry.nearest_point(pts, x)
            # No hull point is closer along any generator direction
            g = n.point - x
            self.assertGreaterEqual(((pts - n.point) @ g).min(), -1e-9)

    def test_hull_vertex_indices(self):
        """Test hull_vertex_indices()"""
        pts = np.vstack([SQUARE, [[0.5, 0.5]]])
        np.testing.assert_array_equal(
            credalvol.geometry.hull_vertex_indices(pts), [0, 1, 2, 3])
        np.testing.assert_array_equal(
            credalvol.geometry.hull_vertex_indices([[0.5], [0.], [2.],
                                                    [1.]]), [1, 2])
        np.testing.assert_array_equal(
            credalvol.geometry.hull_vertex_indices(SQUARE[:3]), [0, 1, 2])

    def test_chart_halfspaces(self):
        """Test chart_halfspaces()"""
        a, b = credalvol.geometry.chart_halfspaces(SQUARE)
        self.assertEqual(a.shape, (4, 2))
        np.testing.assert_allclose(np.linalg.norm(a, axis=1), 1.)
        self.assertTrue(np.all(a @ [0.5, 0.5] + b < 0.))
        self.assertFalse(np.all(a @ [1.5, 0.5] + b <= 0.))
        np.testing.assert_allclose((-(a @ [0.5, 0.25] + b)).min(), 0.25)
        a, b = credalvol.geometry.chart_halfspaces([[0.2], [0.7]])
        np.testing.assert_allclose(a @ [0.3] + b, [-0.1, -0.4])

    def test_fan_volume(self):
        """Test fan_volume()"""
        self.assertAlmostEqual(credalvol.geometry.fan_volume(SQUARE), 1.,
                               delta=1e-12)
        self.assertAlmostEqual(credalvol.geometry.fan_volume(SQUARE[:3]),
                               0.5, delta=1e-12)
        cube = np.array([[i, j, k] for i in (0., 1.) for j in (0., 1.)
                         for k in (0., 1.)])
        self.assertAlmostEqual(credalvol.geometry.fan_volume(cube), 1.,
                               delta=1e-12)
        self.assertAlmostEqual(
            credalvol.geometry.fan_volume([[0.2], [0.9], [0.5]]), 0.7,
            delta=1e-12)
        # Too few points to span the space
        self.assertEqual(credalvol.geometry.fan_volume(SQUARE[:2]), 0.)
        self.assertEqual(credalvol.geometry.fan_volume(np.zeros((1, 0))), 0.)


if __name__ == '__main__':
    unittest.main()
