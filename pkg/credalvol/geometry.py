"""Classes and functions for handling the geometry of credal polytopes.

   Credal sets live in the unit simplex, an affine subspace of R^d. Most
   geometric work (volumes, packings, isometries) is done in an isometric
   :class:`Chart` of the affine hull of a polytope, so that Lebesgue measure
   in chart coordinates equals the Hausdorff measure of the embedded set.
"""

import math
import numpy as np
import scipy.linalg
import scipy.spatial
import credalvol


class Chart(object):
    """Isometric coordinates for the affine hull of a set of points.

       A point ``y`` in chart coordinates corresponds to the point
       ``origin + basis.T @ y`` in R^d. Because the rows of `basis` are
       orthonormal, the map preserves distances and volumes.

       Charts are usually obtained from :attr:`credalvol.CredalPolytope.chart`
       rather than being created directly.

       :param origin: Point of R^d (as a 1D float array) mapped to the
              chart origin.
       :param basis: k x d array with orthonormal rows spanning the
              direction space of the affine hull.
    """
    __slots__ = ['origin', 'basis']

    def __init__(self, origin, basis):
        self.origin = np.array(origin, dtype=float)
        self.basis = np.array(basis, dtype=float).reshape(-1,
                                                           len(self.origin))
        self.origin.flags.writeable = False
        self.basis.flags.writeable = False

    k = property(lambda self: self.basis.shape[0],
                 doc="Affine dimension of the chart")

    @classmethod
    def from_points(cls, points, tol=None):
        """Make a chart for the affine hull of `points`.

           The first point is used as the origin. The dimension is the
           numerical rank of the difference matrix, with singular values
           at or below `tol` treated as zero.

           :param points: m x d array of points.
           :param float tol: Rank tolerance (default
                  :data:`credalvol.TOL_RANK`).
           :rtype: :class:`Chart`
        """
        if tol is None:
            tol = credalvol.TOL_RANK
        points = np.asarray(points, dtype=float)
        if not np.all(np.isfinite(points)):
            raise ValueError("Cannot build a chart from non-finite points")
        origin = points[0]
        diffs = points[1:] - origin
        if len(diffs) == 0:
            return cls(origin, np.zeros((0, len(origin))))
        _, sing, vt = np.linalg.svd(diffs, full_matrices=False)
        k = int(np.sum(sing > tol))
        basis = vt[:k]
        # Fix the sign of each basis vector so charts are reproducible
        for row in basis:
            pivot = np.flatnonzero(np.abs(row) > 1e-12)
            if len(pivot) and row[pivot[0]] < 0.:
                row *= -1.
        return cls(origin, basis)

    def to_chart(self, points):
        """Map points of R^d (last axis) to chart coordinates."""
        return (np.asarray(points, dtype=float) - self.origin) @ self.basis.T

    def from_chart(self, coords):
        """Map chart coordinates (last axis of length k) back to R^d."""
        return self.origin + np.asarray(coords, dtype=float) @ self.basis


class Transformation(object):
    """Rotation and translation applied to chart coordinates.

       Transformations are used to check that uncertainty measures are
       invariant under isometries (see :func:`credalvol.transform`).

       :param rot_matrix: Rotation matrix (as a k x k array of floats).
       :param tr_vector: Translation vector (as a k-element float array).
    """
    def __init__(self, rot_matrix, tr_vector):
        self.rot_matrix = np.array(rot_matrix, dtype=float)
        self.tr_vector = np.array(tr_vector, dtype=float)

    @classmethod
    def identity(cls, dim=3):
        """Return the identity transformation.

           :param int dim: Dimension of the space.
           :return: A new identity Transformation.
           :rtype: :class:`Transformation`
        """
        return cls(np.eye(dim), np.zeros(dim))

    @classmethod
    def random(cls, dim, rng, angle=1.0, shift=0.):
        """Return a random proper rotation plus translation.

           The rotation is the matrix exponential of a random skew-symmetric
           matrix scaled so that no vector is rotated by more than `angle`
           radians; the translation is a random vector of length `shift`.

           :param int dim: Dimension of the space.
           :param rng: A :class:`numpy.random.Generator`.
           :rtype: :class:`Transformation`
        """
        if dim == 0:
            return cls(np.zeros((0, 0)), np.zeros(0))
        a = rng.normal(size=(dim, dim))
        skew = (a - a.T) / 2.
        norm = np.linalg.norm(skew, 2)
        rot = (scipy.linalg.expm(skew * (angle / norm)) if norm > 0.
               else np.eye(dim))
        tr = rng.normal(size=dim)
        tnorm = np.linalg.norm(tr)
        tr = tr * (shift / tnorm) if tnorm > 0. else np.zeros(dim)
        return cls(rot, tr)

    def apply(self, coords, center=None):
        """Apply the transformation to an array of points (last axis).
           If `center` is given, rotate about that point rather than
           the origin."""
        coords = np.asarray(coords, dtype=float)
        if center is None:
            center = np.zeros(coords.shape[-1])
        return center + (coords - center) @ self.rot_matrix.T + self.tr_vector

    def is_isometry(self, tol=1e-10):
        """Return True iff the rotation matrix is orthogonal within `tol`."""
        r = self.rot_matrix
        return bool(np.allclose(r @ r.T, np.eye(len(r)), atol=tol, rtol=0.))


class NearestPoint(object):
    """Result of a least-distance problem over a convex hull.
       See :func:`nearest_point`.

       :param point: The nearest point of the hull.
       :param float distance: Euclidean distance from the query point.
       :param weights: Convex-combination weights (one per hull point)
              reproducing `point`.
    """
    __slots__ = ['point', 'distance', 'weights']

    def __init__(self, point, distance, weights):
        self.point, self.distance, self.weights = point, distance, weights


def _affine_minimizer(pts):
    """Weights summing to 1 that minimize the norm of their combination
       of the rows of `pts`."""
    s = len(pts)
    if s == 1:
        return np.ones(1)
    kkt = np.zeros((s + 1, s + 1))
    kkt[:s, :s] = pts @ pts.T
    kkt[:s, s] = kkt[s, :s] = 1.
    rhs = np.zeros(s + 1)
    rhs[s] = 1.
    return np.linalg.lstsq(kkt, rhs, rcond=None)[0][:s]


def nearest_point(points, x, tol=1e-12, max_iter=1000):
    """Find the point of the convex hull of `points` nearest to `x`.

       This uses Wolfe's minimum-norm-point algorithm on the translated
       points ``points - x``, an active-set method that terminates with the
       exact least-distance convex combination (up to rounding).

       :param points: m x n array of hull generators.
       :param x: Query point (n-element array).
       :param float tol: Relative optimality tolerance.
       :param int max_iter: Maximum number of major cycles.
       :rtype: :class:`NearestPoint`
    """
    x = np.asarray(x, dtype=float)
    pts = np.asarray(points, dtype=float) - x
    m = len(pts)
    sqnorms = np.einsum('ij,ij->i', pts, pts)
    scale = max(float(sqnorms.max()), 1e-300)
    active = [int(np.argmin(sqnorms))]
    weights = np.ones(1)
    y = pts[active[0]].copy()
    for _ in range(max_iter):
        dots = pts @ y
        j = int(np.argmin(dots))
        if y @ y - dots[j] <= tol * scale or j in active:
            break
        active.append(j)
        weights = np.append(weights, 0.)
        # Minor cycles: each one drops at least one point from the active set
        while True:
            alpha = _affine_minimizer(pts[active])
            if np.all(alpha > 1e-15):
                weights = alpha
                break
            neg = np.flatnonzero(alpha <= 1e-15)
            denom = weights[neg] - alpha[neg]
            ratios = np.where(denom > 0., weights[neg] / np.where(
                denom > 0., denom, 1.), 0.)
            drop = neg[int(np.argmin(ratios))]
            theta = float(ratios.min())
            weights = theta * alpha + (1. - theta) * weights
            weights[drop] = 0.
            keep = weights > 1e-15
            active = [a for a, k in zip(active, keep) if k]
            weights = weights[keep]
            weights /= weights.sum()
        y = weights @ pts[active]
    full = np.zeros(m)
    full[active] = weights
    return NearestPoint(point=x + y, distance=math.sqrt(max(y @ y, 0.)),
                        weights=full)


def point_hull_distance(points, x):
    """Euclidean distance from `x` to the convex hull of `points`."""
    return nearest_point(points, x).distance


def hull_vertex_indices(coords):
    """Return indices of the points that Qhull reports as hull vertices.

       `coords` must be full-dimensional chart coordinates (m x k, k >= 1).
       If Qhull fails on a degenerate input, all indices are returned so
       that the caller can fall back to explicit extremality tests.
    """
    coords = np.asarray(coords, dtype=float)
    m, k = coords.shape
    if k == 1:
        return np.unique([int(np.argmin(coords[:, 0])),
                          int(np.argmax(coords[:, 0]))])
    if m <= k + 1:
        return np.arange(m)
    try:
        return np.sort(scipy.spatial.ConvexHull(coords).vertices)
    except scipy.spatial.QhullError:
        return np.arange(m)


def chart_halfspaces(coords):
    """Return facet inequalities ``A @ y + b <= 0`` of the hull of `coords`.

       `coords` must be full-dimensional chart coordinates (m x k, k >= 1).
       Rows of `A` are unit normals, so ``-(A @ y + b)`` is the signed
       distance from `y` to each facet hyperplane (positive inside).

       :return: Tuple of (A, b) arrays.
    """
    coords = np.asarray(coords, dtype=float)
    if coords.shape[1] == 1:
        lo, hi = coords[:, 0].min(), coords[:, 0].max()
        return np.array([[-1.], [1.]]), np.array([lo, -hi])
    hull = scipy.spatial.ConvexHull(coords)
    return hull.equations[:, :-1], hull.equations[:, -1]


def fan_volume(coords):
    """k-dimensional volume of the hull of full-dimensional chart points.

       The hull is triangulated as a fan from the first point over the
       (triangulated) Qhull facets that do not contain it; the volume is
       the sum of |det|/k! over the resulting simplices. Degenerate input
       has zero volume.
    """
    coords = np.asarray(coords, dtype=float)
    m, k = coords.shape
    if k == 0 or m <= k:
        return 0.
    if k == 1:
        return float(coords[:, 0].max() - coords[:, 0].min())
    try:
        hull = scipy.spatial.ConvexHull(coords)
    except scipy.spatial.QhullError:
        return 0.
    apex = coords[0]
    total = 0.
    for simplex in hull.simplices:
        if 0 in simplex:
            continue
        total += abs(np.linalg.det(coords[simplex] - apex))
    return total / math.factorial(k)
