"""Representation of credal sets as polytopes in the probability simplex.

   A credal set on a finite label space of size d is stored by its extreme
   points (the V-representation), each a :class:`ProbabilityVector`. The
   resulting :class:`CredalPolytope` is immutable; every operation here
   (:func:`marginalize`, :func:`strong_product`, :func:`homothety`, ...)
   returns a new polytope.

   Volumes, uncertainty measures, the axiom harness, packings and lifts
   live in the submodules :mod:`credalvol.volume`, :mod:`credalvol.measures`,
   :mod:`credalvol.axioms`, :mod:`credalvol.packing` and
   :mod:`credalvol.lift`.
"""

import numpy as np

__version__ = '0.1'

#: Tolerance on the sum (and on negative entries) of a probability vector.
TOL_SUM = 1e-9

#: Points closer than this are treated as the same vertex.
TOL_DEDUPE = 1e-10

#: Singular values at or below this are treated as zero when computing
#: the affine dimension of a polytope.
TOL_RANK = 1e-10

#: Default distance tolerance for :func:`contains`.
TOL_CONTAINS = 1e-9

# Tolerance for the leave-one-out extremality test of candidate vertices
_TOL_EXTREME = 1e-10

# Imported here so that geometry can see the tolerances above
from . import geometry  # noqa: E402


class EmptyInputError(ValueError):
    """Exception raised if a credal set is built from no points"""
    pass


class DimensionMismatchError(ValueError):
    """Exception raised if probability vectors or polytopes of different
       label counts are combined"""
    pass


class InvalidProbabilityVectorError(ValueError):
    """Exception raised for a vector that is not in the unit simplex"""
    pass


class InvalidGroupingError(ValueError):
    """Exception raised for an inconsistent :class:`Grouping`"""
    pass


class InvalidScaleError(ValueError):
    """Exception raised for a homothety factor outside (0, 1]"""
    pass


class InvalidEventError(ValueError):
    """Exception raised for an :class:`Event` not contained in the
       label space"""
    pass


class ProbabilityVector(object):
    """A categorical distribution on d labels; a point of the unit simplex.

       Entries that are negative by no more than `tol` are clamped to zero
       and the vector is then renormalized so that it sums to 1.

       :param values: Sequence of d probabilities.
       :param float tol: Tolerance on negative entries and on the sum
              (default :data:`TOL_SUM`).
       :raises InvalidProbabilityVectorError: if the vector is not a
               probability vector within `tol`.
    """
    __slots__ = ['values']

    def __init__(self, values, tol=None):
        if tol is None:
            tol = TOL_SUM
        v = np.array(values, dtype=float).ravel()
        if len(v) == 0:
            raise InvalidProbabilityVectorError("Empty probability vector")
        if not np.all(np.isfinite(v)):
            raise InvalidProbabilityVectorError(
                "Non-finite entry in %s" % repr(list(v)))
        if v.min() < -tol:
            raise InvalidProbabilityVectorError(
                "Negative entry %g in %s" % (v.min(), repr(list(v))))
        total = v.sum()
        if abs(total - 1.) > tol:
            raise InvalidProbabilityVectorError(
                "Entries of %s sum to %.17g, not 1" % (repr(list(v)), total))
        v = np.maximum(v, 0.)
        v /= v.sum()
        self.values = v
        self.values.flags.writeable = False

    @classmethod
    def _trusted(cls, values):
        """Wrap an array already known to be a probability vector"""
        obj = cls.__new__(cls)
        obj.values = np.array(values, dtype=float)
        obj.values.flags.writeable = False
        return obj

    d = property(lambda self: len(self.values),
                 doc="Number of labels")

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __eq__(self, other):
        return (isinstance(other, ProbabilityVector)
                and np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash(self.values.tobytes())

    def __repr__(self):
        return "ProbabilityVector(%s)" % repr(self.values.tolist())


class Event(object):
    """A subset of the label space {0, ..., d-1}, stored as a bitmask.

       Bit j of `mask` is set iff label j is in the event.

       :param int mask: The bitmask.
       :param int d: Number of labels.
    """
    __slots__ = ['mask', 'd']

    def __init__(self, mask, d):
        mask, d = int(mask), int(d)
        if d < 1 or mask < 0 or mask >= (1 << d):
            raise InvalidEventError(
                "Mask %d is not a subset of %d labels" % (mask, d))
        self.mask, self.d = mask, d

    @classmethod
    def from_labels(cls, labels, d):
        """Make an event from an iterable of 0-based label indices"""
        mask = 0
        for lab in labels:
            if lab < 0 or lab >= d:
                raise InvalidEventError(
                    "Label %d is not in the range 0-%d" % (lab, d - 1))
            mask |= 1 << lab
        return cls(mask, d)

    @classmethod
    def all(cls, d):
        """Yield every event on `d` labels (including the empty event and
           the whole space), in increasing mask order."""
        for mask in range(1 << d):
            yield cls(mask, d)

    labels = property(
        lambda self: tuple(j for j in range(self.d) if self.mask >> j & 1),
        doc="Sorted tuple of the labels in this event")

    @property
    def indicator(self):
        """Indicator vector of the event, as a float array"""
        return np.array([self.mask >> j & 1 for j in range(self.d)],
                        dtype=float)

    def complement(self):
        """Return the complementary event"""
        return Event(((1 << self.d) - 1) ^ self.mask, self.d)

    def __len__(self):
        return bin(self.mask).count('1')

    def __eq__(self, other):
        return (isinstance(other, Event) and self.mask == other.mask
                and self.d == other.d)

    def __hash__(self):
        return hash((self.mask, self.d))

    def __repr__(self):
        return "Event(%s, d=%d)" % (repr(set(self.labels)), self.d)


class Grouping(object):
    """Factorization of a joint label space into two factors.

       Each joint label is assigned a pair (i, j) with i a label of the
       first factor space (size `d1`) and j a label of the second (size
       `d2`). The joint space need not be the full product; for example
       :meth:`diagonal` keeps only two of the four pairs.

       :param factor_map: Sequence of (i, j) pairs, one per joint label.
       :param int d1: Number of labels in the first factor.
       :param int d2: Number of labels in the second factor.
       :raises InvalidGroupingError: if a pair is out of range or the map
               is not injective.
    """
    def __init__(self, factor_map, d1, d2):
        self.factor_map = tuple((int(i), int(j)) for i, j in factor_map)
        self.d1, self.d2 = int(d1), int(d2)
        if self.d1 < 1 or self.d2 < 1:
            raise InvalidGroupingError(
                "Factor sizes must be positive (got %d, %d)"
                % (self.d1, self.d2))
        if not self.factor_map:
            raise InvalidGroupingError("Grouping maps no joint labels")
        for i, j in self.factor_map:
            if not (0 <= i < self.d1 and 0 <= j < self.d2):
                raise InvalidGroupingError(
                    "Pair (%d, %d) is outside the %d x %d factor grid"
                    % (i, j, self.d1, self.d2))
        if len(set(self.factor_map)) != len(self.factor_map):
            raise InvalidGroupingError("Factor map is not injective")

    d = property(lambda self: len(self.factor_map),
                 doc="Number of joint labels")

    @classmethod
    def product(cls, d1, d2):
        """The full product space; joint label i*d2 + j is the pair (i, j).
           This matches the label order of :func:`strong_product`."""
        return cls([(i, j) for i in range(d1) for j in range(d2)], d1, d2)

    @classmethod
    def diagonal(cls):
        """The two-point joint space {(y1, y2), (y3, y4)} with y1 != y3 and
           y2 != y4, so that each factor has two labels."""
        return cls([(0, 0), (1, 1)], 2, 2)

    @classmethod
    def degenerate(cls, which):
        """The two-point joint space with one or both factors collapsed
           onto a single label.

           :param str which: 'first' (y1 = y3), 'second' (y2 = y4), or
                  'both', in which case the joint space has a single label.
        """
        if which == 'first':
            return cls([(0, 0), (0, 1)], 1, 2)
        elif which == 'second':
            return cls([(0, 0), (1, 0)], 2, 1)
        elif which == 'both':
            return cls([(0, 0)], 1, 1)
        raise InvalidGroupingError(
            "Invalid degenerate factor %s; valid values are 'first', "
            "'second', 'both'" % repr(which))

    def marginal_matrix(self, which):
        """Return the linear marginalization map for factor `which` (1 or
           2) as a (factor size) x d matrix of zeros and ones."""
        if which not in (1, 2):
            raise InvalidGroupingError(
                "Factor selector must be 1 or 2, not %s" % repr(which))
        size = self.d1 if which == 1 else self.d2
        m = np.zeros((size, self.d))
        for joint, pair in enumerate(self.factor_map):
            m[pair[which - 1], joint] = 1.
        return m

    def __repr__(self):
        return "Grouping(%s, d1=%d, d2=%d)" % (
            repr(list(self.factor_map)), self.d1, self.d2)


class CredalPolytope(object):
    """A credal set: the convex hull of finitely many probability vectors.

       Do not create these directly; use :func:`make_credal_polytope`,
       which validates the input and keeps only the extreme points.

       :param vertices: m x d array of extreme points, in canonical
              (lexicographic) order.
    """
    def __init__(self, vertices):
        self._vertices = np.array(vertices, dtype=float)
        self._vertices.flags.writeable = False
        self._chart = None
        self._coords = None

    d = property(lambda self: self._vertices.shape[1],
                 doc="Number of labels")

    vertex_array = property(lambda self: self._vertices,
                            doc="Extreme points as a read-only m x d array")

    @property
    def vertices(self):
        """Extreme points as a list of :class:`ProbabilityVector`"""
        return [ProbabilityVector._trusted(v) for v in self._vertices]

    @property
    def chart(self):
        """Isometric :class:`~credalvol.geometry.Chart` of the affine hull,
           with the first vertex as origin (computed on first use)"""
        if self._chart is None:
            self._chart = geometry.Chart.from_points(self._vertices)
        return self._chart

    k = property(lambda self: self.chart.k,
                 doc="Affine dimension (0 for a single point)")

    @property
    def chart_coords(self):
        """Vertices in chart coordinates, as an m x k array"""
        if self._coords is None:
            self._coords = self.chart.to_chart(self._vertices)
            self._coords.flags.writeable = False
        return self._coords

    @property
    def centroid(self):
        """Mean of the vertices"""
        return self._vertices.mean(axis=0)

    @property
    def radius(self):
        """Largest distance from the vertex centroid to a vertex"""
        return float(np.linalg.norm(self._vertices - self.centroid,
                                    axis=1).max())

    def __len__(self):
        return len(self._vertices)

    def __repr__(self):
        return "<CredalPolytope d=%d with %d vertices>" % (self.d, len(self))


def _dedupe(pts, tol):
    """Drop points within `tol` of an earlier point"""
    keep = []
    for i, p in enumerate(pts):
        if not keep or np.linalg.norm(pts[keep] - p, axis=1).min() > tol:
            keep.append(i)
    return pts[keep]


def _lexsort(pts):
    return pts[np.lexsort(pts.T[::-1])]


def _extreme_points(pts):
    """Return the extreme points of the hull of `pts` (already deduped)"""
    chart = geometry.Chart.from_points(pts)
    k = chart.k
    if k == 0:
        return pts[:1]
    coords = chart.to_chart(pts)
    if k <= 8:
        candidates = geometry.hull_vertex_indices(coords)
    else:
        candidates = np.arange(len(pts))
    if len(candidates) <= k + 1:
        return pts[candidates]
    # Qhull may report near-coplanar points as vertices; keep only those
    # outside the hull of the remaining candidates
    extreme = []
    for n, i in enumerate(candidates):
        others = coords[np.delete(candidates, n)]
        if geometry.point_hull_distance(others, coords[i]) > _TOL_EXTREME:
            extreme.append(i)
    return pts[extreme]


def make_credal_polytope(points):
    """Make a credal set from probability vectors.

       The credal set is the convex hull of the points. Duplicate and
       non-extreme points are discarded and the remaining extreme points
       are sorted lexicographically.

       :param points: Iterable of :class:`ProbabilityVector` objects or
              sequences of floats.
       :rtype: :class:`CredalPolytope`
       :raises EmptyInputError: if no points are given.
       :raises DimensionMismatchError: if the points have different lengths.
       :raises InvalidProbabilityVectorError: if a point is not in the
               simplex.
    """
    pvs = [p if isinstance(p, ProbabilityVector) else ProbabilityVector(p)
           for p in points]
    if not pvs:
        raise EmptyInputError("A credal set needs at least one point")
    d = pvs[0].d
    for p in pvs:
        if p.d != d:
            raise DimensionMismatchError(
                "Points have %d and %d labels" % (d, p.d))
    pts = _dedupe(_lexsort(np.array([p.values for p in pvs])), TOL_DEDUPE)
    return CredalPolytope(_lexsort(_extreme_points(pts)))


def vacuous(d):
    """Return the vacuous credal set (the whole simplex) on `d` labels"""
    return make_credal_polytope(np.eye(d))


def random_credal_polytope(d, m, rng):
    """Return the hull of `m` points drawn uniformly from the simplex.

       :param rng: A :class:`numpy.random.Generator`.
    """
    return make_credal_polytope(rng.dirichlet(np.ones(d), size=m))


def affine_hull_chart(p):
    """Return the isometric chart of the affine hull of credal set `p`.
       See :attr:`CredalPolytope.chart`."""
    return p.chart


def contains(p, x, tol=None):
    """Return True iff point `x` is within `tol` of the credal set `p`.

       `x` need not be a valid probability vector; points off the simplex
       are simply reported as not contained.

       :param p: The :class:`CredalPolytope`.
       :param x: The point, as a :class:`ProbabilityVector` or sequence.
       :param float tol: Distance tolerance (default :data:`TOL_CONTAINS`).
    """
    if tol is None:
        tol = TOL_CONTAINS
    x = np.asarray(x, dtype=float)
    if x.shape != (p.d,):
        raise DimensionMismatchError(
            "Point has %d labels but credal set has %d" % (x.size, p.d))
    return geometry.point_hull_distance(p.vertex_array, x) <= tol


def marginalize(p, grouping, which):
    """Return the marginal credal set of `p` on one factor of `grouping`.

       :param p: The joint :class:`CredalPolytope`.
       :param grouping: :class:`Grouping` of the joint labels.
       :param int which: 1 for the first factor, 2 for the second.
       :raises InvalidGroupingError: if the grouping does not describe
               `p`'s label space.
    """
    if grouping.d != p.d:
        raise InvalidGroupingError(
            "Grouping has %d joint labels but credal set has %d"
            % (grouping.d, p.d))
    m = grouping.marginal_matrix(which)
    return make_credal_polytope(p.vertex_array @ m.T)


def strong_product(p1, p2):
    """Return the strong product of two credal sets.

       This is the convex hull of all products of the extreme points of
       `p1` and `p2`, on d1*d2 labels ordered as :meth:`Grouping.product`.
    """
    prods = np.einsum('ai,bj->abij', p1.vertex_array, p2.vertex_array)
    return make_credal_polytope(prods.reshape(len(p1) * len(p2),
                                              p1.d * p2.d))


def homothety(p, t):
    """Scale credal set `p` by factor `t` about its vertex centroid.

       :param float t: Scale factor, 0 < t <= 1.
       :raises InvalidScaleError: if `t` is outside (0, 1].
    """
    if not 0. < t <= 1.:
        raise InvalidScaleError("Scale factor %g is not in (0, 1]" % t)
    if t == 1.:
        return p
    c = p.centroid
    # Positive scaling preserves extremality and lexicographic order
    return CredalPolytope(c + t * (p.vertex_array - c))


def _simplex_chart(d):
    return geometry.Chart.from_points(np.eye(d))


def transform(p, trans):
    """Apply a rigid motion of the simplex plane to credal set `p`.

       The motion is given as a :class:`~credalvol.geometry.Transformation`
       in the (d-1)-dimensional chart of the simplex and is applied about
       the vertex centroid of `p`.

       :raises InvalidProbabilityVectorError: if the moved set leaves
               the simplex.
    """
    chart = _simplex_chart(p.d)
    center = chart.to_chart(p.centroid)
    moved = trans.apply(chart.to_chart(p.vertex_array), center=center)
    return make_credal_polytope(chart.from_chart(moved))
