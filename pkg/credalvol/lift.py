"""Classes and functions for lifting credal sets into larger simplices.

   A credal set on d' labels has zero (d-1)-dimensional volume when viewed
   inside the simplex on d > d' labels. A lift replaces it by a set K of
   full dimension in the larger simplex whose volume matches the volume of
   the original set, chosen from a parametric family of cones:

     - the set is placed on a facet of the larger simplex by appending
       zero probabilities for the new labels;
     - on that facet it is enlarged to the hull B of the points
       (1 - lam) p + lam e_j, for each vertex p and each facet vertex e_j;
     - K is the cone over B with apex (1 - h) c + h e_new, where c is the
       centroid of B and e_new the vertex for the new label.

   The parameters (lam, h) in [0, 1]^2 are searched to minimize the volume
   mismatch. Lifts by more than one label go through intermediate cones
   with lam = 0, h = 1.
"""

import math
import numpy as np
import credalvol
import credalvol.volume
from credalvol.util import _map_tasks

#: Number of grid points per parameter in the coarse search.
GRID_POINTS = 33


class InfeasibleEmbeddingError(ValueError):
    """Exception raised if a credal set cannot be embedded in the
       requested simplex"""
    pass


class ZeroReferenceVolumeError(ValueError):
    """Exception raised if a relative volume change is requested with
       respect to a set of zero volume"""
    pass


class EmbeddingSpec(object):
    """Affine map from the target simplex back to the source set's space.

       The map sends x to ``V @ x + b``. `V` has orthonormal rows, so its
       transpose embeds the source space isometrically in the target space.

       :param V: d' x d matrix with orthonormal rows.
       :param b: Offset, a d'-element vector.
    """
    def __init__(self, V, b):
        self.V = np.array(V, dtype=float)
        self.b = np.array(b, dtype=float)

    @classmethod
    def coordinate(cls, d_source, d_target):
        """Embedding that appends zero probabilities for new labels"""
        return cls(np.eye(d_target)[:d_source], np.zeros(d_source))

    def is_orthonormal(self, tol=1e-10):
        """Return True iff the rows of V are orthonormal within `tol`"""
        return bool(np.allclose(self.V @ self.V.T, np.eye(len(self.V)),
                                atol=tol, rtol=0.))

    def apply(self, x):
        """Map target-space points (last axis) to the source space"""
        return np.asarray(x, dtype=float) @ self.V.T + self.b

    def embed(self, y):
        """Map source-space points (last axis) into the target space"""
        return (np.asarray(y, dtype=float) - self.b) @ self.V


class LiftResult(object):
    """The result of :func:`lift_probability_set`.

       This unpacks as the tuple (lifted, spec, gap).

       :param lifted: The lifted :class:`~credalvol.CredalPolytope`.
       :param spec: The :class:`EmbeddingSpec` relating it to the source.
       :param float gap: Absolute difference between the volume of the
              lifted set and that of the source.
       :param float source_volume: Volume of the source set, in its own
              simplex dimension.
       :param float lifted_volume: Volume of the lifted set.
       :param tuple params: The (lam, h) parameters of the final cone.
    """
    def __init__(self, lifted, spec, gap, source_volume, lifted_volume,
                 params):
        self.lifted, self.spec, self.gap = lifted, spec, gap
        self.source_volume, self.lifted_volume = source_volume, lifted_volume
        self.params = params

    def __iter__(self):
        return iter((self.lifted, self.spec, self.gap))


def _pad(points, d):
    points = np.asarray(points, dtype=float)
    out = np.zeros((len(points), d))
    out[:, :points.shape[1]] = points
    return out


def _enlarged_base(p, lam):
    """Hull of (1 - lam) v + lam e_j for vertices v of p and labels j"""
    if lam == 0.:
        return p
    verts = p.vertex_array
    pts = ((1. - lam) * verts[:, np.newaxis, :]
           + lam * np.eye(p.d)[np.newaxis, :, :])
    return credalvol.make_credal_polytope(pts.reshape(-1, p.d))


def _cone(base, h):
    """Cone over `base` (padded with a zero label) with apex height
       fraction `h` towards the new label's vertex"""
    d = base.d + 1
    verts = _pad(base.vertex_array, d)
    apex = (1. - h) * verts.mean(axis=0)
    apex[-1] += h
    return credalvol.make_credal_polytope(np.vstack([verts, apex]))


def _facet_height(d):
    """Distance from a vertex of the d-label simplex to the opposite facet"""
    return math.sqrt(d / (d - 1.))


def _set_volume(p):
    """Volume of `p` in the dimension of its own simplex"""
    if p.d < 2:
        return 0.
    if p.d - 1 > credalvol.volume.MAX_EXACT_DIM:
        raise InfeasibleEmbeddingError(
            "Volumes on %d labels exceed the exact volume limit" % p.d)
    return credalvol.volume.volume_fixed_dim(p, p.d - 1)


def _search(p, target, threads=None, tol=1e-8):
    """Find (lam, h) minimizing |Vol(cone) - target| for a one-label lift.
       Returns (lam, h)."""
    d = p.d + 1
    scale = _facet_height(d) / (d - 1.)
    grid = np.linspace(0., 1., GRID_POINTS)

    def base_volume(lam):
        return _set_volume(_enlarged_base(p, lam))
    vb = np.array(_map_tasks(base_volume, grid, threads))
    gaps = np.abs(np.outer(vb, grid) * scale - target)
    # argmin over the lam-major flattening gives the lexicographically
    # first (lam, h) among equal gaps
    i, j = np.unravel_index(int(np.argmin(gaps)), gaps.shape)
    lam, h = float(grid[i]), float(grid[j])
    if gaps[i, j] <= tol or vb[-1] * scale <= target:
        return lam, h
    if vb[i] * scale >= target:
        return lam, target / (vb[i] * scale)
    # Even at full height the cone is too small: bisect lam with h = 1
    lo, hi = lam, 1.
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        if base_volume(mid) * scale < target:
            lo = mid
        else:
            hi = mid
    return hi, min(1., target / (base_volume(hi) * scale))


def lift_probability_set(p, d_target, threads=None):
    """Lift credal set `p` into the simplex on `d_target` labels.

       The lifted set is chosen from the cone family described in the
       module documentation to minimize the absolute difference between
       its (d_target-1)-dimensional volume and the (d'-1)-dimensional
       volume of `p`. Among equally good parameters the lexicographically
       first (lam, h) from the coarse grid is refined.

       If `d_target` equals the label count of `p`, `p` is returned
       unchanged with zero gap.

       :rtype: :class:`LiftResult`
       :raises InfeasibleEmbeddingError: if `d_target` is smaller than the
               label count of `p`.
    """
    d_source = p.d
    if d_target < d_source:
        raise InfeasibleEmbeddingError(
            "Cannot lift a set on %d labels into %d labels"
            % (d_source, d_target))
    spec = EmbeddingSpec.coordinate(d_source, d_target)
    target = _set_volume(p)
    if d_target == d_source:
        return LiftResult(p, spec, 0., target, target, (0., 0.))
    base = p
    while base.d < d_target - 1:
        base = _cone(base, 1.)
    lam, h = _search(base, target, threads)
    lifted = _cone(_enlarged_base(base, lam), h)
    try:
        lifted_volume = _set_volume(lifted)
    except InfeasibleEmbeddingError:
        d = d_target
        lifted_volume = (_set_volume(_enlarged_base(base, lam)) * h
                         * _facet_height(d) / (d - 1.))
    return LiftResult(lifted, spec, abs(lifted_volume - target), target,
                      lifted_volume, (lam, h))


def check_embedding(result, p, tol=1e-9):
    """Return True iff the embedded vertices of `p` lie in the lifted set
       and map back onto themselves under the result's spec"""
    emb = result.spec.embed(p.vertex_array)
    back = result.spec.apply(emb)
    return (np.allclose(back, p.vertex_array, atol=tol, rtol=0.)
            and all(credalvol.contains(result.lifted, x, tol) for x in emb))


def _relative_variation(reference, other):
    if reference <= 0.:
        raise ZeroReferenceVolumeError(
            "Reference set has zero volume")
    return abs(reference - other) / reference


def relative_volume_variation(p_n, k):
    """Return |Vol(p_n) - Vol(k)| / Vol(p_n).

       Each volume is taken in the dimension of its own simplex, so a set
       and its lift are compared on equal terms.

       :raises ZeroReferenceVolumeError: if `p_n` has zero volume.
    """
    return _relative_variation(_set_volume(p_n), _set_volume(k))


def a3_failure_pair(height=0.05):
    """Construct credal sets showing that lifting breaks monotonicity.

       Q is a segment on two labels. P is a thin triangle on three labels
       containing Q (with a zero third probability), so that Q is a proper
       subset of P. The lift of Q, however, has area matching Q's length
       and so cannot fit inside P.

       :return: Tuple (P, Q, lifted Q, witness vertex of lifted Q outside
                P, or None if the lift happens to fit).
    """
    q = credalvol.make_credal_polytope([[0.3, 0.7], [0.7, 0.3]])
    seg = _pad(q.vertex_array, 3)
    apex = seg.mean(axis=0) + height * np.array([-0.5, -0.5, 1.]) \
        / math.sqrt(1.5)
    p = credalvol.make_credal_polytope(np.vstack([seg, apex]))
    lifted = lift_probability_set(q, 3).lifted
    outside = [v for v in lifted.vertex_array
               if not credalvol.contains(p, v)]
    return p, q, lifted, (outside[0] if outside else None)
