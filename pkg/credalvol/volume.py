"""Classes and functions for computing volumes of credal sets.

   The volume of a credal set is the k-dimensional Hausdorff measure of the
   polytope, where k is its affine dimension, computed in an isometric
   chart. With this normalization the whole simplex on d labels has
   volume sqrt(d)/(d-1)!.
"""

import math
import numpy as np
import scipy.special
from credalvol.util import _text_choice_property, _substream, _map_tasks
import credalvol.geometry

#: Largest affine dimension for which :func:`volume_exact` triangulates.
MAX_EXACT_DIM = 8

#: Number of Monte Carlo samples drawn per chunk. Each chunk has its own
#: random substream, so estimates do not depend on the thread count.
MC_CHUNK_SIZE = 65536


class DimensionTooLargeError(ValueError):
    """Exception raised if exact volume is requested for a polytope of
       affine dimension above :data:`MAX_EXACT_DIM`.
       Use :func:`volume_mc` instead."""
    pass


class DimensionTooSmallError(ValueError):
    """Exception raised if a volume is requested at a dimension below
       the affine dimension of the polytope"""
    pass


class VolumeResult(object):
    """The volume of a credal set.

       :param int k: Dimension of the measure (the affine dimension of
              the polytope).
       :param float value: The k-dimensional volume.
       :param float stderr: Standard error of the value (0 for exact).
       :param str method: How the volume was obtained; either 'exact'
              or 'monte-carlo'.
    """
    method = _text_choice_property(
        "method", ["exact", "monte-carlo"],
        doc="How the volume was obtained")

    def __init__(self, k, value, stderr=0., method='exact'):
        self.k, self.value, self.stderr = k, value, stderr
        self.method = method

    def __repr__(self):
        return "<VolumeResult k=%d value=%.17g stderr=%g %s>" % (
            self.k, self.value, self.stderr, self.method)


def simplex_volume(d):
    """Return the (d-1)-dimensional volume of the unit simplex in R^d.

       This is sqrt(d)/(d-1)!. For d > 20 it is computed in log space.
    """
    if d < 2:
        raise ValueError("Simplex volume needs at least 2 labels, not %d" % d)
    if d > 20:
        return math.exp(0.5 * math.log(d) - scipy.special.gammaln(d))
    return math.sqrt(d) / math.factorial(d - 1)


def unit_ball_volume(d):
    """Return the volume of the d-dimensional unit Euclidean ball"""
    if d == 0:
        return 1.
    return math.exp(0.5 * d * math.log(math.pi)
                    - scipy.special.gammaln(0.5 * d + 1.))


def volume_exact(p):
    """Compute the volume of credal set `p` by triangulation.

       :param p: The :class:`~credalvol.CredalPolytope`.
       :rtype: :class:`VolumeResult`
       :raises DimensionTooLargeError: if the affine dimension exceeds
               :data:`MAX_EXACT_DIM`.
    """
    k = p.k
    if k > MAX_EXACT_DIM:
        raise DimensionTooLargeError(
            "Exact volume is limited to dimension %d (got %d); "
            "use Monte Carlo instead" % (MAX_EXACT_DIM, k))
    if k == 0:
        return VolumeResult(0, 0.)
    return VolumeResult(k, credalvol.geometry.fan_volume(p.chart_coords))


def _membership_test(coords):
    """Return a function mapping an n x k array of chart points to a
       boolean array of hull membership."""
    k = coords.shape[1]
    # Simplices have only k + 1 facets in any dimension
    if k <= MAX_EXACT_DIM or len(coords) == k + 1:
        normals, offsets = credalvol.geometry.chart_halfspaces(coords)

        def inside(y):
            return np.all(y @ normals.T + offsets <= 0., axis=1)
    else:
        def inside(y):
            return np.array([credalvol.geometry.point_hull_distance(
                coords, pt) <= credalvol.TOL_CONTAINS for pt in y])
    return inside


def _mc_hits(coords, samples, seed, threads=None, chunk_size=None):
    """Count uniform samples from the bounding box of `coords` that fall
       in their hull. Returns (hits, box volume)."""
    if chunk_size is None:
        chunk_size = MC_CHUNK_SIZE
    lo, hi = coords.min(axis=0), coords.max(axis=0)
    inside = _membership_test(coords)
    nchunk = (samples + chunk_size - 1) // chunk_size

    def count_chunk(index):
        n = min(chunk_size, samples - index * chunk_size)
        rng = _substream(seed, index)
        y = lo + (hi - lo) * rng.random((n, len(lo)))
        return int(np.count_nonzero(inside(y)))
    hits = sum(_map_tasks(count_chunk, range(nchunk), threads))
    return hits, float(np.prod(hi - lo))


def volume_mc(p, samples, seed=0, threads=None):
    """Estimate the volume of credal set `p` by hit-or-miss Monte Carlo.

       Points are drawn uniformly from the axis-aligned bounding box of the
       vertices in chart coordinates. The estimate depends only on
       (`seed`, `samples`, :data:`MC_CHUNK_SIZE`), not on `threads`.

       A single point has an exact volume of zero and is not sampled.

       :param int samples: Number of sample points.
       :param int seed: Seed for the random substreams.
       :param int threads: Maximum number of worker threads.
       :rtype: :class:`VolumeResult`
    """
    if samples < 1:
        raise ValueError("Need at least one sample, not %d" % samples)
    k = p.k
    if k == 0:
        return VolumeResult(0, 0.)
    hits, box = _mc_hits(p.chart_coords, samples, seed, threads)
    frac = hits / float(samples)
    return VolumeResult(k, frac * box,
                        box * math.sqrt(frac * (1. - frac) / samples),
                        'monte-carlo')


def volume_fixed_dim(p, k_requested):
    """Return the `k_requested`-dimensional volume of credal set `p`.

       This is zero if `k_requested` exceeds the affine dimension of `p`
       and the exact volume if it equals it.

       :raises DimensionTooSmallError: if `k_requested` is below the
               affine dimension.
    """
    k = p.k
    if k_requested < k:
        raise DimensionTooSmallError(
            "A %d-dimensional set has no finite %d-dimensional volume"
            % (k, k_requested))
    elif k_requested > k:
        return 0.
    return volume_exact(p).value
