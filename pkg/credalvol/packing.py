"""Classes and functions for packings of credal sets and the robustness
   experiments built on them.

   An r-packing of a credal set places disjoint balls of radius r, of the
   set's own affine dimension, inside it. Packing numbers are estimated from
   below by a greedy search over a candidate grid in chart coordinates; the
   resulting :class:`PackingResult` carries a certificate of containment,
   disjointness and maximality with respect to that grid.
"""

import math
import warnings
import numpy as np
import scipy.optimize
import credalvol
import credalvol.geometry
import credalvol.volume
from credalvol.util import _substream, _map_tasks

# Slack allowed in containment and separation margins
_MARGIN_TOL = 1e-12


class EpsilonTooLargeError(ValueError):
    """Exception raised if an erosion would remove the whole set"""
    pass


class InvalidRadiiError(ValueError):
    """Exception raised unless 0 < eps < r"""
    pass


class UnknownDimensionError(ValueError):
    """Exception raised for a dimension whose optimal sphere packing
       density is not known"""
    pass


class EstimateWarning(Warning):
    """Warning for a conclusion that rests on estimated packing numbers"""
    pass


class VolumeEstimateError(ArithmeticError):
    """Exception raised if a Monte Carlo volume estimate is zero"""
    pass


def hausdorff_distance(p, q):
    """Return the Hausdorff distance between credal sets `p` and `q`.

       The distance to a convex set is a convex function, so its maximum
       over the other set is attained at a vertex; only vertices are
       checked.
    """
    if p.d != q.d:
        raise credalvol.DimensionMismatchError(
            "Credal sets have %d and %d labels" % (p.d, q.d))
    pv, qv = p.vertex_array, q.vertex_array
    return max(max(credalvol.geometry.point_hull_distance(qv, x) for x in pv),
               max(credalvol.geometry.point_hull_distance(pv, x) for x in qv))


def erode(p, eps):
    """Shrink credal set `p` to a subset at Hausdorff distance `eps`.

       The subset is a homothety of `p` about its vertex centroid. The
       factor 1 - eps/R (R being :attr:`~credalvol.CredalPolytope.radius`)
       is used when it gives distance `eps`; otherwise the factor is found
       by root finding.

       :raises EpsilonTooLargeError: if `eps` is at least R.
    """
    if eps <= 0.:
        raise ValueError("Erosion distance must be positive, not %g" % eps)
    radius = p.radius
    if eps >= radius:
        raise EpsilonTooLargeError(
            "Erosion by %g would collapse a set of radius %g"
            % (eps, radius))
    t = 1. - eps / radius
    q = credalvol.homothety(p, t)
    if abs(hausdorff_distance(p, q) - eps) <= _MARGIN_TOL:
        return q

    def excess(t):
        return hausdorff_distance(p, credalvol.homothety(p, t)) - eps
    # Distance shrinks from R at t -> 0 to 0 at t = 1
    t = scipy.optimize.brentq(excess, 1e-12, 1., xtol=1e-15)
    return credalvol.homothety(p, t)


class PackingResult(object):
    """The result of a greedy r-packing. See :func:`greedy_packing`.

       :param float radius: Ball radius r.
       :param centers: Ball centers, as an N x k array of chart coordinates.
       :param chart: The :class:`~credalvol.geometry.Chart` of `centers`.
       :param int restarts: Number of restarts tried.
       :param float pitch: Spacing of the candidate grid.
       :param dict certificate: Margins and flags; see :func:`greedy_packing`.
    """
    def __init__(self, radius, centers, chart, restarts, pitch, certificate):
        self.radius, self.centers, self.chart = radius, centers, chart
        self.restarts, self.pitch = restarts, pitch
        self.certificate = certificate

    count = property(lambda self: len(self.centers),
                     doc="Number of balls; a lower bound on the packing "
                         "number")

    @property
    def valid(self):
        """True iff the certificate shows containment, disjointness and
           maximality against the candidate grid"""
        c = self.certificate
        return (c['min_clearance_margin'] >= -_MARGIN_TOL
                and c['min_separation_margin'] >= -_MARGIN_TOL
                and c['min_exclusion_margin'] >= -_MARGIN_TOL
                and c['grid_maximal'])

    def centers_in_simplex(self):
        """Return the centers as probability vectors (an N x d array)"""
        return self.chart.from_chart(self.centers)


def _feasible_region(normals, offsets, r):
    """Bounding box and Chebyshev center of {y : normals @ y + offsets <= -r}.
       Returns (lo, hi, center), or None if the region is empty."""
    k = normals.shape[1]
    # Chebyshev center: maximize t subject to normals @ y + t <= -offsets - r
    a_ub = np.hstack([normals, np.ones((len(normals), 1))])
    res = scipy.optimize.linprog(np.r_[np.zeros(k), -1.], A_ub=a_ub,
                                 b_ub=-offsets - r,
                                 bounds=[(None, None)] * k + [(0., None)],
                                 method='highs')
    if res.status != 0:
        return None
    center = res.x[:k]
    lo, hi = center.copy(), center.copy()
    for i in range(k):
        c = np.zeros(k)
        c[i] = 1.
        for sign, out in ((1., lo), (-1., hi)):
            res = scipy.optimize.linprog(sign * c, A_ub=normals,
                                         b_ub=-offsets - r,
                                         bounds=[(None, None)] * k,
                                         method='highs')
            if res.status == 0:
                out[i] = res.x[i]
    return lo, hi, center


def _grid(origin, lo, hi, pitch, max_candidates):
    """Points of the lattice origin + pitch * Z^k that cover [lo, hi]; the
       pitch is increased if there would be more than `max_candidates`.
       Returns (points, pitch)."""
    while True:
        start = np.floor((lo - origin) / pitch).astype(int)
        stop = np.ceil((hi - origin) / pitch).astype(int)
        counts = (stop - start + 1).astype(float)
        if np.prod(counts) <= max_candidates:
            break
        pitch *= (np.prod(counts) / max_candidates) ** (1. / len(counts)) \
            * 1.01
    axes = [origin[i] + pitch * np.arange(start[i], stop[i] + 1)
            for i in range(len(origin))]
    mesh = np.meshgrid(*axes, indexing='ij')
    return np.stack([m.ravel() for m in mesh], axis=1), pitch


class _Region(object):
    """Candidate filter: balls of radius r inside the hull of `coords` and,
       optionally, outside the hull of `exclude` (both chart coordinates)"""
    def __init__(self, coords, r, exclude):
        self.r = r
        self.normals, self.offsets = credalvol.geometry.chart_halfspaces(
            coords)
        self.exclude = exclude
        self.ex_halfspaces = None
        if exclude is not None and len(exclude) > exclude.shape[1]:
            chart = credalvol.geometry.Chart.from_points(exclude)
            if chart.k == exclude.shape[1]:
                self.ex_halfspaces = credalvol.geometry.chart_halfspaces(
                    exclude)

    def clearance(self, y):
        """Distance from each point to the boundary (negative outside)"""
        return -(y @ self.normals.T + self.offsets).max(axis=1)

    def separation(self, y):
        """Lower bound on the distance from each point to the excluded
           set (+inf if there is none)"""
        if self.exclude is None:
            return np.full(len(y), np.inf)
        if self.ex_halfspaces is not None:
            normals, offsets = self.ex_halfspaces
            return (y @ normals.T + offsets).max(axis=1)
        return np.array([credalvol.geometry.point_hull_distance(
            self.exclude, x) for x in y])

    def feasible(self, y):
        return ((self.clearance(y) >= self.r - _MARGIN_TOL)
                & (self.separation(y) >= self.r - _MARGIN_TOL))


def _greedy(cands, r):
    """Take candidates in order, dropping those within 2r of a taken one"""
    remaining = np.ones(len(cands), dtype=bool)
    taken = []
    limit = (2. * r - _MARGIN_TOL) ** 2
    for i in range(len(cands)):
        if not remaining[i]:
            continue
        taken.append(i)
        diff = cands - cands[i]
        remaining &= np.einsum('ij,ij->i', diff, diff) >= limit
    return cands[taken]


def greedy_packing(p, r, seed=0, restarts=16, pitch=None, jitter=None,
                   exclude=None, threads=None, max_candidates=200000):
    """Find a maximal r-packing of credal set `p` greedily.

       Candidate centers form a regular grid (pitch r/4 by default) over the
       region where a ball of radius `r` fits inside `p`, in chart
       coordinates. The first restart takes the unperturbed grid in
       lexicographic order; each further restart perturbs every candidate
       by up to `jitter` (r/8 by default) per coordinate and takes them in
       a random order. The restart with the most balls wins (the earliest
       on ties). Each restart draws from its own random substream, so the
       result does not depend on `threads`.

       The certificate dict holds 'min_clearance_margin' (smallest distance
       from a ball to the boundary), 'min_separation_margin' (smallest
       center distance minus 2r), 'min_exclusion_margin' (smallest distance
       bound to `exclude`, minus r) and 'grid_maximal' (True iff no
       feasible candidate of the winning restart could take another ball).

       Above :data:`credalvol.volume.MAX_EXACT_DIM` the grid gets coarse
       (at most `max_candidates` points), so counts are weaker lower
       bounds there.

       :param p: The :class:`~credalvol.CredalPolytope` to pack.
       :param float r: Ball radius.
       :param exclude: Optional credal set; balls must also avoid it.
       :rtype: :class:`PackingResult`
    """
    if r <= 0.:
        raise ValueError("Packing radius must be positive, not %g" % r)
    k = p.k
    pitch = r / 4. if pitch is None else pitch
    jitter = r / 8. if jitter is None else jitter
    empty = {'min_clearance_margin': 0., 'min_separation_margin': 0.,
             'min_exclusion_margin': 0., 'grid_maximal': True,
             'candidates': 0}
    if k == 0:
        return PackingResult(r, np.zeros((0, 0)), p.chart, 0, pitch, empty)
    ex = (None if exclude is None
          else p.chart.to_chart(exclude.vertex_array))
    region = _Region(p.chart_coords, r, ex)
    region_box = _feasible_region(region.normals, region.offsets, r)
    if region_box is None:
        return PackingResult(r, np.zeros((0, k)), p.chart, 0, pitch, empty)
    lo, hi, center = region_box
    grid, pitch = _grid(p.chart_coords.min(axis=0), lo - jitter,
                        hi + jitter, pitch, max_candidates)

    def run(index):
        if index == 0:
            cands = np.vstack([grid, center])
            cands = cands[np.lexsort(cands.T[::-1])]
            cands = cands[region.feasible(cands)]
        else:
            rng = _substream(seed, index)
            moved = np.vstack([grid + rng.uniform(-jitter, jitter,
                                                  grid.shape), center])
            cands = moved[region.feasible(moved)]
            cands = cands[rng.permutation(len(cands))]
        return cands, _greedy(cands, r)
    runs = _map_tasks(run, range(max(restarts, 1)), threads)
    best = int(np.argmax([len(centers) for _, centers in runs]))
    cands, centers = runs[best]
    return PackingResult(r, centers, p.chart, len(runs), pitch,
                         _certificate(region, cands, centers, r))


def _certificate(region, cands, centers, r):
    cert = {'candidates': len(cands)}
    if len(centers) == 0:
        cert.update({'min_clearance_margin': 0.,
                     'min_separation_margin': 0.,
                     'min_exclusion_margin': 0.,
                     'grid_maximal': len(cands) == 0})
        return cert
    cert['min_clearance_margin'] = float(
        (region.clearance(centers) - r).min())
    sep = region.separation(centers)
    cert['min_exclusion_margin'] = (float((sep - r).min())
                                    if np.all(np.isfinite(sep)) else 0.)
    if len(centers) > 1:
        diff = centers[:, np.newaxis, :] - centers[np.newaxis, :, :]
        dist = np.sqrt(np.einsum('ijk,ijk->ij', diff, diff))
        dist[np.diag_indices(len(centers))] = np.inf
        cert['min_separation_margin'] = float(dist.min() - 2. * r)
    else:
        cert['min_separation_margin'] = 0.
    maximal = True
    for c in cands:
        if (np.linalg.norm(centers - c, axis=1).min()
                >= 2. * r - _MARGIN_TOL):
            maximal = False
            break
    cert['grid_maximal'] = maximal
    return cert


def _c_ratio(count, r, k, volume):
    if volume <= 0.:
        return 0.
    return count * credalvol.volume.unit_ball_volume(k) * r ** k / volume


def c_ratio(packing, p, samples=100000, seed=0):
    """Return the fraction of the volume of `p` covered by the balls of
       `packing`, N Vol(B_r) / Vol(p).

       Vol(p) is estimated from `samples` Monte Carlo points if its affine
       dimension is above :data:`credalvol.volume.MAX_EXACT_DIM`."""
    if p.k > credalvol.volume.MAX_EXACT_DIM:
        volume = credalvol.volume.volume_mc(p, samples, seed)
    else:
        volume = credalvol.volume.volume_exact(p)
    return _c_ratio(packing.count, packing.radius, p.k, volume.value)


class Theorem1Report(object):
    """Outcome of :func:`theorem1_experiment`.

       The outer set P, its erosion Q at Hausdorff distance `eps` and the
       shell Q' between them are compared through their volumes and
       estimated packing numbers. The shell packing number is taken as
       N(P, r - eps) - N(Q, r - eps) (`n_outer` minus `n_inner`, clamped
       at zero); `n_shell_direct` is the number of balls of radius
       r - eps a direct search places in P while avoiding Q. Verdicts:

         - `identity_holds`: Vol(Q) + Vol(Q') = Vol(P);
         - `condition_c`: N(P, r) >= N(Q', r - eps) for the estimates;
         - `inequality_holds`: lhs >= rhs, evaluated only if
           `condition_c` holds (None otherwise).
    """
    def __init__(self, **kwargs):
        self.__dict__.update(kwargs)

    _fields = ['d', 'eps', 'r', 'volume_method', 'vol_p', 'vol_q',
               'vol_shell', 'lhs', 'rhs', 'ratio_inner', 'ratio_shell',
               'n_p', 'n_outer', 'n_inner', 'n_shell', 'n_shell_direct',
               'c_p', 'c_shell', 'identity_holds', 'condition_c',
               'inequality_holds', 'literal_inequality_fails',
               'estimate_flag', 'certificate_p', 'certificate_outer',
               'certificate_inner', 'certificate_shell']

    def as_dict(self):
        """Return the report as a JSON-compatible dict"""
        return dict((f, getattr(self, f)) for f in self._fields)


def theorem1_rhs(d, eps, r):
    """Return the bound 1 - (1 - eps/r)^d"""
    return 1. - (1. - eps / r) ** d


def _base_set(d, base):
    """Return (P, t) where P is the outer set and t its homothety factor
       relative to the whole simplex (None if P is not one)"""
    if base is None or base == 'simplex':
        return credalvol.vacuous(d), 1.
    elif isinstance(base, credalvol.CredalPolytope):
        return base, None
    t = float(base)
    return credalvol.homothety(credalvol.vacuous(d), t), t


def _outer_volume(p, scale, samples, seed, threads):
    """Volume of the outer set: triangulated up to MAX_EXACT_DIM, above it
       in closed form for simplex homotheties and by Monte Carlo otherwise.
       Returns (value, method)."""
    k = p.k
    if k <= credalvol.volume.MAX_EXACT_DIM:
        return credalvol.volume.volume_exact(p).value, 'exact'
    elif scale is not None:
        return scale ** k * credalvol.volume.simplex_volume(p.d), 'exact'
    v = credalvol.volume.volume_mc(p, samples, seed, threads)
    return v.value, v.method


def theorem1_experiment(d, eps, r, base=None, seed=0, restarts=16,
                        threads=None, pitch=None, samples=100000):
    """Run the volume-concentration experiment on one configuration.

       Volumes are exact for affine dimension up to
       :data:`credalvol.volume.MAX_EXACT_DIM`. Above it the whole simplex
       and its homotheties use the closed form and any other `base` is
       estimated from `samples` Monte Carlo points; Vol(Q) then follows
       from Vol(P) by the homothety scaling law.

       :param int d: Number of labels.
       :param float eps: Erosion distance.
       :param float r: Packing radius.
       :param base: The outer set P: None or 'simplex' for the whole
              simplex, a float t for its homothety by t, or a
              :class:`~credalvol.CredalPolytope`.
       :rtype: :class:`Theorem1Report`
       :raises InvalidRadiiError: unless 0 < eps < r.
       :raises VolumeEstimateError: if a Monte Carlo estimate of Vol(P)
               is zero.
    """
    if not 0. < eps < r:
        raise InvalidRadiiError(
            "Need 0 < eps < r (got eps=%g, r=%g)" % (eps, r))
    p, scale = _base_set(d, base)
    q = erode(p, eps)
    k = p.k
    vol_p, method = _outer_volume(p, scale, samples, seed, threads)
    if method == 'exact' and k <= credalvol.volume.MAX_EXACT_DIM:
        vol_q = credalvol.volume.volume_exact(q).value
    else:
        # Q is a homothety of P
        vol_q = vol_p * (q.radius / p.radius) ** k
    if vol_p <= 0.:
        raise VolumeEstimateError(
            "Monte Carlo found no volume in the outer set; "
            "use more samples")
    vol_shell = vol_p - vol_q
    lhs = (vol_p - vol_shell) / vol_p
    rhs = theorem1_rhs(d, eps, r)

    def pack(s, radius, exclude=None):
        return greedy_packing(s, radius, seed=seed, restarts=restarts,
                              exclude=exclude, threads=threads, pitch=pitch)
    pack_p = pack(p, r)
    pack_outer = pack(p, r - eps)
    pack_inner = pack(q, r - eps)
    pack_direct = pack(p, r - eps, exclude=q)
    n_shell = max(pack_outer.count - pack_inner.count, 0)
    condition_c = pack_p.count >= n_shell
    inequality = None
    if condition_c:
        inequality = lhs >= rhs
        warnings.warn("Inequality verdict for d=%d eps=%g r=%g rests on "
                      "estimated packing numbers" % (d, eps, r),
                      EstimateWarning, stacklevel=2)
    return Theorem1Report(
        d=d, eps=eps, r=r, volume_method=method, vol_p=vol_p, vol_q=vol_q,
        vol_shell=vol_shell, lhs=lhs, rhs=rhs, ratio_inner=vol_q / vol_p,
        ratio_shell=vol_shell / vol_p, n_p=pack_p.count,
        n_outer=pack_outer.count, n_inner=pack_inner.count,
        n_shell=n_shell, n_shell_direct=pack_direct.count,
        c_p=_c_ratio(pack_p.count, r, k, vol_p),
        c_shell=_c_ratio(n_shell, r - eps, k, vol_shell),
        identity_holds=abs(vol_q + vol_shell - vol_p) <= 1e-10,
        condition_c=condition_c, inequality_holds=inequality,
        literal_inequality_fails=lhs < rhs, estimate_flag=True,
        certificate_p=pack_p.certificate,
        certificate_outer=pack_outer.certificate,
        certificate_inner=pack_inner.certificate,
        certificate_shell=pack_direct.certificate)


def theorem1_sweep(d_range=range(2, 6), ratios=(0.1, 0.25, 0.5), r=0.15,
                   seed=0, restarts=16, threads=None, samples=100000):
    """Run :func:`theorem1_experiment` over a grid of label counts and
       ratios eps/r. Returns a list of reports in grid order."""
    return [theorem1_experiment(d, ratio * r, r, seed=seed,
                                restarts=restarts, threads=threads,
                                samples=samples)
            for d in d_range for ratio in ratios]


def search_certified_configuration(p, eps_grid, r_grid, seed=0,
                                   restarts=4, threads=None):
    """Look for (eps, r) for which the packing condition can be certified.

       :return: Tuple of (list of (eps, r, certified) rows, first certified
                (eps, r) pair or None).
    """
    rows, first = [], None
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', EstimateWarning)
        for r in r_grid:
            for eps in eps_grid:
                if not 0. < eps < r or eps >= p.radius:
                    continue
                rep = theorem1_experiment(p.d, eps, r, base=p, seed=seed,
                                          restarts=restarts, threads=threads)
                rows.append((eps, r, rep.condition_c))
                if rep.condition_c and first is None:
                    first = (eps, r)
    return rows, first


def c_star(d):
    """Return the optimal sphere packing density in d dimensions.

       :raises UnknownDimensionError: unless d is 1, 2, 3, 8 or 24, the
               only dimensions where it is known.
    """
    if d == 1:
        return 1.
    elif d == 2:
        return math.pi / math.sqrt(12.)
    elif d == 3:
        return math.pi / math.sqrt(18.)
    elif d == 8:
        return math.pi ** 4 / 384.
    elif d == 24:
        return math.pi ** 12 / math.factorial(12)
    raise UnknownDimensionError(
        "Optimal packing density is not known in dimension %d" % d)


class CarlPajorReport(object):
    """Outcome of :func:`carl_pajor_experiment`.

       :param float ratio: Monte Carlo estimate of Vol(P)/Vol(ball).
       :param float stderr: Standard error of `ratio`.
       :param float exact_ratio: The same ratio from the exact hull volume.
       :param float bound: The bound (4 sqrt(ln(m)/d))^d.
       :param bool within_bound: True iff ratio <= bound + 3 stderr.
    """
    def __init__(self, d, m, samples, ratio, stderr, exact_ratio, bound):
        self.d, self.m, self.samples = d, m, samples
        self.ratio, self.stderr, self.exact_ratio = ratio, stderr, exact_ratio
        self.bound = bound
        self.within_bound = ratio <= bound + 3. * stderr

    def as_dict(self):
        """Return the report as a JSON-compatible dict"""
        return {'d': self.d, 'm': self.m, 'samples': self.samples,
                'ratio': self.ratio, 'stderr': self.stderr,
                'exact_ratio': self.exact_ratio, 'bound': self.bound,
                'within_bound': self.within_bound}


def carl_pajor_bound(d, m):
    """Return (4 sqrt(ln(m)/d))^d, using the natural logarithm"""
    return (4. * math.sqrt(math.log(m) / d)) ** d


def carl_pajor_experiment(d, m, samples=100000, seed=0, threads=None):
    """Compare the volume of a random polytope inscribed in the unit ball
       with the Carl-Pajor bound.

       `m` points are drawn uniformly on the unit sphere in R^d and the
       fraction of the ball covered by their hull is estimated from
       `samples` uniform points in the ball. A hull of dimension below d
       has ratio 0.

       :rtype: :class:`CarlPajorReport`
    """
    if d < 1 or m < 1 or samples < 1:
        raise ValueError("Need positive d, m and samples")
    rng = _substream(seed, 0)
    pts = rng.normal(size=(m, d))
    pts /= np.linalg.norm(pts, axis=1)[:, np.newaxis]
    bound = carl_pajor_bound(d, m)
    full_dim = (m > d and credalvol.geometry.Chart.from_points(pts).k == d)
    if not full_dim:
        return CarlPajorReport(d, m, samples, 0., 0., 0., bound)
    inside = credalvol.volume._membership_test(pts)
    chunk = credalvol.volume.MC_CHUNK_SIZE
    nchunk = (samples + chunk - 1) // chunk

    def count_chunk(index):
        n = min(chunk, samples - index * chunk)
        crng = _substream(seed, index + 1)
        y = crng.normal(size=(n, d))
        y /= np.linalg.norm(y, axis=1)[:, np.newaxis]
        y *= crng.random(n)[:, np.newaxis] ** (1. / d)
        return int(np.count_nonzero(inside(y)))
    hits = sum(_map_tasks(count_chunk, range(nchunk), threads))
    ratio = hits / float(samples)
    ball = credalvol.volume.unit_ball_volume(d)
    exact = (credalvol.geometry.fan_volume(pts) / ball
             if d <= credalvol.volume.MAX_EXACT_DIM else ratio)
    return CarlPajorReport(d, m, samples, ratio,
                           math.sqrt(ratio * (1. - ratio) / samples),
                           exact, bound)
