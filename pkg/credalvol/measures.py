"""Classes and functions for scalar uncertainty measures on credal sets.

   Lower and upper probabilities are computed for events (see
   :class:`credalvol.Event`) by enumerating the extreme points, since a
   linear functional attains its extrema on a polytope at vertices. Measures
   that enumerate all events are limited to :data:`MAX_LABELS` labels.
"""

import math
import warnings
import numpy as np
import scipy.optimize
import scipy.special
import credalvol
import credalvol.volume

#: Largest label count for which all 2^d events are enumerated.
MAX_LABELS = 16

# Probabilities are clamped to this inside entropy gradients
_GRAD_FLOOR = 1e-12

# Masses below -_MASS_TOL are reported as negative
_MASS_TOL = 1e-12

#: Names accepted by :func:`measure`.
MEASURES = ('volume', 'volume-full', 'maxent', 'gh', 'width')


class TooManyLabelsError(ValueError):
    """Exception raised if a measure needs all events of a label space
       larger than :data:`MAX_LABELS`"""
    pass


class UnknownMeasureError(ValueError):
    """Exception raised for a measure name not in :data:`MEASURES`"""
    pass


class NoConvergenceWarning(Warning):
    """Warning for an iterative maximization that stopped before reaching
       its tolerance"""
    pass


class NegativeMassWarning(Warning):
    """Warning for a lower envelope that is not 2-monotone, so that some
       Möbius masses are negative"""
    pass


def _check_labels(d):
    if d > MAX_LABELS:
        raise TooManyLabelsError(
            "Event enumeration is limited to %d labels (got %d)"
            % (MAX_LABELS, d))


def _event_matrix(d):
    """2^d x d indicator matrix; row `mask` is the indicator of that event"""
    masks = np.arange(1 << d)[:, np.newaxis]
    return ((masks >> np.arange(d)) & 1).astype(float)


def event_envelope(p, event):
    """Return the (lower, upper) probability of `event` over credal set `p`.

       :param p: The :class:`~credalvol.CredalPolytope`.
       :param event: The :class:`~credalvol.Event`.
    """
    if event.d != p.d:
        raise credalvol.InvalidEventError(
            "Event is on %d labels but credal set has %d" % (event.d, p.d))
    probs = p.vertex_array @ event.indicator
    return float(probs.min()), float(probs.max())


def envelope_table(p):
    """Return lower and upper probabilities of every event of `p`.

       :return: Tuple of two arrays of length 2^d, indexed by event mask.
    """
    _check_labels(p.d)
    probs = p.vertex_array @ _event_matrix(p.d).T
    return probs.min(axis=0), probs.max(axis=0)


def imprecision_width(p):
    """Return the largest gap between upper and lower probability over
       all nonempty proper events of credal set `p`."""
    _check_labels(p.d)
    lower, upper = envelope_table(p)
    if p.d < 2:
        return 0.
    return float(np.max((upper - lower)[1:-1]))


def shannon_entropy(x):
    """Return the Shannon entropy, in bits, of a probability vector"""
    return float(scipy.special.entr(np.asarray(x, dtype=float)).sum()
                 / math.log(2.))


def _entropy_gradient(x):
    return -(np.log2(np.maximum(x, _GRAD_FLOOR)) + 1. / math.log(2.))


class MaxEntropyResult(object):
    """Result of maximizing Shannon entropy over a credal set.
       See :func:`maximize_entropy`.

       :param float value: Best entropy found, in bits.
       :param point: The maximizing probability vector (as an array).
       :param float gap: Duality gap at `point`; the true maximum exceeds
              `value` by at most this amount.
       :param int iterations: Number of iterations taken.
       :param bool converged: True iff `gap` reached the tolerance.
    """
    def __init__(self, value, point, gap, iterations, converged):
        self.value, self.point, self.gap = value, point, gap
        self.iterations, self.converged = iterations, converged


def _line_search(x, direction, gmax):
    """Exact step maximizing entropy along `direction` on [0, gmax]"""
    def slope(g):
        return direction @ _entropy_gradient(x + g * direction)
    if slope(gmax) >= 0.:
        return gmax
    if slope(0.) <= 0.:
        return 0.
    return scipy.optimize.brentq(slope, 0., gmax, xtol=1e-15)


def maximize_entropy(p, tol=1e-6, max_iter=10000):
    """Maximize Shannon entropy over credal set `p`.

       This uses the conditional gradient (Frank-Wolfe) method with away
       steps and exact line search. The linear subproblem over a polytope
       is solved exactly by taking the best vertex. Iteration stops once the
       Frank-Wolfe duality gap is at most `tol`.

       If the gap is still above `tol` after `max_iter` iterations, a
       :class:`NoConvergenceWarning` is issued and the best value so far
       is returned with `converged` False.

       :rtype: :class:`MaxEntropyResult`
    """
    verts = p.vertex_array
    m = len(verts)
    weights = np.full(m, 1. / m)
    x = weights @ verts
    gap = 0.
    for it in range(max_iter):
        grad = _entropy_gradient(x)
        scores = verts @ grad
        s = int(np.argmax(scores))
        xg = x @ grad
        gap = scores[s] - xg
        if gap <= tol:
            return MaxEntropyResult(shannon_entropy(x), x, gap, it, True)
        active = np.flatnonzero(weights > 0.)
        a = active[int(np.argmin(scores[active]))]
        if scores[s] - xg >= xg - scores[a] or weights[a] >= 1.:
            direction, gmax = verts[s] - x, 1.
            step = _line_search(x, direction, gmax)
            weights *= 1. - step
            weights[s] += step
        else:
            gmax = weights[a] / (1. - weights[a])
            direction = x - verts[a]
            step = _line_search(x, direction, gmax)
            weights *= 1. + step
            weights[a] -= step
            if step == gmax:
                weights[a] = 0.
        weights = np.maximum(weights, 0.)
        weights /= weights.sum()
        x = weights @ verts
    warnings.warn("Entropy maximization stopped after %d iterations with "
                  "duality gap %g > %g" % (max_iter, gap, tol),
                  NoConvergenceWarning, stacklevel=2)
    return MaxEntropyResult(shannon_entropy(x), x, gap, max_iter, False)


def max_entropy(p, tol=1e-6, max_iter=10000):
    """Return the maximal Shannon entropy, in bits, over credal set `p`.
       See :func:`maximize_entropy`."""
    return maximize_entropy(p, tol, max_iter).value


class MassAssignment(object):
    """Möbius masses of the lower probability of a credal set.
       See :func:`mobius_mass`.

       :param masses: Array of length 2^d, indexed by event mask.
       :param int d: Number of labels.
    """
    def __init__(self, masses, d):
        self.masses, self.d = np.asarray(masses, dtype=float), d

    def __getitem__(self, event):
        """Get the mass of a :class:`~credalvol.Event`"""
        return float(self.masses[event.mask])

    negative = property(
        lambda self: bool(self.masses.min() < -_MASS_TOL),
        doc="True iff any event has negative mass")

    def belief(self):
        """Return the sum of masses over all subsets of each event, as an
           array indexed by event mask. This reproduces the lower
           probability."""
        b = self.masses.copy()
        idx = np.arange(1 << self.d)
        for j in range(self.d):
            sel = idx[(idx >> j) & 1 == 1]
            b[sel] += b[sel ^ (1 << j)]
        return b

    def lower(self, event):
        """Return the lower probability of `event` recovered from the
           masses"""
        return float(self.masses[[b for b in range(1 << self.d)
                                  if b & event.mask == b]].sum())


def mobius_mass(p):
    """Return the Möbius inverse of the lower probability of credal set `p`.

       :rtype: :class:`MassAssignment`
    """
    _check_labels(p.d)
    m = envelope_table(p)[0].copy()
    idx = np.arange(1 << p.d)
    for j in range(p.d):
        sel = idx[(idx >> j) & 1 == 1]
        m[sel] -= m[sel ^ (1 << j)]
    return MassAssignment(m, p.d)


def _hartley(mass):
    sizes = np.array([bin(b).count('1') for b in range(len(mass.masses))])
    nonempty = sizes > 0
    return float(mass.masses[nonempty] @ np.log2(sizes[nonempty]))


def generalized_hartley(p):
    """Return the generalized Hartley measure, in bits, of credal set `p`.

       This is the sum over events A of m(A) log2 |A|, where m are the
       Möbius masses. If the lower probability is not 2-monotone some
       masses are negative; the value is still returned but a
       :class:`NegativeMassWarning` is issued.
    """
    mass = mobius_mass(p)
    if mass.negative:
        warnings.warn("Lower probability is not 2-monotone (smallest "
                      "Möbius mass %g)" % mass.masses.min(),
                      NegativeMassWarning, stacklevel=2)
    return _hartley(mass)


def measure(p, name):
    """Evaluate a named uncertainty measure on credal set `p`.

       :param str name: One of

          - 'volume': the (d-1)-dimensional volume (zero for lower
            dimensional sets);
          - 'volume-full': the volume in the affine dimension of `p`;
          - 'maxent': :func:`max_entropy`;
          - 'gh': :func:`generalized_hartley`;
          - 'width': :func:`imprecision_width`.
    """
    if name == 'volume':
        return credalvol.volume.volume_fixed_dim(p, p.d - 1)
    elif name == 'volume-full':
        return credalvol.volume.volume_exact(p).value
    elif name == 'maxent':
        return max_entropy(p)
    elif name == 'gh':
        return generalized_hartley(p)
    elif name == 'width':
        return imprecision_width(p)
    raise UnknownMeasureError(
        "Unknown measure %s; valid values are %s"
        % (repr(name), ", ".join(repr(x) for x in MEASURES)))


def measure_bound(d, name):
    """Return the largest value measure `name` can take on `d` labels"""
    if name not in MEASURES:
        raise UnknownMeasureError("Unknown measure %s" % repr(name))
    if name in ('volume', 'volume-full'):
        return credalvol.volume.simplex_volume(d) if d >= 2 else 0.
    elif name == 'width':
        return 1.
    return math.log2(d)


def summarize(p, tol=1e-6, max_iter=10000):
    """Compute all measures of credal set `p`.

       Diagnostics that would otherwise be issued as warnings are
       collected in the 'flags' list of the result.

       :return: A dict with keys 'volume' (in dimension d-1), 'k',
                'volume_k' (in the affine dimension k), 'width',
                'max_entropy', 'generalized_hartley',
                'entropy_of_centroid' and 'flags'.
    """
    flags = []
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', NoConvergenceWarning)
        ent = maximize_entropy(p, tol, max_iter)
    if not ent.converged:
        flags.append('max_entropy_no_convergence')
    mass = mobius_mass(p)
    if mass.negative:
        flags.append('negative_mass')
    vol = credalvol.volume.volume_exact(p)
    return {'volume': vol.value if vol.k == p.d - 1 else 0.,
            'k': vol.k, 'volume_k': vol.value,
            'width': imprecision_width(p),
            'max_entropy': ent.value,
            'generalized_hartley': _hartley(mass),
            'entropy_of_centroid': shannon_entropy(p.centroid),
            'flags': flags}
