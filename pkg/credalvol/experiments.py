"""Experiment drivers: credal sets learned from data, and their shrinkage.

   The Imprecise Dirichlet Model (IDM) turns label counts into a credal set
   whose size shrinks as observations accumulate. :func:`idm_curve`
   simulates this for a known true distribution; :func:`prior_shrinkage`
   shows how an eroded simplex loses almost all of the simplex's volume as
   the number of labels grows.
"""

import numpy as np
import credalvol
import credalvol.measures
import credalvol.packing
import credalvol.volume

#: Column names of the rows returned by :func:`idm_curve`.
CURVE_COLUMNS = ('n', 'volume', 'width', 'max_entropy', 'dh_prev')

#: Column names of the rows returned by :func:`prior_shrinkage`.
SHRINKAGE_COLUMNS = ('c', 't', 'volume_eroded', 'volume_simplex', 'ratio',
                     'method')


class InvalidHyperparameterError(ValueError):
    """Exception raised for a nonpositive IDM prior strength"""
    pass


class IdmState(object):
    """Label counts plus the prior strength of an Imprecise Dirichlet Model.

       :param counts: Number of observations of each label.
       :param float s: Prior strength; must be positive.
    """
    def __init__(self, counts, s=1.0):
        self.counts = tuple(int(c) for c in counts)
        if s <= 0.:
            raise InvalidHyperparameterError(
                "IDM prior strength must be positive, not %g" % s)
        if len(self.counts) < 2 or min(self.counts) < 0:
            raise ValueError("Need nonnegative counts for at least 2 labels")
        self.s = float(s)

    n = property(lambda self: sum(self.counts),
                 doc="Total number of observations")
    d = property(lambda self: len(self.counts), doc="Number of labels")


def idm_update(state, label):
    """Return a new state with one more observation of `label`"""
    counts = list(state.counts)
    counts[label] += 1
    return IdmState(counts, state.s)


def idm_credal_set(state):
    """Return the IDM credal set for the given counts.

       Vertex j is (counts + s e_j) / (n + s). The set is the simplex
       scaled by s/(n+s); with no observations it is the whole simplex.
    """
    counts = np.array(state.counts, dtype=float)
    denom = state.n + state.s
    verts = (counts + state.s * np.eye(state.d)) / denom
    if state.n == 0:
        return credalvol.vacuous(state.d)
    return credalvol.make_credal_polytope(verts)


def idm_curve(p_true, n_max, s=1.0, seed=0, tol=1e-6):
    """Simulate IDM learning from i.i.d. draws of `p_true`.

       :param p_true: The true distribution.
       :param int n_max: Number of draws.
       :param float s: IDM prior strength.
       :param int seed: Seed for the draws.
       :return: List of n_max+1 dicts (n = 0 ... n_max), keyed by
                :data:`CURVE_COLUMNS`. 'dh_prev' is the Hausdorff distance
                to the previous set (0 for n = 0).
    """
    p_true = credalvol.ProbabilityVector(p_true)
    if n_max < 1:
        raise ValueError("Need at least one draw, not %d" % n_max)
    rng = np.random.default_rng(seed)
    draws = rng.choice(p_true.d, size=n_max, p=p_true.values)
    state = IdmState([0] * p_true.d, s)
    rows, prev = [], None
    for n in range(n_max + 1):
        if n > 0:
            state = idm_update(state, draws[n - 1])
        cs = idm_credal_set(state)
        rows.append({
            'n': n,
            'volume': credalvol.volume.volume_fixed_dim(cs, cs.d - 1),
            'width': credalvol.measures.imprecision_width(cs),
            'max_entropy': credalvol.measures.max_entropy(cs, tol),
            'dh_prev': (0. if prev is None
                        else credalvol.packing.hausdorff_distance(prev, cs))})
        prev = cs
    return rows


def prior_shrinkage(eps, c_range):
    """Compare an eroded simplex with the whole simplex as labels grow.

       For each label count c, the simplex on c labels is eroded by `eps`
       (see :func:`credalvol.packing.erode`), giving a homothety with
       factor t; the volume ratio is t^(c-1). Volumes are computed exactly
       up to :data:`credalvol.volume.MAX_EXACT_DIM` + 1 labels and from
       the scaling law beyond that.

       :return: List of dicts keyed by :data:`SHRINKAGE_COLUMNS`.
    """
    rows = []
    for c in c_range:
        vol = credalvol.volume.simplex_volume(c)
        if c - 1 <= credalvol.volume.MAX_EXACT_DIM:
            simplex = credalvol.vacuous(c)
            eroded = credalvol.packing.erode(simplex, eps)
            t = eroded.radius / simplex.radius
            veroded = credalvol.volume.volume_exact(eroded).value
            method = 'exact'
        else:
            radius = np.sqrt((c - 1.) / c)
            if eps >= radius:
                raise credalvol.packing.EpsilonTooLargeError(
                    "Erosion by %g would collapse a set of radius %g"
                    % (eps, radius))
            t = 1. - eps / radius
            veroded = t ** (c - 1) * vol
            method = 'scaling'
        rows.append({'c': c, 't': t, 'volume_eroded': veroded,
                     'volume_simplex': vol, 'ratio': veroded / vol,
                     'method': method})
    return rows
