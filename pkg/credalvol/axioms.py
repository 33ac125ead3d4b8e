"""Classes and functions for checking uncertainty measures against axioms.

   Each check returns an :class:`AxiomReport`. Checks are empirical: they
   evaluate a measure (see :func:`credalvol.measures.measure`) on concrete
   credal sets and report pass or fail with the numbers that decided it.
   Continuity (A2) is only ever judged along an explicit sequence of sets,
   converging in the Hausdorff metric.
"""

import math
import numpy as np
import credalvol
import credalvol.geometry
import credalvol.lift
import credalvol.measures
import credalvol.volume
from credalvol.util import _text_choice_property


class NotNestedError(ValueError):
    """Exception raised if a set claimed to be nested in another is not"""
    pass


class BaseTooLongError(ValueError):
    """Exception raised if a counterexample segment does not fit on an
       edge of the simplex"""
    pass


class HeightTooLargeError(ValueError):
    """Exception raised if a counterexample triangle does not fit in the
       simplex"""
    pass


class AxiomConfig(object):
    """Tolerances and sampling settings for axiom checks.

       :param float tol: Slack allowed in inequality comparisons (A1, A3).
       :param float isometry_tol: Largest change in a measure tolerated
              under an isometry (A7).
       :param float additivity_tol: Slack for the subadditivity and
              additivity comparisons (A5, A6).
       :param float width_eps: A sequence's imprecision width is taken to
              have reached zero once it is below this value.
       :param float u_eps: Likewise for the measure's value.
       :param int isometry_samples: Number of random isometries tried.
       :param int seed: Seed for the random isometries.
    """
    def __init__(self, tol=1e-12, isometry_tol=1e-10, additivity_tol=1e-10,
                 width_eps=1e-3, u_eps=1e-3, isometry_samples=4, seed=0):
        self.tol, self.isometry_tol = tol, isometry_tol
        self.additivity_tol = additivity_tol
        self.width_eps, self.u_eps = width_eps, u_eps
        self.isometry_samples, self.seed = isometry_samples, seed


class AxiomReport(object):
    """The outcome of checking one axiom.

       :param str axiom: Axiom identifier (A1 through A7, or A4').
       :param str verdict: 'pass', 'fail' or 'not-applicable'.
       :param dict witness: Measured values that decided the verdict.
       :param float tolerance: The tolerance used in the comparison.
       :param str note: Free-text remark, if any.
    """
    axiom = _text_choice_property(
        "axiom", ["A1", "A2", "A3", "A4'", "A5", "A6", "A7"],
        doc="Axiom identifier")
    verdict = _text_choice_property(
        "verdict", ["pass", "fail", "not-applicable"],
        doc="Outcome of the check")

    def __init__(self, axiom, verdict, witness, tolerance, note=None):
        self.axiom, self.verdict = axiom, verdict
        self.witness, self.tolerance, self.note = witness, tolerance, note

    passed = property(lambda self: self.verdict == 'pass')

    def as_dict(self):
        """Return the report as a JSON-compatible dict"""
        return {'axiom': self.axiom, 'verdict': self.verdict,
                'witness': self.witness, 'tolerance': self.tolerance,
                'note': self.note}

    def __repr__(self):
        return "<AxiomReport %s %s>" % (self.axiom, self.verdict)


def _verdict(ok):
    return 'pass' if ok else 'fail'


def full_dimensional_volume(p):
    """Return the volume of `p` taken in its own affine dimension.

       Under this convention a segment has its length as volume even
       inside a triangle-shaped simplex.
    """
    return credalvol.volume.volume_exact(p).value


def _check_bounds(p, measure, config):
    value = credalvol.measures.measure(p, measure)
    bound = credalvol.measures.measure_bound(p.d, measure)
    ok = -config.tol <= value <= bound + config.tol
    return AxiomReport('A1', _verdict(ok),
                       {'measure': measure, 'value': value, 'lower': 0.,
                        'upper': bound}, config.tol)


def _check_nested(p, q):
    if q.d != p.d:
        raise credalvol.DimensionMismatchError(
            "Nested set has %d labels but outer set has %d" % (q.d, p.d))
    for v in q.vertex_array:
        if not credalvol.contains(p, v):
            raise NotNestedError(
                "Vertex %s of the inner set is not in the outer set"
                % repr(v.tolist()))


def _check_monotonicity(p, q, measure, config):
    if measure == 'volume':
        # Both volumes in the affine dimension of the larger set
        k = p.k
        up = credalvol.volume.volume_fixed_dim(p, k)
        uq = credalvol.volume.volume_fixed_dim(q, k)
        witness = {'measure': measure, 'dimension': k}
    else:
        up = credalvol.measures.measure(p, measure)
        uq = credalvol.measures.measure(q, measure)
        witness = {'measure': measure}
        if measure == 'volume-full':
            witness['dimension_outer'], witness['dimension_inner'] = p.k, q.k
    witness.update({'outer': up, 'inner': uq})
    return AxiomReport('A3', _verdict(uq <= up + config.tol), witness,
                       config.tol)


def _random_isometries(p, config):
    """Yield (kind, moved set) for random isometries keeping `p` inside
       the simplex. Small chart rotations are tried first, halving the
       angle until the image fits; failing that a label permutation (which
       always maps the simplex to itself) is used."""
    rng = np.random.default_rng(config.seed)
    for _ in range(config.isometry_samples):
        angle, shift = 0.5, 0.1 * p.radius
        moved = None
        for _ in range(20):
            trans = credalvol.geometry.Transformation.random(
                p.d - 1, rng, angle=angle, shift=shift)
            try:
                moved = credalvol.transform(p, trans)
                break
            except credalvol.InvalidProbabilityVectorError:
                angle, shift = angle / 2., shift / 2.
        if moved is not None:
            yield 'rotation', moved
        else:
            perm = rng.permutation(p.d)
            yield 'permutation', credalvol.make_credal_polytope(
                p.vertex_array[:, perm])


def _check_invariance(p, measure, config):
    value = credalvol.measures.measure(p, measure)
    deviation, kinds = 0., []
    for kind, moved in _random_isometries(p, config):
        kinds.append(kind)
        deviation = max(deviation,
                        abs(credalvol.measures.measure(moved, measure)
                            - value))
    if not kinds:
        return AxiomReport('A7', 'not-applicable',
                           {'measure': measure, 'value': value},
                           config.isometry_tol, "no isometries sampled")
    return AxiomReport('A7', _verdict(deviation <= config.isometry_tol),
                       {'measure': measure, 'value': value,
                        'max_deviation': deviation, 'isometries': kinds},
                       config.isometry_tol)


def check_axioms(p, q=None, measure='volume', config=None):
    """Check boundedness (A1), monotonicity (A3) and isometry invariance
       (A7) of an uncertainty measure.

       :param p: The :class:`~credalvol.CredalPolytope` to check.
       :param q: Optional credal set nested in `p`, used for A3. If it is
              not given, A3 is reported as not applicable.
       :param str measure: A name accepted by
              :func:`credalvol.measures.measure`.
       :param config: :class:`AxiomConfig`, or None for defaults.
       :return: A list of three :class:`AxiomReport` objects.
       :raises NotNestedError: if `q` is not contained in `p`.
    """
    if config is None:
        config = AxiomConfig()
    reports = [_check_bounds(p, measure, config)]
    if q is None:
        reports.append(AxiomReport('A3', 'not-applicable',
                                   {'measure': measure}, config.tol,
                                   "no nested set given"))
    else:
        _check_nested(p, q)
        reports.append(_check_monotonicity(p, q, measure, config))
    reports.append(_check_invariance(p, measure, config))
    return reports


def check_probability_consistency(seq, measure='volume', config=None):
    """Check that a measure vanishes as imprecision vanishes (A4'), and
       that it behaves continuously (A2) along a sequence of credal sets.

       The check fails if

         - the imprecision width reaches zero but the measure does not, or
           the measure is not nonincreasing after its maximum;
         - the measure reaches zero while the width stays away from zero;
         - the final step changes the measure by more than `u_eps` and by
           more than any earlier step (a jump at the limit).

       :param seq: List of at least 3 :class:`~credalvol.CredalPolytope`
              objects on the same labels, ordered so that the last one is
              the limit.
       :rtype: :class:`AxiomReport`
    """
    if config is None:
        config = AxiomConfig()
    if len(seq) < 3:
        raise ValueError("Need a sequence of at least 3 sets, not %d"
                         % len(seq))
    for p in seq[1:]:
        if p.d != seq[0].d:
            raise credalvol.DimensionMismatchError(
                "Sequence mixes %d and %d labels" % (seq[0].d, p.d))
    widths = [credalvol.measures.imprecision_width(p) for p in seq]
    values = [credalvol.measures.measure(p, measure) for p in seq]
    steps = np.abs(np.diff(values))
    peak = int(np.argmax(values))
    monotone = all(b <= a + config.tol
                   for a, b in zip(values[peak:], values[peak + 1:]))
    width_vanishes = widths[-1] < config.width_eps
    value_vanishes = values[-1] < config.u_eps
    jump = (steps[-1] > config.u_eps and steps[-1] > steps[:-1].max())
    failures = []
    if width_vanishes and not (value_vanishes and monotone):
        failures.append("width vanishes but measure does not decrease to 0")
    if value_vanishes and not width_vanishes:
        failures.append("measure vanishes while width stays positive")
    if jump:
        failures.append("measure jumps at the limit")
    witness = {'measure': measure, 'length': len(seq),
               'final_width': widths[-1], 'final_value': values[-1],
               'max_value': values[peak], 'last_step': float(steps[-1]),
               'max_earlier_step': float(steps[:-1].max()),
               'failures': failures}
    return AxiomReport("A4'", _verdict(not failures), witness, config.u_eps,
                       "continuity judged along the given sequence "
                       "under the Hausdorff metric")


def _volume_in_labels(p, d):
    """(d-1)-dimensional volume of `p`, with 0 for a 1-label space"""
    return credalvol.volume.volume_fixed_dim(p, d - 1)


def _si_instance(grouping):
    if grouping.d1 == 1 and grouping.d2 == 1:
        return 'both'
    elif grouping.d1 == 1:
        return 'first'
    elif grouping.d2 == 1:
        return 'second'


def check_subadditivity(p, grouping, config=None):
    """Check subadditivity (A5) and additivity (A6) of volume.

       The volume of the joint credal set `p` is compared with the sum of
       the volumes of its two marginals (each in its own simplex).

       :param grouping: :class:`~credalvol.Grouping` of `p`'s labels.
       :return: Tuple of the A5 and A6 :class:`AxiomReport` objects. The
                A6 witness names the degenerate factor ('first',
                'second' or 'both') if the grouping has one.
    """
    if config is None:
        config = AxiomConfig()
    first = credalvol.marginalize(p, grouping, 1)
    second = credalvol.marginalize(p, grouping, 2)
    vol = _volume_in_labels(p, p.d)
    vol1 = _volume_in_labels(first, grouping.d1)
    vol2 = _volume_in_labels(second, grouping.d2)
    tol = config.additivity_tol
    witness = {'measure': 'volume', 'joint': vol, 'first': vol1,
               'second': vol2, 'sum': vol1 + vol2,
               'si_instance': _si_instance(grouping)}
    return (AxiomReport('A5', _verdict(vol <= vol1 + vol2 + tol),
                        dict(witness), tol),
            AxiomReport('A6', _verdict(abs(vol - vol1 - vol2) <= tol),
                        dict(witness), tol))


def prop2_instances(p2, config=None):
    """Check additivity on the strong products with degenerate factors.

       `p2` (on any number of labels) is combined by
       :func:`~credalvol.strong_product` with a single-label factor on the
       left ('first'), on the right ('second'), and the single-label joint
       space is used for 'both'.

       :return: List of (instance, A5 report, A6 report) tuples.
    """
    point = credalvol.vacuous(1)
    out = []
    for which, joint, grouping in (
            ('first', credalvol.strong_product(point, p2),
             credalvol.Grouping.product(1, p2.d)),
            ('second', credalvol.strong_product(p2, point),
             credalvol.Grouping.product(p2.d, 1)),
            ('both', credalvol.strong_product(point, point),
             credalvol.Grouping.degenerate('both'))):
        a5, a6 = check_subadditivity(joint, grouping, config)
        out.append((which, a5, a6))
    return out


# Geometry of the counterexample triangles in the 3-label simplex: the
# base lies on the edge from e1 to e2, centered at its midpoint; the apex
# is on the median towards e3.
_EDGE_MID = np.array([0.5, 0.5, 0.])
_EDGE_DIR = np.array([1., -1., 0.]) / math.sqrt(2.)
_MEDIAN_DIR = np.array([-0.5, -0.5, 1.]) / math.sqrt(1.5)

#: Height of the 3-label simplex over an edge, in its own plane.
SIMPLEX_HEIGHT = math.sqrt(6.) / 2.


def _base_segment(b):
    if not 0. < b <= math.sqrt(2.) + 1e-12:
        raise BaseTooLongError(
            "Base length %g does not fit on a simplex edge of length %g"
            % (b, math.sqrt(2.)))
    half = min(b / 2., math.sqrt(2.) / 2.)
    return [_EDGE_MID - half * _EDGE_DIR, _EDGE_MID + half * _EDGE_DIR]


def counterexample_triangle(b, h):
    """Return the triangle with base length `b` on an edge of the 3-label
       simplex and height `h` above it (area b*h/2)."""
    if not 0. < h <= SIMPLEX_HEIGHT + 1e-12:
        raise HeightTooLargeError(
            "Height %g does not fit in the simplex (max %g)"
            % (h, SIMPLEX_HEIGHT))
    apex = _EDGE_MID + min(h, SIMPLEX_HEIGHT) * _MEDIAN_DIR
    return credalvol.make_credal_polytope(_base_segment(b) + [apex])


def counterexample_segment(b):
    """Return the base segment of :func:`counterexample_triangle`"""
    return credalvol.make_credal_polytope(_base_segment(b))


def a3_counterexample(b, h, config=None):
    """Show that the full-dimensionality volume convention violates
       monotonicity.

       The segment Q of length `b` lies inside the triangle P of height
       `h` over it, yet Vol(Q) = b exceeds Vol(P) = b*h/2 whenever h < 2.

       :return: Tuple of (P, Q, A3 :class:`AxiomReport`).
    """
    if config is None:
        config = AxiomConfig()
    p = counterexample_triangle(b, h)
    q = counterexample_segment(b)
    _check_nested(p, q)
    return p, q, _check_monotonicity(p, q, 'volume-full', config)


class ContinuityTable(object):
    """Output of :func:`continuity_counterexample`.

       :param list rows: One dict per n with keys 'n', 'h', 'vol2' and
              'width'.
       :param dict limit: The limit segment's 'vol2', 'vol1' and 'width'.
       :param consistency: :class:`AxiomReport` from
              :func:`check_probability_consistency` on the sequence plus
              its limit, with full-dimensional volume.
       :param monotonicity: The A3 report from :func:`a3_counterexample`.
    """
    def __init__(self, rows, limit, consistency, monotonicity):
        self.rows, self.limit = rows, limit
        self.consistency, self.monotonicity = consistency, monotonicity


def continuity_counterexample(b, n_max, h=1.0, config=None):
    """Build the shrinking-triangle sequence showing that volume taken in
       each set's own dimension is discontinuous.

       Triangle n has base `b` and height 1/n, so its area b/(2n) tends to
       zero, while the limit segment has length `b`.

       :param float b: Base length, at most sqrt(2).
       :param int n_max: Number of triangles (at least 2).
       :param float h: Height used for the accompanying monotonicity
              counterexample (see :func:`a3_counterexample`).
       :rtype: :class:`ContinuityTable`
    """
    if config is None:
        config = AxiomConfig()
    if n_max < 2:
        raise ValueError("Need at least 2 triangles, not %d" % n_max)
    _base_segment(b)
    seq, rows = [], []
    for n in range(1, n_max + 1):
        tri = counterexample_triangle(b, 1. / n)
        seq.append(tri)
        rows.append({'n': n, 'h': 1. / n,
                     'vol2': credalvol.volume.volume_exact(tri).value,
                     'width': credalvol.measures.imprecision_width(tri)})
    segment = counterexample_segment(b)
    seq.append(segment)
    limit = {'vol2': credalvol.volume.volume_fixed_dim(segment, 2),
             'vol1': credalvol.volume.volume_exact(segment).value,
             'width': credalvol.measures.imprecision_width(segment)}
    consistency = check_probability_consistency(seq, 'volume-full', config)
    _, _, mono = a3_counterexample(b, h, config)
    return ContinuityTable(rows, limit, consistency, mono)


def lift_continuity_counterexample(b, n_max, config=None):
    """Show that measuring lifted sets is also discontinuous.

       The limit segment of :func:`continuity_counterexample` is a credal
       set on two labels; its lift into the 3-label simplex has area close
       to `b`, while the triangles converging to it have areas b/(2n)
       tending to zero.

       :return: A dict with 'rows' (n and 'vol2'), 'limit' ('vol1',
                'lift_vol2', 'gap') and 'report' (an A2
                :class:`AxiomReport`).
    """
    if config is None:
        config = AxiomConfig()
    rows = []
    for n in range(1, n_max + 1):
        tri = counterexample_triangle(b, 1. / n)
        rows.append({'n': n, 'vol2': credalvol.volume.volume_exact(
            tri).value})
    # The segment on labels {y1, y2}, as a 2-label credal set
    seg2 = credalvol.make_credal_polytope(
        [v[:2] for v in counterexample_segment(b).vertex_array])
    result = credalvol.lift.lift_probability_set(seg2, 3)
    lift_vol = credalvol.volume.volume_fixed_dim(result.lifted, 2)
    jump = abs(lift_vol - rows[-1]['vol2'])
    limit = {'vol1': credalvol.volume.volume_exact(seg2).value,
             'lift_vol2': lift_vol, 'gap': result.gap}
    report = AxiomReport(
        'A2', _verdict(jump <= config.u_eps),
        {'measure': 'lift-volume', 'last_vol2': rows[-1]['vol2'],
         'limit_lift_vol2': lift_vol, 'jump': jump}, config.u_eps,
        "continuity judged along the given sequence under the "
        "Hausdorff metric")
    return {'rows': rows, 'limit': limit, 'report': report}
