"""Macrorealism tests on four-time records.

A record holds the joint outcome statistics of the four measured pairs
(1,2), (2,3), (3,4), (1,4) and the single-time ``p+(Q_i)``. On a record
we evaluate

* the eight four-term LG sums,
* the eight LG-CH expressions and their bounds ``[-1, 0]``,
* no-signalling in time (NSIT),
* existence of a non-invasive realist model (NIRM): a distribution over
  the 16 deterministic assignments ``(Q1, Q2, Q3, Q4)`` reproducing every
  measured pair, decided by a phase-1 simplex.

Sign variants come from relabelling outcomes ``Q_i -> -Q_i``; index 0 is
always the canonical instance.
"""
import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from lgeva import dynamics as dyn
from lgeva import spin as sp
from lgeva.errors import NsitPreconditionError
from lgeva.numerics import LP_TOL
from lgeva.simplex import phase_one

logger = logging.getLogger(__name__)

PAIRS = sp.LG_PAIRS
TIMES = (1, 2, 3, 4)
OUTCOME_PAIRS = ((1, 1), (1, -1), (-1, 1), (-1, -1))
ASSIGNMENTS = tuple(itertools.product((1, -1), repeat=4))
# relabellings of Q2..Q4; flipping Q1 as well would repeat a variant
RELABELLINGS = tuple((1,) + flips
                     for flips in itertools.product((1, -1), repeat=3))
# LG sum C12 + C23 + C34 - C14
LG_SIGNS = {(1, 2): 1, (2, 3): 1, (3, 4): 1, (1, 4): -1}
# LG-CH p++(12) + p++(23) - p++(14) + p++(34) - p+(3) - p+(2)
LGCH_JOINT_SIGNS = LG_SIGNS
LGCH_SINGLES = (3, 2)
LGCH_LOWER, LGCH_UPPER = -1.0, 0.0
DEFAULT_TOL = 1e-8


def pair_key(pair):
    return '%d%d' % pair


@dataclass(frozen=True)
class ExperimentRecord(object):
    """Pairwise joint statistics and single-time marginals of four times."""

    pair_joints: dict
    singles: dict

    def __post_init__(self):
        if set(self.pair_joints) != set(PAIRS):
            raise ValueError("record needs exactly the pairs %s" % (PAIRS,))
        if set(self.singles) != set(TIMES):
            raise ValueError("record needs singles for times %s" % (TIMES,))
        for i, p in self.singles.items():
            if not 0 <= p <= 1:
                raise ValueError("p+(Q%d) = %r is not a probability" % (i, p))

    def joint(self, pair, a, b):
        return self.pair_joints[pair].joint(a, b)

    def correlation(self, pair):
        return self.pair_joints[pair].correlation

    def single(self, i, a=+1):
        p = self.singles[i]
        return p if a > 0 else 1 - p

    def as_vector(self):
        """Joint probabilities (pair-major, ++, +-, -+, --) then singles."""
        joints = [self.joint(pair, a, b)
                  for pair in PAIRS for a, b in OUTCOME_PAIRS]
        return np.array(joints + [self.singles[i] for i in TIMES])

    def to_json(self):
        return {
            'pairs': {pair_key(pair): self.pair_joints[pair].as_dict()
                      for pair in PAIRS},
            'singles': {str(i): self.singles[i] for i in TIMES},
        }

    @classmethod
    def from_json(cls, doc):
        joints = {pair: dyn.PairStatistics.from_dict(doc['pairs'][pair_key(pair)])
                  for pair in PAIRS}
        singles = {i: float(doc['singles'][str(i)]) for i in TIMES}
        return cls(joints, singles)

    @classmethod
    def from_distribution(cls, dist):
        """Record generated by a planted :class:`JointDistribution16`."""
        return dist.to_record()


@dataclass(frozen=True, eq=False)
class JointDistribution16(object):
    """Weights over the deterministic assignments in :data:`ASSIGNMENTS`."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.shape != (16,):
            raise ValueError("need 16 weights, got shape %s" % (w.shape,))
        if np.any(w < -LP_TOL):
            raise ValueError("negative weight %.3e" % w.min())
        if abs(w.sum() - 1) > LP_TOL:
            raise ValueError("weights sum to %r" % w.sum())
        w.setflags(write=False)
        object.__setattr__(self, 'weights', w)

    @classmethod
    def random(cls, rng, concentration=1.0):
        return cls(rng.dirichlet(np.full(16, concentration)))

    @classmethod
    def deterministic(cls, assignment):
        w = np.zeros(16)
        w[ASSIGNMENTS.index(tuple(assignment))] = 1
        return cls(w)

    def pair_marginal(self, i, j):
        p = {ab: 0.0 for ab in OUTCOME_PAIRS}
        for w, q in zip(self.weights, ASSIGNMENTS):
            p[q[i - 1], q[j - 1]] += w
        return dyn.PairStatistics(*(min(max(p[ab], 0.0), 1.0)
                                    for ab in OUTCOME_PAIRS))

    def single_marginal(self, i):
        return float(sum(w for w, q in zip(self.weights, ASSIGNMENTS)
                         if q[i - 1] == 1))

    def to_record(self):
        return ExperimentRecord(
            {pair: self.pair_marginal(*pair) for pair in PAIRS},
            {i: min(max(self.single_marginal(i), 0.0), 1.0) for i in TIMES})


def record_from_correlations(c12, c23, c34, c14):
    """Unbiased-marginal record ``p^{ab} = (1 + a b C)/4``, singles 1/2."""
    cs = dict(zip(PAIRS, (c12, c23, c34, c14)))
    for pair, c in cs.items():
        if abs(c) > 1:
            raise ValueError("C%s = %r lies outside [-1, 1]"
                             % (pair_key(pair), c))
    return ExperimentRecord(
        {pair: dyn.PairStatistics.from_correlation(c) for pair, c in cs.items()},
        {i: 0.5 for i in TIMES})


def quantum_record(state, measurement, unitaries):
    """Record of sequential measurements at four times.

    ``unitaries[i]`` evolves the initial state to time ``t_{i+1}``. Singles
    are taken from the evolved state without any earlier measurement, so the
    record exposes signalling in time when it occurs.
    """
    if len(unitaries) != 4:
        raise ValueError("need four evolution operators")
    joints = {}
    for i, j in PAIRS:
        u_i, u_j = unitaries[i - 1], unitaries[j - 1]
        joints[i, j] = dyn.sequential_pair_statistics(
            state, measurement, u_j @ np.conj(u_i.T), measurement,
            u_before=u_i)
    singles = {i: min(max(dyn.outcome_probability(
        dyn.evolve(state, unitaries[i - 1]), measurement), 0.0), 1.0)
        for i in TIMES}
    return ExperimentRecord(joints, singles)


def gp_record(spin, schedule=sp.CANONICAL_SCHEDULE, lam=1.0, odd_mode='rabi',
              zero_beam_rate=0.5):
    """Record of the block scheme from the simulated beam correlations."""
    cs = []
    for pair in PAIRS:
        sign = LG_SIGNS[pair]
        cs.append(sp.gp_beam_simulated_correlation(
            spin, *schedule.pair(*pair), lam=lam, sign_for_pi=sign,
            odd_mode=odd_mode, zero_beam_rate=zero_beam_rate))
    return record_from_correlations(*(min(max(c, -1.0), 1.0) for c in cs))


def random_nsit_record(rng):
    """Random record whose pair marginals agree with its singles.

    Each ``p++`` is drawn uniformly between its Fréchet bounds, so records
    on both sides of the classical polytope occur.
    """
    singles = {i: float(p) for i, p in zip(TIMES, rng.uniform(0, 1, 4))}
    joints = {}
    for i, j in PAIRS:
        pi, pj = singles[i], singles[j]
        pp = rng.uniform(max(0.0, pi + pj - 1), min(pi, pj))
        joints[i, j] = dyn.PairStatistics(
            pp, max(pi - pp, 0.0), max(pj - pp, 0.0),
            max(1 - pi - pj + pp, 0.0))
    return ExperimentRecord(joints, singles)


def lg_sums(rec):
    """The eight four-term LG sums; macrorealism needs each <= 2."""
    values = []
    for s in RELABELLINGS:
        values.append(sum(LG_SIGNS[i, j] * s[i - 1] * s[j - 1]
                          * rec.correlation((i, j)) for i, j in PAIRS))
    return values


def _lgch_functional(s):
    """Coefficients and constant of the LG-CH variant for relabelling ``s``.

    The returned ``(c, c0)`` evaluate as ``c . rec.as_vector() + c0``.
    """
    c = np.zeros(len(PAIRS) * 4 + 4)
    c0 = 0.0
    for p_index, (i, j) in enumerate(PAIRS):
        ab = (s[i - 1], s[j - 1])
        c[p_index * 4 + OUTCOME_PAIRS.index(ab)] += LGCH_JOINT_SIGNS[i, j]
    for i in LGCH_SINGLES:
        k = len(PAIRS) * 4 + i - 1
        if s[i - 1] > 0:
            c[k] -= 1
        else:
            # p-(Q_i) = 1 - p+(Q_i)
            c[k] += 1
            c0 -= 1
    return c, c0


def lgch_values(rec):
    """The eight LG-CH expressions; macrorealism needs each in [-1, 0]."""
    vec = rec.as_vector()
    values = []
    for s in RELABELLINGS:
        c, c0 = _lgch_functional(s)
        values.append(float(c @ vec + c0))
    return values


def _assignment_vector(q):
    joints = [float(q[i - 1] == a and q[j - 1] == b)
              for i, j in PAIRS for a, b in OUTCOME_PAIRS]
    return np.array(joints + [float(q[i - 1] == 1) for i in TIMES])


@dataclass(frozen=True, eq=False)
class Certificate(object):
    """A linear inequality ``lower <= c . v + c0 <= upper`` on record vectors.

    Every non-invasive realist model satisfies it; ``value`` is its value
    on the certified record.
    """

    label: str
    variant: int
    side: str
    coefficients: np.ndarray
    constant: float
    value: float
    lower: float = LGCH_LOWER
    upper: float = LGCH_UPPER

    def evaluate(self, rec):
        return float(self.coefficients @ rec.as_vector() + self.constant)

    def violation(self, value=None):
        value = self.value if value is None else value
        return value - self.upper if self.side == 'upper' else self.lower - value

    def holds_classically(self, tol=1e-12):
        """Check the bound on all 16 deterministic assignments."""
        for q in ASSIGNMENTS:
            v = self.coefficients @ _assignment_vector(q) + self.constant
            if not self.lower - tol <= v <= self.upper + tol:
                return False
        return True

    def is_violated_by(self, rec, tol=DEFAULT_TOL):
        return self.violation(self.evaluate(rec)) > tol

    def as_dict(self):
        return {'label': self.label, 'variant': self.variant,
                'side': self.side, 'value': self.value,
                'lower': self.lower, 'upper': self.upper,
                'coefficients': [float(x) for x in self.coefficients],
                'constant': self.constant}


def most_violated_lgch(rec):
    """The LG-CH bound with the largest violation on ``rec``."""
    vec = rec.as_vector()
    best = None
    for k, s in enumerate(RELABELLINGS):
        c, c0 = _lgch_functional(s)
        value = float(c @ vec + c0)
        for side in ('upper', 'lower'):
            cert = Certificate('LG-CH[%d] %s' % (k, side), k, side, c, c0,
                               value)
            # ties keep the lower variant index
            if best is None or cert.violation() > best.violation() + 1e-12:
                best = cert
    return best


@dataclass(frozen=True)
class NsitReport(object):
    ok: bool
    worst_deviation: float
    offending: str
    marginals: dict = field(default_factory=dict)

    def as_dict(self):
        return {'ok': self.ok, 'worst_deviation': self.worst_deviation,
                'offending': self.offending,
                'marginals': {'Q%d' % i: v for i, v in self.marginals.items()}}


def _marginal_sources(rec):
    sources = {i: {'singles': rec.singles[i]} for i in TIMES}
    for i, j in PAIRS:
        stats = rec.pair_joints[i, j]
        sources[i]['pair %s' % pair_key((i, j))] = stats.first_plus
        sources[j]['pair %s' % pair_key((i, j))] = stats.second_plus
    return sources


def nsit_check(rec, tol=DEFAULT_TOL):
    """Compare every way of computing each ``p+(Q_i)``.

    Returns
    -------
    NsitReport
        ``worst_deviation`` is the largest spread between two estimates of
        the same marginal, ``offending`` names that marginal and the two
        sources that disagree most.
    """
    worst, offending = 0.0, ''
    sources = _marginal_sources(rec)
    for i, values in sources.items():
        hi = max(values, key=values.get)
        lo = min(values, key=values.get)
        spread = values[hi] - values[lo]
        if spread > worst:
            worst = spread
            offending = 'p+(Q%d): %s vs %s' % (i, hi, lo)
    return NsitReport(worst <= tol, worst, offending, sources)


@dataclass(frozen=True, eq=False)
class NirmResult(object):
    feasible: bool
    infeasibility: float
    witness: JointDistribution16 = None
    certificate: Certificate = None

    def as_dict(self):
        doc = {'feasible': self.feasible, 'infeasibility': self.infeasibility,
               'witness': None, 'certificate': None}
        if self.witness is not None:
            doc['witness'] = {''.join('+' if x > 0 else '-' for x in q): float(w)
                              for q, w in zip(ASSIGNMENTS,
                                              self.witness.weights)}
        if self.certificate is not None:
            doc['certificate'] = self.certificate.as_dict()
        return doc


def marginal_matrix():
    """Linear map from the 16 weights to the 16 pair joints plus total."""
    rows = [[float(q[i - 1] == a and q[j - 1] == b) for q in ASSIGNMENTS]
            for i, j in PAIRS for a, b in OUTCOME_PAIRS]
    rows.append([1.0] * 16)
    return np.array(rows)


def nirm_feasibility(rec, tol=DEFAULT_TOL):
    """Decide whether a joint distribution over {±1}^4 reproduces ``rec``.

    Raises
    ------
    NsitPreconditionError
        When NSIT fails by more than ``tol``: the record's marginals are
        then not those of any single distribution.
    """
    report = nsit_check(rec, tol)
    if not report.ok:
        raise NsitPreconditionError(report)
    b = np.append(rec.as_vector()[:16], 1.0)
    result = phase_one(marginal_matrix(), b, tol=tol)
    logger.debug("phase-1 optimum %.3e after %d pivots",
                 result.infeasibility, result.iterations)
    if result.feasible:
        w = np.clip(result.x, 0.0, None)
        return NirmResult(True, result.infeasibility,
                          witness=JointDistribution16(w / w.sum()))
    cert = most_violated_lgch(rec)
    if not (cert.is_violated_by(rec, tol) and cert.holds_classically()):
        logger.warning("infeasible record without a violated LG-CH bound "
                       "(phase-1 optimum %.3e)", result.infeasibility)
        cert = None
    return NirmResult(False, result.infeasibility, certificate=cert)


@dataclass(frozen=True, eq=False)
class MacrorealismVerdict(object):
    lg_values: list
    lgch_values: list
    nsit: NsitReport
    nirm: NirmResult = None
    nirm_error: str = None

    @property
    def lgi_ok(self):
        return max(self.lg_values) <= 2 + DEFAULT_TOL

    @property
    def lgch_ok(self):
        return (min(self.lgch_values) >= LGCH_LOWER - DEFAULT_TOL
                and max(self.lgch_values) <= LGCH_UPPER + DEFAULT_TOL)

    def as_dict(self):
        return {
            'lg_sums': list(self.lg_values),
            'lgch_values': list(self.lgch_values),
            'nsit': self.nsit.as_dict(),
            'nirm': self.nirm.as_dict() if self.nirm else None,
            'nirm_error': self.nirm_error,
        }


def certify(rec, tol=DEFAULT_TOL):
    nsit = nsit_check(rec, tol)
    try:
        nirm, error = nirm_feasibility(rec, tol), None
    except NsitPreconditionError as e:
        nirm, error = None, str(e)
    return MacrorealismVerdict(lg_sums(rec), lgch_values(rec), nsit, nirm,
                               error)


@dataclass(frozen=True)
class AuditReport(object):
    """The three sides of ``LGI ∧ NSIT <=> LG-CH <=> NIRM`` on one record.

    ``lgi_nsit`` reads LGI as all eight sums, ``lgi_canonical_nsit`` as
    the canonical sum only. ``boundary`` flags records within the tolerance
    band of a bound, where disagreement is not meaningful.
    """

    lgi_nsit: bool
    lgi_canonical_nsit: bool
    lgch: bool
    nirm: bool
    boundary: bool

    @property
    def agree(self):
        return self.boundary or self.lgi_nsit == self.lgch == self.nirm

    @property
    def agree_canonical(self):
        return self.boundary or self.lgi_canonical_nsit == self.lgch == self.nirm


def equivalence_audit(rec, tol=DEFAULT_TOL, band=DEFAULT_TOL):
    lgs = lg_sums(rec)
    chs = lgch_values(rec)
    nsit = nsit_check(rec, tol)
    try:
        nirm = nirm_feasibility(rec, tol).feasible
    except NsitPreconditionError:
        nirm = False
    lg_margin = max(lgs) - 2
    ch_margin = max(max(chs) - LGCH_UPPER, LGCH_LOWER - min(chs))
    boundary = abs(lg_margin) <= band or abs(ch_margin) <= band
    return AuditReport(
        lgi_nsit=lg_margin <= band and nsit.ok,
        lgi_canonical_nsit=lgs[0] <= 2 + band and nsit.ok,
        lgch=ch_margin <= band,
        nirm=nirm,
        boundary=boundary)
