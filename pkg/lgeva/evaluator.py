import logging

from lgeva import macrorealism as mr
from lgeva.errors import NsitPreconditionError

logger = logging.getLogger(__name__)


class Evaluator(object):
    """
    A class used to run the macrorealism checks on one four-time record

    ...

    Attributes
    ----------
    record : ExperimentRecord
        Pairwise joint statistics and single-time marginals under test
    tol : float
        Tolerance of the NSIT comparison and of the joint-distribution search

    Every ``mr_*`` method returns ``(points, msg)``: 100 points when the
    record is compatible with macrorealism for that check, 0 when it is
    not.
    """

    def __init__(self, record, tol=mr.DEFAULT_TOL):
        self.record = record
        self.tol = tol
        self._nirm = None
        self._nirm_error = None

    def nirm(self):
        if self._nirm is None and self._nirm_error is None:
            try:
                self._nirm = mr.nirm_feasibility(self.record, self.tol)
            except NsitPreconditionError as e:
                self._nirm_error = e
        return self._nirm

    # CHECKS

    def mr_lgi(self):
        """ Check MR-LGI
        All eight four-term LG sums (one per outcome relabelling) must stay
        below 2.

        Returns
        -------
        points
            100 if no sum exceeds 2, else 0
        msg
            The largest sum and the relabelling that produced it
        """
        values = mr.lg_sums(self.record)
        worst = max(range(len(values)), key=lambda k: values[k])
        msg = "Largest LG sum %.12g (variant %d) against the bound 2" % (
            values[worst], worst)
        points = 100 if values[worst] <= 2 + self.tol else 0
        return (points, msg)

    def mr_lgi_canonical(self):
        """ Check MR-LGI-CANONICAL
        Only the sum C12 + C23 + C34 - C14.
        """
        k = mr.lg_sums(self.record)[0]
        points = 100 if k <= 2 + self.tol else 0
        return (points, "K = C12 + C23 + C34 - C14 = %.12g" % k)

    def mr_lgch(self):
        """ Check MR-LGCH
        All eight LG-CH expressions must lie in [-1, 0].

        Returns
        -------
        points
            100 if every expression is inside its bounds, else 0
        msg
            The principal (canonical) value and the extreme values
        """
        values = mr.lgch_values(self.record)
        msg = "LG-CH principal value %.12g, range [%.12g, %.12g]" % (
            values[0], min(values), max(values))
        inside = (min(values) >= mr.LGCH_LOWER - self.tol
                  and max(values) <= mr.LGCH_UPPER + self.tol)
        return (100 if inside else 0, msg)

    def mr_nsit(self):
        report = mr.nsit_check(self.record, self.tol)
        if report.ok:
            msg = "No-signalling in time holds (worst deviation %.3e)" % (
                report.worst_deviation)
            return (100, msg)
        msg = "Signalling in time: %s differ by %.6g" % (
            report.offending, report.worst_deviation)
        return (0, msg)

    def mr_nirm(self):
        """ Check MR-NIRM
        Searches a distribution over the 16 deterministic assignments of
        (Q1, Q2, Q3, Q4) whose pair marginals reproduce the record.

        Returns
        -------
        points
            100 if such a non-invasive realist model exists, else 0
        msg
            The witness support size, the violated inequality or the reason
            the search was not run
        """
        result = self.nirm()
        if result is None:
            return (0, "Not evaluated: %s" % self._nirm_error)
        if result.feasible:
            support = int((result.witness.weights > self.tol).sum())
            msg = "Non-invasive realist model found on %d assignments" % support
            return (100, msg)
        msg = "No joint distribution (residual %.3e)" % result.infeasibility
        if result.certificate is not None:
            msg = msg + "; %s evaluates to %.12g" % (
                result.certificate.label, result.certificate.value)
        return (0, msg)

    def mr_equivalence(self):
        audit = mr.equivalence_audit(self.record, self.tol, self.tol)
        msg = ("LGI and NSIT: %s | canonical LGI and NSIT: %s | LG-CH: %s | "
               "NIRM: %s" % (audit.lgi_nsit, audit.lgi_canonical_nsit,
                             audit.lgch, audit.nirm))
        if audit.boundary:
            msg = msg + " | within tolerance of a bound"
        return (100 if audit.agree else 0, msg)

    # UTILS

    def verdict(self):
        nirm = self.nirm()
        error = str(self._nirm_error) if self._nirm_error else None
        return mr.MacrorealismVerdict(
            mr.lg_sums(self.record), mr.lgch_values(self.record),
            mr.nsit_check(self.record, self.tol), nirm, error)

    def run(self, check):
        points, msg = getattr(self, check)()
        logger.debug("%s: %s points", check, points)
        return {'name': check, 'msg': msg, 'points': points,
                'test_status': self.test_status(points),
                'score': {'earned': points, 'total': 100}}

    def test_status(self, points):
        return 'pass' if points >= 75 else 'fail'
