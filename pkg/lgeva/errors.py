"""Exceptions raised by the evaluator.

Validation failures subclass ``ValueError`` so plain ``except ValueError``
callers keep working; numerical failures subclass ``ArithmeticError``.
"""


class LgEvaError(Exception):
    """Base class for every error raised by lgeva."""


class NotHermitianError(LgEvaError, ValueError):

    def __init__(self, residual, tol):
        self.residual = residual
        self.tol = tol
        super().__init__(
            "matrix is not Hermitian: ||H - H^dagger|| = %.3e > %.1e"
            % (residual, tol))


class DimensionMismatchError(LgEvaError, ValueError):
    pass


class ImpossibleBranchError(LgEvaError, ValueError):

    def __init__(self, outcome, prob):
        self.outcome = outcome
        self.prob = prob
        super().__init__(
            "impossible branch: outcome %+d has probability %.3e"
            % (outcome, prob))


class InvalidSharpnessError(LgEvaError, ValueError):

    def __init__(self, lam):
        self.lam = lam
        super().__init__("sharpness must lie in (0, 1], got %r" % (lam,))


class ZeroSectorError(LgEvaError, ValueError):
    """A dichotomic observable was built from a matrix with a zero eigenvalue."""


class NoThresholdError(LgEvaError, ValueError):

    def __init__(self, k_max):
        self.k_max = k_max
        super().__init__(
            "K_max = %.6g <= 2: the inequality is never violated, "
            "no sharpness threshold exists" % k_max)


class NsitPreconditionError(LgEvaError, ValueError):

    def __init__(self, report):
        self.report = report
        super().__init__(
            "no-signalling in time fails (%s off by %.3e); "
            "the joint-distribution problem is ill-posed"
            % (report.offending, report.worst_deviation))


class RecordSchemaError(LgEvaError, ValueError):

    def __init__(self, messages):
        self.messages = list(messages)
        super().__init__("; ".join(self.messages))


class ScanConfigError(LgEvaError, ValueError):
    pass


class LpError(LgEvaError, ArithmeticError):
    pass
