"""Dense phase-1 simplex for small feasibility problems.

Solves ``A x = b, x >= 0`` by minimising the sum of one artificial variable
per row. Pivoting follows Bland's rule (smallest entering index, ties in
the ratio test broken by smallest basic index), so it never cycles.
"""
import logging
from dataclasses import dataclass

import numpy as np

from lgeva.errors import LpError
from lgeva.numerics import LP_TOL

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FeasibilityResult(object):
    """Outcome of :func:`phase_one`.

    ``infeasibility`` is the optimal phase-1 objective, i.e. the smallest
    total absolute residual ``sum |A x - b|`` reachable with ``x >= 0``.
    """

    feasible: bool
    x: np.ndarray
    infeasibility: float
    iterations: int


def _pivot(tableau, row, col):
    tableau[row] /= tableau[row, col]
    for r in range(tableau.shape[0]):
        if r != row and tableau[r, col] != 0:
            tableau[r] -= tableau[r, col] * tableau[row]


def phase_one(a_eq, b_eq, tol=LP_TOL, pivot_tol=1e-12, max_iter=10000):
    """Find ``x >= 0`` with ``a_eq x = b_eq``.

    Parameters
    ----------
    a_eq : array_like, shape (m, n)
    b_eq : array_like, shape (m,)
    tol : float
        Acceptance threshold on the phase-1 optimum.
    pivot_tol : float
        Magnitude below which reduced costs and pivot entries count as zero.
    max_iter : int
        Pivot limit; exceeding it raises :class:`LpError`.

    Returns
    -------
    FeasibilityResult
    """
    a = np.array(a_eq, dtype=float)
    b = np.array(b_eq, dtype=float)
    m, n = a.shape
    if b.shape != (m,):
        raise LpError("right-hand side has shape %s, expected (%d,)"
                      % (b.shape, m))
    negative = b < 0
    a[negative] *= -1
    b[negative] *= -1

    tableau = np.zeros((m + 1, n + m + 1))
    tableau[:m, :n] = a
    tableau[:m, n:n + m] = np.eye(m)
    tableau[:m, -1] = b
    tableau[m, :n] = -a.sum(axis=0)
    tableau[m, -1] = -b.sum()
    basis = list(range(n, n + m))

    for iteration in range(max_iter):
        reduced = tableau[m, :n + m]
        entering = np.flatnonzero(reduced < -pivot_tol)
        if entering.size == 0:
            break
        col = int(entering[0])
        column = tableau[:m, col]
        rows = np.flatnonzero(column > pivot_tol)
        if rows.size == 0:
            # the phase-1 objective is bounded below by zero
            raise LpError("unbounded phase-1 direction at column %d" % col)
        ratios = tableau[rows, -1] / column[rows]
        ties = rows[ratios <= ratios.min() + pivot_tol]
        row = int(min(ties, key=lambda r: basis[r]))
        _pivot(tableau, row, col)
        logger.debug("pivot %d: x%d leaves, x%d enters", iteration,
                     basis[row], col)
        basis[row] = col
    else:
        raise LpError("phase-1 simplex exceeded %d pivots" % max_iter)

    x = np.zeros(n)
    for r, var in enumerate(basis):
        if var < n:
            x[var] = tableau[r, -1]
    infeasibility = float(max(-tableau[m, -1], 0.0))
    return FeasibilityResult(bool(infeasibility <= tol), x, infeasibility,
                             iteration)
