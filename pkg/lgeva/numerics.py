"""Dense complex matrix substrate.

Matrices are plain ``numpy.ndarray`` values of dtype ``complex128``; every
function here is pure and never mutates its arguments.

Tolerances used across the package:

* ``STRUCTURAL_TOL`` for Hermiticity, unitarity, projector and trace checks,
* ``ALGEBRAIC_TOL`` for algebraic identities,
* ``LP_TOL`` for statistical and linear-programming decisions.
"""
import logging

import numpy as np

from lgeva.errors import DimensionMismatchError, NotHermitianError

logger = logging.getLogger(__name__)

STRUCTURAL_TOL = 1e-10
ALGEBRAIC_TOL = 1e-12
LP_TOL = 1e-9

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


def as_matrix(a):
    """Coerce ``a`` to a square, finite complex128 matrix."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionMismatchError(
            "expected a non-empty square matrix, got shape %s" % (m.shape,))
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has NaN or infinite entries")
    return m


def dagger(a):
    return np.conj(np.transpose(a))


def trace(a):
    return complex(np.trace(a))


def frobenius(a):
    return float(np.linalg.norm(a, 'fro'))


def hermitian_residual(a):
    return frobenius(a - dagger(a))


def is_hermitian(a, tol=STRUCTURAL_TOL):
    return hermitian_residual(as_matrix(a)) <= tol


def is_unitary(a, tol=STRUCTURAL_TOL):
    m = as_matrix(a)
    return frobenius(dagger(m) @ m - np.eye(m.shape[0])) <= tol


def is_projector(a, tol=STRUCTURAL_TOL):
    m = as_matrix(a)
    return hermitian_residual(m) <= tol and frobenius(m @ m - m) <= tol


def require_same_dim(*matrices):
    dims = {np.shape(m)[0] for m in matrices}
    if len(dims) != 1:
        raise DimensionMismatchError(
            "dimension mismatch: %s" % sorted(dims))
    return dims.pop()


def eig_hermitian(h, tol=STRUCTURAL_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    h : array_like
        Hermitian matrix.
    tol : float
        Allowed Frobenius norm of ``h - h^dagger``.

    Returns
    -------
    w : numpy.ndarray
        Real eigenvalues in descending order. Eigenvalues equal within
        ``tol`` keep the order of the basis vector each eigenvector is
        mostly supported on.
    v : numpy.ndarray
        Unitary matrix whose columns are the eigenvectors.
    """
    m = as_matrix(h)
    residual = hermitian_residual(m)
    if residual > tol:
        raise NotHermitianError(residual, tol)
    w, v = np.linalg.eigh((m + dagger(m)) / 2)
    lead = np.argmax(np.abs(v), axis=0)
    order = list(np.argsort(-w, kind='stable'))
    start = 0
    while start < len(order):
        stop = start + 1
        while stop < len(order) and w[order[start]] - w[order[stop]] <= tol:
            stop += 1
        order[start:stop] = sorted(order[start:stop], key=lambda k: lead[k])
        start = stop
    return w[order], v[:, order]


def _expm_i_2x2(h, s):
    # h = a0 I + a . sigma
    a0 = np.real(trace(h)) / 2
    a = np.real([trace(h @ SIGMA_X), trace(h @ SIGMA_Y),
                 trace(h @ SIGMA_Z)]) / 2
    norm = np.linalg.norm(a)
    phase = np.exp(-1j * s * a0)
    if norm == 0:
        return phase * IDENTITY_2
    n_sigma = (a[0] * SIGMA_X + a[1] * SIGMA_Y + a[2] * SIGMA_Z) / norm
    return phase * (np.cos(s * norm) * IDENTITY_2
                    - 1j * np.sin(s * norm) * n_sigma)


def expm_i_hermitian(h, s, tol=STRUCTURAL_TOL, closed_form=True):
    """Return ``exp(-i s h)`` for Hermitian ``h``.

    2x2 generators use the Pauli closed form unless ``closed_form`` is
    False; everything else goes through :func:`eig_hermitian`.
    """
    m = as_matrix(h)
    residual = hermitian_residual(m)
    if residual > tol:
        raise NotHermitianError(residual, tol)
    if closed_form and m.shape == (2, 2):
        return _expm_i_2x2(m, s)
    w, v = eig_hermitian(m, tol)
    return (v * np.exp(-1j * s * w)) @ dagger(v)


def psd_sqrt(e, lower=0.0, upper=None, tol=STRUCTURAL_TOL):
    """Positive square root of a positive semidefinite matrix.

    Eigenvalues are clamped into ``[lower, upper]`` before the square root,
    so round-off negatives of order 1e-16 never reach ``sqrt``.
    """
    w, v = eig_hermitian(e, tol)
    w = np.clip(w, lower, upper)
    return (v * np.sqrt(w)) @ dagger(v)


def random_hermitian(dim, rng):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + dagger(a)) / 2


def random_unitary(dim, rng):
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    z = (rng.normal(size=(dim, dim))
         + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
