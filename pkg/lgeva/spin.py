"""Spin-j constructions for four-time Leggett-Garg tests.

Two schemes are implemented:

* the Gisin-Peres block scheme: the observable ``(Γz ± Π)/√(2j+1)`` is
  built from σz blocks on basis pairs (1,2), (3,4), ... and every block
  precesses independently, giving ``K = 2√2`` for every spin;
* the Kofler-Brukner parity scheme: the parity of ``Jz`` measured on the
  maximally mixed state precessing under ``Jx``, whose sum saturates at
  about 2.481 for large spin.

Each quantity is available in closed form and as a full sequential
simulation built on :mod:`lgeva.dynamics`.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.linalg import block_diag
from scipy.optimize import minimize_scalar

from lgeva import dynamics as dyn
from lgeva import numerics as nm
from lgeva.errors import InvalidSharpnessError, NoThresholdError

logger = logging.getLogger(__name__)

TSIRELSON = 2 * math.sqrt(2)
KB_PLATEAU = 2.481
# Quoted for comparison only: sharpness below which the spin-1 spatial
# (Bell) inequality of the same block scheme can no longer be violated.
SPATIAL_SPIN1_SHARPNESS = 0.8852

ODD_MODES = ('rabi', 'static')
SERIES_CUTOFF = 1e-7


@dataclass(frozen=True)
class SpinValue(object):
    """Spin quantum number stored as ``two_j = 2j`` so it stays exact."""

    two_j: int

    def __post_init__(self):
        if int(self.two_j) != self.two_j or self.two_j < 1:
            raise ValueError("two_j must be a positive integer, got %r"
                             % (self.two_j,))
        object.__setattr__(self, 'two_j', int(self.two_j))

    @classmethod
    def from_j(cls, j):
        two_j = Fraction(str(j)) * 2
        if two_j.denominator != 1:
            raise ValueError("j must be integral or half-integral, got %r"
                             % (j,))
        return cls(int(two_j))

    @property
    def j(self):
        return self.two_j / 2

    @property
    def dim(self):
        return self.two_j + 1

    @property
    def is_even(self):
        """True when ``N = 2j + 1`` is even (half-integral spin)."""
        return self.dim % 2 == 0

    @property
    def m_values(self):
        """Magnetic quantum numbers in basis order, ``m = j`` first."""
        return self.j - np.arange(self.dim)

    def __str__(self):
        return str(Fraction(self.two_j, 2))


@dataclass(frozen=True)
class AngleSchedule(object):
    """Four precession angles ``α_i = ω t_i / 2`` in radians."""

    alphas: tuple

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas)
        if len(alphas) != 4:
            raise ValueError("a schedule needs four angles, got %d"
                             % len(alphas))
        if not all(math.isfinite(a) for a in alphas):
            raise ValueError("schedule angles must be finite")
        object.__setattr__(self, 'alphas', alphas)

    @classmethod
    def from_string(cls, text):
        return cls(tuple(float(a) for a in text.split(',')))

    @classmethod
    def equidistant(cls, step, start=0.0):
        return cls(tuple(start + k * step for k in range(4)))

    def pair(self, i, j):
        """Angles of the 1-based times ``i`` and ``j``."""
        return self.alphas[i - 1], self.alphas[j - 1]


CANONICAL_SCHEDULE = AngleSchedule((0.0, math.pi / 4, math.pi / 2,
                                    3 * math.pi / 4))

LG_PAIRS = ((1, 2), (2, 3), (3, 4), (1, 4))


@dataclass(frozen=True, eq=False)
class GpObservable(object):
    """Gisin-Peres observable ``(Γz + sign Π)/√(2j+1)``."""

    sign: int
    q_matrix: np.ndarray
    paired_blocks: list = field(default_factory=list)
    unpaired: float = None

    @property
    def dim(self):
        return self.q_matrix.shape[0]

    @property
    def scale(self):
        return 1 / math.sqrt(self.dim)


def _check_n(n):
    if n < 2:
        raise ValueError("dimension must be at least 2, got %r" % (n,))


def gamma_matrices(n):
    """Block-diagonal Pauli matrices Γx, Γy, Γz of dimension ``n``.

    Every block is the Pauli triple, so ``n = 2`` gives σx, σy, σz. For odd
    ``n`` the last basis vector is unpaired: Γx and Γy vanish on it and Γz
    has +1 there.
    """
    _check_n(n)
    gx = np.zeros((n, n), dtype=complex)
    gy = np.zeros((n, n), dtype=complex)
    for k in range(0, n - 1, 2):
        gx[k, k + 1] = gx[k + 1, k] = 1
        gy[k, k + 1] = -1j
        gy[k + 1, k] = 1j
    gz = np.diag([(-1) ** k for k in range(n)]).astype(complex)
    return gx, gy, gz


def pi_matrix(n):
    _check_n(n)
    pi = np.zeros((n, n), dtype=complex)
    if n % 2:
        pi[n - 1, n - 1] = 1 / math.sqrt(2)
    return pi


def gp_observable(spin, sign=+1):
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    n = spin.dim
    _, _, gz = gamma_matrices(n)
    if n % 2:
        # direct sum of σz blocks: the unpaired sector carries Π only
        gz[n - 1, n - 1] = 0
    q = (gz + sign * pi_matrix(n)) / math.sqrt(n)
    blocks = [nm.SIGMA_Z.copy() for _ in range(n // 2)]
    unpaired = None if spin.is_even else sign / math.sqrt(2)
    return GpObservable(sign, q, blocks, unpaired)


def block_rotation(alpha):
    """Qubit precession ``exp(-i (α/2) σx)``; U† σz U = cos α σz + sin α σy."""
    return nm.expm_i_hermitian(nm.SIGMA_X, alpha / 2)


def block_unitary(spin, alpha):
    """Direct sum of ``exp(-i (α/2) σx)`` over the paired blocks.

    The unpaired sector of odd ``N`` is left untouched; its precession is
    the zero-beam treatment of :func:`zero_beam_statistics`.
    """
    blocks = [block_rotation(alpha)] * (spin.dim // 2)
    if not spin.is_even:
        blocks.append(np.eye(1, dtype=complex))
    return block_diag(*blocks)


def gp_correlation_closed(spin, alpha1, alpha2, sign_for_pi=+1):
    c = math.cos(alpha1) * math.cos(alpha2) + math.sin(alpha1) * math.sin(alpha2)
    if spin.is_even:
        return c
    return (spin.two_j * c + sign_for_pi / math.sqrt(2)) / spin.dim


def lg_sum(correlate, schedule):
    """``K = C12 + C23 + C34 - C14``.

    ``correlate(a1, a2, sign)`` returns one two-time correlation; the
    ``C14`` term is requested with ``sign = -1``.
    """
    c12, c23, c34 = (correlate(*schedule.pair(i, j), +1)
                     for i, j in LG_PAIRS[:3])
    c14 = correlate(*schedule.pair(1, 4), -1)
    return c12 + c23 + c34 - c14


def gp_lg_sum(spin, schedule=CANONICAL_SCHEDULE):
    return lg_sum(lambda a1, a2, s: gp_correlation_closed(spin, a1, a2, s),
                  schedule)


def spin_operators(spin):
    """``Jx, Jy, Jz`` in the ``|j, m⟩`` basis ordered ``m = j, ..., -j``."""
    m = spin.m_values
    j = spin.j
    jz = np.diag(m).astype(complex)
    # <m+1| J+ |m> = sqrt(j(j+1) - m(m+1))
    jplus = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), k=1)
    jplus = jplus.astype(complex)
    jminus = nm.dagger(jplus)
    jx = (jplus + jminus) / 2
    jy = (jplus - jminus) / 2j
    return jx, jy, jz


def _zero_beam_observable(dim, zero_index):
    p_minus = np.zeros((dim, dim), dtype=complex)
    p_minus[zero_index, zero_index] = 1
    return dyn.DichotomicObservable.from_projector(np.eye(dim) - p_minus)


def zero_beam_statistics(theta1, theta2, spin=None, lam=1.0):
    """Sequential statistics of the ``m_z = 0`` beam of an integral spin.

    The beam ``|m_z=0⟩`` is precessed by ``exp(-i θ1 Jy)``, measured with
    ``P+ = I - P0`` / ``P- = P0``, precessed by ``exp(-i θ2 Jy)`` and
    measured again. For spin 1 the conditional probabilities are
    ``cos²θ2, sin²θ2, sin²θ2, cos²θ2`` and the correlation is ``cos 2θ2``.
    """
    spin = spin or SpinValue(2)
    if spin.is_even:
        raise ValueError("half-integral spin %s has no m_z = 0 beam" % spin)
    jx, jy, jz = spin_operators(spin)
    zero = spin.two_j // 2
    ket = np.zeros(spin.dim, dtype=complex)
    ket[zero] = 1
    measurement = _zero_beam_observable(spin.dim, zero)
    if lam < 1:
        measurement = dyn.make_unsharp(measurement, lam)
    return dyn.sequential_pair_statistics(
        dyn.QuantumState.from_ket(ket), measurement,
        nm.expm_i_hermitian(jy, theta2), measurement,
        u_before=nm.expm_i_hermitian(jy, theta1))


def zero_beam_survey(two_j_values, theta1, theta2):
    """Compare the zero-beam correlation with ``cos 2θ2`` for several spins.

    Returns a list of ``(two_j, correlation, deviation)`` rows; only
    integral spins are surveyed.
    """
    rows = []
    target = math.cos(2 * theta2)
    for two_j in two_j_values:
        spin = SpinValue(two_j)
        if spin.is_even:
            continue
        c = zero_beam_statistics(theta1, theta2, spin).correlation
        rows.append((two_j, c, c - target))
        logger.debug("zero beam 2j=%d: C=%.12g (cos 2θ2 %+.3e)",
                     two_j, c, c - target)
    return rows


def _check_lambda(lam):
    if not 0 < lam <= 1:
        raise InvalidSharpnessError(lam)


def _block_measurement(lam):
    obs = dyn.DichotomicObservable.from_matrix(nm.SIGMA_Z)
    return obs if lam == 1 else dyn.make_unsharp(obs, lam)


def gp_beam_simulated_correlation(spin, alpha1, alpha2, lam=1.0,
                                  sign_for_pi=+1, odd_mode='rabi',
                                  zero_beam_rate=0.5):
    """Two-time correlation of the block scheme from explicit beam simulation.

    The maximally mixed input is split into beams, one per basis vector,
    each of weight ``1/(2j+1)``. A paired block carries two beams, i.e. the
    qubit state I/2 with weight ``2/(2j+1)``, measured with σz (or its
    unsharp version) before and after the block precession.

    For odd ``N`` the unpaired beam is handled according to ``odd_mode``:

    ``'rabi'``
        zero-beam treatment with ``θ = zero_beam_rate * α``; the default
        rate 1/2 makes its correlation ``cos(α2 - α1)``.
    ``'static'``
        the unpaired sector is measured as a fixed ±1 value, contributing
        ``λ²`` regardless of the angles.
    """
    _check_lambda(lam)
    if odd_mode not in ODD_MODES:
        raise ValueError("odd_mode must be one of %s" % (ODD_MODES,))
    block = _block_measurement(lam)
    u1 = block_rotation(alpha1)
    u2 = block_rotation(alpha2)
    stats = dyn.sequential_pair_statistics(
        dyn.maximally_mixed(2), block, u2 @ nm.dagger(u1), block,
        u_before=u1)
    pairs = spin.dim // 2
    total = 2 * pairs * stats.correlation
    if not spin.is_even:
        if odd_mode == 'rabi':
            beam = zero_beam_statistics(zero_beam_rate * alpha1,
                                        zero_beam_rate * (alpha2 - alpha1),
                                        lam=lam)
            total += beam.correlation
        else:
            total += _static_sector_correlation(sign_for_pi, lam)
    return total / spin.dim


def _static_sector_correlation(sign, lam):
    # one-dimensional sector: both measurements return sign(Π) up to noise
    e_sign = (1 + lam) / 2
    e_other = (1 - lam) / 2
    p_same = e_sign ** 2 + e_other ** 2
    return p_same - (1 - p_same)


def gp_lg_sum_simulated(spin, schedule=CANONICAL_SCHEDULE, lam=1.0,
                        odd_mode='rabi', zero_beam_rate=0.5):
    return lg_sum(
        lambda a1, a2, s: gp_beam_simulated_correlation(
            spin, a1, a2, lam, s, odd_mode, zero_beam_rate),
        schedule)


def static_odd_lg_sum(spin):
    """Closed form of the static odd-mode sum at the canonical schedule."""
    return (4 * math.sqrt(2) * spin.j + 2) / spin.dim


def parity_observable(spin):
    signs = np.array([(-1) ** k for k in range(spin.dim)], dtype=complex)
    p_plus = np.diag((1 + signs) / 2)
    return dyn.DichotomicObservable(np.diag(signs), p_plus,
                                    np.eye(spin.dim) - p_plus)


def _sin_ratio(x, n):
    """``sin(x) / (n sin(x/n))`` with its removable singularities."""
    y = x / n
    k = round(y / math.pi)
    if abs(y - k * math.pi) < SERIES_CUTOFF:
        if k == 0:
            return float(np.sinc(x / math.pi) / np.sinc(y / math.pi))
        return float((-1) ** (k * (n - 1)))
    return math.sin(x) / (n * math.sin(y))


def kb_correlation_closed(spin, x):
    """Parity correlation ``sin x / ((2j+1) sin(x/(2j+1)))``, ``x = (2j+1) ωΔt``."""
    return _sin_ratio(x, spin.dim)


def kb_simulated_correlation(spin, omega_dt, lam=1.0):
    """Parity correlation on I/N precessing under ``exp(-i ωΔt Jx)``."""
    _check_lambda(lam)
    jx, _, _ = spin_operators(spin)
    measurement = parity_observable(spin)
    if lam < 1:
        measurement = dyn.make_unsharp(measurement, lam)
    stats = dyn.sequential_pair_statistics(
        dyn.maximally_mixed(spin.dim), measurement,
        nm.expm_i_hermitian(jx, omega_dt), measurement)
    return stats.correlation


def kb_K(x):
    """Large-spin parity sum ``3 sin(x)/x - sin(3x)/(3x)``."""
    return float(3 * np.sinc(x / math.pi) - np.sinc(3 * x / math.pi))


def kb_finite_k(spin, x, simulated=False):
    """Parity sum ``3 C(x) - C(3x)`` for equidistant times at finite spin."""
    if simulated:
        omega_dt = x / spin.dim
        return (3 * kb_simulated_correlation(spin, omega_dt)
                - kb_simulated_correlation(spin, 3 * omega_dt))
    return 3 * kb_correlation_closed(spin, x) - kb_correlation_closed(spin, 3 * x)


def maximize(f, lo, hi, grid=10 ** 4, xtol=1e-10):
    """Global maximum of a smooth function on ``(lo, hi)``.

    A uniform grid locates the best cell, golden-section search refines it.

    Returns
    -------
    x_star, f_star : float
    """
    xs = np.linspace(lo, hi, grid + 2)[1:-1]
    values = np.array([f(x) for x in xs])
    best = int(np.clip(np.argmax(values), 1, len(xs) - 2))
    res = minimize_scalar(lambda x: -f(x), method='golden',
                          bracket=(xs[best - 1], xs[best], xs[best + 1]),
                          options={'xtol': xtol})
    x_star = float(res.x)
    logger.debug("maximum %.12g at x=%.12g after %d evaluations",
                 -res.fun, x_star, res.nfev)
    return x_star, float(-res.fun)


def kb_optimum(grid=10 ** 4):
    """Argmax and maximum of :func:`kb_K` on ``(0, π)``."""
    return maximize(kb_K, 0.0, math.pi, grid)


def sharpness_threshold(k_max):
    """Sharpness ``√(2 / K_max)`` below which ``λ² K_max ≤ 2``."""
    if k_max <= 2:
        raise NoThresholdError(k_max)
    return math.sqrt(2 / k_max)
