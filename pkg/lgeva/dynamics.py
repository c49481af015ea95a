"""States, dichotomic observables, unsharp effects and Lüders updates.

A measurement is either a sharp :class:`DichotomicObservable` or an
:class:`UnsharpEffectPair`. Both expose ``effect(outcome)`` (the POVM
element) and ``kraus(outcome)`` (the Lüders operator), so the sequential
machinery below never needs to know which one it holds.
"""
import logging
from dataclasses import dataclass

import numpy as np

from lgeva import numerics as nm
from lgeva.errors import (DimensionMismatchError, ImpossibleBranchError,
                          InvalidSharpnessError, ZeroSectorError)

logger = logging.getLogger(__name__)

OUTCOMES = (+1, -1)
MIN_BRANCH_PROB = 1e-12


def _check_outcome(outcome):
    if outcome not in OUTCOMES:
        raise ValueError("outcome must be +1 or -1, got %r" % (outcome,))


@dataclass(frozen=True, eq=False)
class QuantumState(object):
    """Density matrix of an N-level system."""

    rho: np.ndarray

    def __post_init__(self):
        rho = nm.as_matrix(self.rho)
        tol = nm.STRUCTURAL_TOL
        residual = nm.hermitian_residual(rho)
        if residual > tol:
            raise ValueError("density matrix not Hermitian (%.3e)" % residual)
        tr = nm.trace(rho)
        if abs(tr - 1) > tol:
            raise ValueError("density matrix trace is %r, expected 1" % tr)
        smallest = np.linalg.eigvalsh((rho + nm.dagger(rho)) / 2)[0]
        if smallest < -tol:
            raise ValueError(
                "density matrix has negative eigenvalue %.3e" % smallest)
        rho.setflags(write=False)
        object.__setattr__(self, 'rho', rho)

    @property
    def dim(self):
        return self.rho.shape[0]

    @classmethod
    def from_ket(cls, ket):
        psi = np.asarray(ket, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, np.conj(psi)))

    def expectation(self, operator):
        return float(np.real(nm.trace(self.rho @ operator)))


@dataclass(frozen=True, eq=False)
class DichotomicObservable(object):
    """A +1/-1 valued sharp measurement.

    ``q`` is the measured operator; ``p_plus`` projects onto its positive
    eigenspace and ``p_minus`` onto the negative one.
    """

    q: np.ndarray
    p_plus: np.ndarray
    p_minus: np.ndarray

    def __post_init__(self):
        tol = nm.STRUCTURAL_TOL
        q, p_plus, p_minus = (nm.as_matrix(m) for m in
                              (self.q, self.p_plus, self.p_minus))
        dim = nm.require_same_dim(q, p_plus, p_minus)
        if not (nm.is_projector(p_plus, tol) and nm.is_projector(p_minus, tol)):
            raise ValueError("p_plus and p_minus must be projectors")
        if nm.frobenius(p_plus + p_minus - np.eye(dim)) > tol:
            raise ValueError("p_plus + p_minus must be the identity")
        if nm.frobenius(p_plus @ p_minus) > tol:
            raise ValueError("p_plus and p_minus must be orthogonal")
        if nm.frobenius(q @ p_plus - p_plus @ q) > tol:
            raise ValueError("q must commute with its projectors")
        for m in (q, p_plus, p_minus):
            m.setflags(write=False)
        object.__setattr__(self, 'q', q)
        object.__setattr__(self, 'p_plus', p_plus)
        object.__setattr__(self, 'p_minus', p_minus)

    @classmethod
    def from_matrix(cls, q, tol=nm.STRUCTURAL_TOL):
        """Split a Hermitian matrix into its positive and negative sectors.

        Raises
        ------
        ZeroSectorError
            If ``q`` has an eigenvalue within ``tol`` of zero.
        """
        w, v = nm.eig_hermitian(q, tol)
        if np.any(np.abs(w) <= tol):
            raise ZeroSectorError(
                "observable has a zero eigenvalue; assign that sector to an "
                "outcome explicitly with from_projector")
        plus = v[:, w > 0]
        p_plus = plus @ nm.dagger(plus)
        return cls(nm.as_matrix(q), p_plus, np.eye(len(w)) - p_plus)

    @classmethod
    def from_projector(cls, p_plus):
        """Observable ``P+ - P-`` with ``P- = I - P+``."""
        p_plus = nm.as_matrix(p_plus)
        p_minus = np.eye(p_plus.shape[0]) - p_plus
        return cls(p_plus - p_minus, p_plus, p_minus)

    @property
    def dim(self):
        return self.q.shape[0]

    @property
    def sharpness(self):
        return 1.0

    def effect(self, outcome):
        _check_outcome(outcome)
        return self.p_plus if outcome == +1 else self.p_minus

    def kraus(self, outcome):
        return self.effect(outcome)


@dataclass(frozen=True, eq=False)
class UnsharpEffectPair(object):
    """Two-outcome POVM ``E± = λ P± + (1 - λ)/2 I``."""

    lam: float
    e_plus: np.ndarray
    e_minus: np.ndarray

    def __post_init__(self):
        if not 0 < self.lam <= 1:
            raise InvalidSharpnessError(self.lam)
        tol = nm.STRUCTURAL_TOL
        e_plus, e_minus = nm.as_matrix(self.e_plus), nm.as_matrix(self.e_minus)
        dim = nm.require_same_dim(e_plus, e_minus)
        if nm.frobenius(e_plus + e_minus - np.eye(dim)) > tol:
            raise ValueError("effects must sum to the identity")
        for e in (e_plus, e_minus):
            w, _ = nm.eig_hermitian(e, tol)
            if w[-1] < -tol or w[0] > 1 + tol:
                raise ValueError("effect spectrum leaves [0, 1]: %s" % w)
        roots = tuple(nm.psd_sqrt(e, 0.0, 1.0, tol) for e in (e_plus, e_minus))
        for m in (e_plus, e_minus) + roots:
            m.setflags(write=False)
        object.__setattr__(self, 'e_plus', e_plus)
        object.__setattr__(self, 'e_minus', e_minus)
        object.__setattr__(self, '_roots', roots)

    @property
    def dim(self):
        return self.e_plus.shape[0]

    @property
    def sharpness(self):
        return self.lam

    def effect(self, outcome):
        _check_outcome(outcome)
        return self.e_plus if outcome == +1 else self.e_minus

    def kraus(self, outcome):
        _check_outcome(outcome)
        return self._roots[0] if outcome == +1 else self._roots[1]


@dataclass(frozen=True)
class PairStatistics(object):
    """Joint outcome probabilities of a two-time sequential measurement.

    The first sign refers to the earlier measurement: ``p_pm`` is the
    probability of ``+`` first and ``-`` second.
    """

    p_pp: float
    p_pm: float
    p_mp: float
    p_mm: float

    def __post_init__(self):
        values = (self.p_pp, self.p_pm, self.p_mp, self.p_mm)
        for name, p in zip(('pp', 'pm', 'mp', 'mm'), values):
            if not (-nm.ALGEBRAIC_TOL <= p <= 1 + nm.ALGEBRAIC_TOL):
                raise ValueError("p_%s = %r is not a probability" % (name, p))
        if abs(sum(values) - 1) > nm.STRUCTURAL_TOL:
            raise ValueError("joint probabilities sum to %r" % sum(values))

    def joint(self, first, second):
        _check_outcome(first)
        _check_outcome(second)
        key = ('p' if first > 0 else 'm') + ('p' if second > 0 else 'm')
        return getattr(self, 'p_' + key)

    @property
    def correlation(self):
        return self.p_pp - self.p_pm - self.p_mp + self.p_mm

    @property
    def first_plus(self):
        return self.p_pp + self.p_pm

    @property
    def second_plus(self):
        return self.p_pp + self.p_mp

    def conditional(self, second, first):
        """``p(second | first)``."""
        marginal = self.first_plus if first > 0 else 1 - self.first_plus
        if marginal <= MIN_BRANCH_PROB:
            raise ImpossibleBranchError(first, marginal)
        return self.joint(first, second) / marginal

    def as_dict(self):
        return {'pp': self.p_pp, 'pm': self.p_pm,
                'mp': self.p_mp, 'mm': self.p_mm}

    @classmethod
    def from_dict(cls, d):
        return cls(float(d['pp']), float(d['pm']),
                   float(d['mp']), float(d['mm']))

    @classmethod
    def from_correlation(cls, c):
        """Unbiased-marginal statistics ``p^{ab} = (1 + a b c) / 4``."""
        return cls((1 + c) / 4, (1 - c) / 4, (1 - c) / 4, (1 + c) / 4)


def maximally_mixed(dim):
    if dim < 2:
        raise ValueError("dimension must be at least 2, got %r" % (dim,))
    return QuantumState(np.eye(dim, dtype=complex) / dim)


def evolve(state, u):
    nm.require_same_dim(state.rho, u)
    return QuantumState(u @ state.rho @ nm.dagger(u))


def _check_dims(state, measurement):
    if state.dim != measurement.dim:
        raise DimensionMismatchError(
            "state has dimension %d, measurement %d"
            % (state.dim, measurement.dim))


def branch(state, measurement, outcome):
    """Unnormalised post-measurement operator and outcome probability."""
    _check_dims(state, measurement)
    prob = float(np.real(nm.trace(measurement.effect(outcome) @ state.rho)))
    k = measurement.kraus(outcome)
    return k @ state.rho @ nm.dagger(k), prob


def luders_update(state, measurement, outcome):
    """Selective Lüders update for a sharp or unsharp measurement.

    Returns
    -------
    post : QuantumState
        ``K ρ K† / tr(E ρ)`` with ``K`` the projector or ``√E``.
    prob : float
        ``tr(E ρ)``.

    Raises
    ------
    ImpossibleBranchError
        If the requested outcome has probability below 1e-12.
    """
    unnormalised, prob = branch(state, measurement, outcome)
    if prob <= MIN_BRANCH_PROB:
        raise ImpossibleBranchError(outcome, prob)
    rho = unnormalised / prob
    return QuantumState((rho + nm.dagger(rho)) / 2), prob


def luders_sharp(state, obs, outcome):
    if not isinstance(obs, DichotomicObservable):
        raise TypeError("luders_sharp needs a DichotomicObservable")
    return luders_update(state, obs, outcome)


def luders_unsharp(state, eff, outcome):
    if not isinstance(eff, UnsharpEffectPair):
        raise TypeError("luders_unsharp needs an UnsharpEffectPair")
    return luders_update(state, eff, outcome)


def nonselective(state, measurement):
    """State after measuring and forgetting the outcome."""
    rho = sum(branch(state, measurement, a)[0] for a in OUTCOMES)
    return QuantumState(rho)


def outcome_probability(state, measurement, outcome=+1):
    _check_dims(state, measurement)
    return float(np.real(nm.trace(measurement.effect(outcome) @ state.rho)))


def make_unsharp(obs, lam):
    """Noisy version ``E± = λ P± + (1 - λ)/2 I`` of a sharp observable."""
    if not 0 < lam <= 1:
        raise InvalidSharpnessError(lam)
    noise = (1 - lam) / 2 * np.eye(obs.dim)
    return UnsharpEffectPair(lam, lam * obs.p_plus + noise,
                             lam * obs.p_minus + noise)


def sequential_pair_statistics(state, first, u_between, second,
                               u_before=None):
    """Joint statistics of two measurements separated by a unitary.

    The state is evolved by ``u_before``, measured with ``first`` (both
    branches kept), each branch evolved by ``u_between`` and measured with
    ``second``. Branches with probability below 1e-12 contribute zero.
    """
    if u_before is None:
        u_before = np.eye(state.dim)
    for u in (u_between, u_before):
        nm.require_same_dim(state.rho, u)
        if not nm.is_unitary(u):
            raise ValueError("evolution operator is not unitary")
    _check_dims(state, first)
    _check_dims(state, second)
    state = evolve(state, u_before)
    joints = {}
    for a in OUTCOMES:
        unnormalised, p_a = branch(state, first, a)
        evolved = u_between @ unnormalised @ nm.dagger(u_between)
        for b in OUTCOMES:
            if p_a <= MIN_BRANCH_PROB:
                joints[a, b] = 0.0
                continue
            # p(a) p(b|a) with the unnormalised branch already carrying p(a)
            joints[a, b] = float(np.real(nm.trace(second.effect(b) @ evolved)))
        logger.debug("branch %+d: p=%.6g", a, p_a)
    total = sum(joints.values())
    return PairStatistics(*(min(max(joints[k] / total, 0.0), 1.0) for k in
                            ((1, 1), (1, -1), (-1, 1), (-1, -1))))


def correlation_of(stats):
    return stats.correlation


def heisenberg_correlation_2d(obs, u1, u2, tol=nm.STRUCTURAL_TOL):
    """Two-time correlation ``½ tr[Q(t1) Q(t2)]`` of a traceless qubit observable.

    ``Q(t) = U(t)† Q U(t)``. Valid for any initial state of a two-level
    system; the observable must be traceless.
    """
    q = obs.q if isinstance(obs, DichotomicObservable) else nm.as_matrix(obs)
    if q.shape != (2, 2):
        raise DimensionMismatchError("heisenberg_correlation_2d needs dim 2")
    nm.require_same_dim(q, u1, u2)
    if abs(nm.trace(q)) > tol:
        raise ValueError("observable must be traceless, tr = %r" % nm.trace(q))
    q1 = nm.dagger(u1) @ q @ u1
    q2 = nm.dagger(u2) @ q @ u2
    return float(np.real(nm.trace(q1 @ q2))) / 2
