import math

import numpy as np
import pytest

from lgeva import numerics as nm
from lgeva import spin as sp
from lgeva.errors import InvalidSharpnessError, NoThresholdError

SPINS = [sp.SpinValue(t) for t in range(1, 21)]


def test_spin_value():
    assert sp.SpinValue.from_j(1.5).two_j == 3
    assert sp.SpinValue.from_j('1/2').dim == 2
    assert str(sp.SpinValue(3)) == '3/2'
    assert list(sp.SpinValue(2).m_values) == [1, 0, -1]
    with pytest.raises(ValueError):
        sp.SpinValue(0)
    with pytest.raises(ValueError):
        sp.SpinValue.from_j(0.3)


def test_schedule_parsing():
    schedule = sp.AngleSchedule.from_string('0,0.5,1,1.5')
    assert schedule == sp.AngleSchedule.equidistant(0.5)
    assert schedule.pair(1, 4) == (0.0, 1.5)
    with pytest.raises(ValueError):
        sp.AngleSchedule.from_string('0,1,2')


def test_spin_operator_commutator():
    for spin in (sp.SpinValue(1), sp.SpinValue(4)):
        jx, jy, jz = sp.spin_operators(spin)
        assert nm.frobenius(jx @ jy - jy @ jx - 1j * jz) < 1e-12
        casimir = jx @ jx + jy @ jy + jz @ jz
        assert np.allclose(casimir, spin.j * (spin.j + 1) * np.eye(spin.dim))


def test_gamma_matrices_single_block():
    gx, gy, gz = sp.gamma_matrices(2)
    assert np.allclose(gx, nm.SIGMA_X)
    assert np.allclose(gy, nm.SIGMA_Y)
    assert np.allclose(gz, nm.SIGMA_Z)


def test_gamma_matrices_odd_dimension():
    gx, gy, gz = sp.gamma_matrices(3)
    assert np.allclose(np.diag(gz), [1, -1, 1])
    assert np.count_nonzero(gx) == 2 and gx[0, 1] == gx[1, 0] == 1
    assert not gy[2].any() and not gy[:, 2].any()
    with pytest.raises(ValueError):
        sp.gamma_matrices(1)


def test_pi_matrix():
    assert not sp.pi_matrix(4).any()
    pi = sp.pi_matrix(5)
    assert pi[4, 4] == pytest.approx(1 / math.sqrt(2))
    assert np.count_nonzero(pi) == 1


@pytest.mark.parametrize('sign', [+1, -1])
def test_gp_observable_spin_one(sign):
    obs = sp.gp_observable(sp.SpinValue(2), sign)
    expected = np.diag([1, -1, sign / math.sqrt(2)]) / math.sqrt(3)
    assert np.allclose(obs.q_matrix, expected)
    assert len(obs.paired_blocks) == 1
    assert obs.unpaired == pytest.approx(sign / math.sqrt(2))


def test_gp_observable_spin_half():
    obs = sp.gp_observable(sp.SpinValue(1))
    assert np.allclose(obs.q_matrix, nm.SIGMA_Z / math.sqrt(2))
    assert obs.unpaired is None


def test_block_rotation_heisenberg_form():
    alpha = 0.9
    u = sp.block_rotation(alpha)
    rotated = nm.dagger(u) @ nm.SIGMA_Z @ u
    expected = math.cos(alpha) * nm.SIGMA_Z + math.sin(alpha) * nm.SIGMA_Y
    assert nm.frobenius(rotated - expected) < 1e-12


@pytest.mark.parametrize('two_j', [1, 3, 5, 9])
def test_rotated_gamma_even_dimension(two_j):
    spin = sp.SpinValue(two_j)
    gx, gy, gz = sp.gamma_matrices(spin.dim)
    alpha = 1.1
    u = sp.block_unitary(spin, alpha)
    rotated = nm.dagger(u) @ gz @ u
    assert nm.frobenius(rotated - (math.cos(alpha) * gz
                                   + math.sin(alpha) * gy)) < 1e-12


def test_rotated_observable_odd_dimension():
    spin = sp.SpinValue(4)
    alpha = 0.35
    _, gy, _ = sp.gamma_matrices(spin.dim)
    obs = sp.gp_observable(spin, -1)
    paired = obs.q_matrix * math.sqrt(spin.dim) + sp.pi_matrix(spin.dim)
    u = sp.block_unitary(spin, alpha)
    expected = (math.cos(alpha) * paired + math.sin(alpha) * gy
                - sp.pi_matrix(spin.dim)) / math.sqrt(spin.dim)
    assert nm.frobenius(nm.dagger(u) @ obs.q_matrix @ u - expected) < 1e-12


def test_block_unitary_leaves_unpaired_sector():
    u = sp.block_unitary(sp.SpinValue(2), 0.4)
    assert u.shape == (3, 3)
    assert u[2, 2] == 1
    half = math.cos(0.2) * nm.IDENTITY_2 - 1j * math.sin(0.2) * nm.SIGMA_X
    assert nm.frobenius(u[:2, :2] - half) < 1e-12


@pytest.mark.parametrize('alphas, sign, expected', [
    ((0, math.pi / 4), +1, 1 / math.sqrt(2)),
    ((0, 3 * math.pi / 4), -1, -1 / math.sqrt(2)),
])
def test_gp_correlation_closed_spin_one(alphas, sign, expected):
    c = sp.gp_correlation_closed(sp.SpinValue(2), *alphas, sign_for_pi=sign)
    assert c == pytest.approx(expected, abs=1e-12)


def test_gp_closed_matches_beam_simulation(rng):
    for _ in range(100):
        # even dimension: 2j odd, j <= 10
        spin = sp.SpinValue(2 * int(rng.integers(0, 10)) + 1)
        a1, a2 = rng.uniform(0, 2 * math.pi, size=2)
        assert sp.gp_beam_simulated_correlation(spin, a1, a2) == pytest.approx(
            sp.gp_correlation_closed(spin, a1, a2), abs=1e-10), (spin, a1, a2)


@pytest.mark.parametrize('spin', SPINS, ids=str)
def test_canonical_violation_closed(spin):
    assert sp.gp_lg_sum(spin) == pytest.approx(sp.TSIRELSON, abs=1e-10)


@pytest.mark.parametrize('spin', SPINS, ids=str)
def test_canonical_violation_simulated(spin):
    assert sp.gp_lg_sum_simulated(spin) == pytest.approx(sp.TSIRELSON,
                                                         abs=1e-10)


def test_static_odd_mode_spin_one():
    spin = sp.SpinValue(2)
    k = sp.gp_lg_sum_simulated(spin, odd_mode='static')
    assert k == pytest.approx(sp.static_odd_lg_sum(spin), abs=1e-10)
    assert k == pytest.approx(2.552, abs=1e-3)


def test_static_odd_mode_even_dimension_unchanged():
    spin = sp.SpinValue(3)
    assert sp.gp_lg_sum_simulated(spin, odd_mode='static') == pytest.approx(
        sp.TSIRELSON, abs=1e-10)


def test_unknown_odd_mode():
    with pytest.raises(ValueError):
        sp.gp_beam_simulated_correlation(sp.SpinValue(2), 0, 1,
                                         odd_mode='bogus')


def test_zero_beam_conditionals(rng):
    for theta1, theta2 in rng.uniform(0, math.pi, size=(50, 2)):
        stats = sp.zero_beam_statistics(theta1, theta2)
        c2, s2 = math.cos(theta2) ** 2, math.sin(theta2) ** 2
        p_plus = stats.first_plus
        if p_plus > 1e-3:
            assert stats.conditional(+1, +1) == pytest.approx(c2, abs=1e-12)
            assert stats.conditional(-1, +1) == pytest.approx(s2, abs=1e-12)
        if 1 - p_plus > 1e-3:
            assert stats.conditional(+1, -1) == pytest.approx(s2, abs=1e-12)
            assert stats.conditional(-1, -1) == pytest.approx(c2, abs=1e-12)


def test_zero_beam_correlation_independent_of_first_angle(rng):
    theta2 = 0.83
    values = [sp.zero_beam_statistics(t, theta2).correlation
              for t in rng.uniform(0, math.pi, 50)]
    assert max(values) - min(values) < 1e-12
    assert values[0] == pytest.approx(math.cos(2 * theta2), abs=1e-12)


def test_zero_beam_survey_spin_two_departs():
    theta2 = 0.6
    rows = sp.zero_beam_survey([1, 2, 3, 4], 0.0, theta2)
    assert [r[0] for r in rows] == [2, 4]
    assert abs(rows[0][2]) < 1e-12
    legendre = (3 * math.cos(theta2) ** 2 - 1) / 2
    assert rows[1][1] == pytest.approx(2 * legendre ** 2 - 1, abs=1e-12)
    assert abs(rows[1][2]) > 1e-3


def test_zero_beam_needs_integral_spin():
    with pytest.raises(ValueError):
        sp.zero_beam_statistics(0.1, 0.2, sp.SpinValue(3))


def test_unsharp_lambda_squared_law(rng):
    for _ in range(50):
        spin = sp.SpinValue(int(rng.integers(1, 11)))
        a1, a2 = rng.uniform(0, math.pi, 2)
        lam = rng.uniform(0.05, 1.0)
        odd_mode = sp.ODD_MODES[int(rng.integers(0, 2))]
        sharp = sp.gp_beam_simulated_correlation(spin, a1, a2,
                                                 odd_mode=odd_mode)
        noisy = sp.gp_beam_simulated_correlation(spin, a1, a2, lam=lam,
                                                 odd_mode=odd_mode)
        assert noisy == pytest.approx(lam ** 2 * sharp, abs=1e-10)


def test_unsharp_parity_lambda_squared_law():
    spin = sp.SpinValue(4)
    sharp = sp.kb_simulated_correlation(spin, 0.3)
    assert sp.kb_simulated_correlation(spin, 0.3, lam=0.6) == pytest.approx(
        0.36 * sharp, abs=1e-10)


def test_invalid_sharpness():
    with pytest.raises(InvalidSharpnessError):
        sp.gp_beam_simulated_correlation(sp.SpinValue(1), 0, 1, lam=0)


def test_parity_closed_matches_simulation(rng):
    for _ in range(50):
        spin = sp.SpinValue(int(rng.integers(1, 21)))
        omega_dt = float(rng.uniform(0.05, math.pi - 0.05))
        x = spin.dim * omega_dt
        assert sp.kb_simulated_correlation(spin, omega_dt) == pytest.approx(
            sp.kb_correlation_closed(spin, x), abs=1e-10), (spin, omega_dt)


def test_parity_correlation_singularities():
    spin = sp.SpinValue(2)
    assert sp.kb_correlation_closed(spin, 0.0) == pytest.approx(1.0)
    assert sp.kb_correlation_closed(spin, 3 * math.pi) == pytest.approx(1.0)
    near = sp.kb_correlation_closed(spin, 1e-9)
    assert near == pytest.approx(1.0, abs=1e-12)


def test_kb_limit_values():
    assert sp.kb_K(0.0) == pytest.approx(2.0)
    assert sp.kb_K(math.pi) == pytest.approx(0.0, abs=1e-12)


def test_kb_plateau():
    x_star, k_star = sp.kb_optimum()
    assert x_star == pytest.approx(1.054, abs=0.002)
    assert k_star == pytest.approx(sp.KB_PLATEAU, abs=0.001)


def test_kb_finite_spin_approaches_plateau():
    spin = sp.SpinValue(200)
    x_star, _ = sp.kb_optimum()
    assert sp.kb_finite_k(spin, x_star) >= 2.47
    assert sp.kb_finite_k(spin, x_star, simulated=True) >= 2.47


def test_kb_spin_half_reaches_tsirelson():
    spin = sp.SpinValue(1)
    assert sp.kb_finite_k(spin, math.pi / 2) == pytest.approx(sp.TSIRELSON,
                                                             abs=1e-12)
    assert sp.kb_finite_k(spin, math.pi / 2, simulated=True) == pytest.approx(
        sp.TSIRELSON, abs=1e-10)


def test_thresholds():
    assert sp.sharpness_threshold(sp.TSIRELSON) == pytest.approx(
        2 ** -0.25, abs=1e-9)
    assert sp.sharpness_threshold(sp.KB_PLATEAU) == pytest.approx(0.8978,
                                                                  abs=1e-3)
    with pytest.raises(NoThresholdError):
        sp.sharpness_threshold(2.0)
