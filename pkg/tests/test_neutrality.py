import numpy as np
import pytest

from polarspinor.backgrounds import transport_check
from polarspinor.clifford import I4, LorentzParams, spinor_transform
from polarspinor.geometry import Grid, lorentz_to_coordinate
from polarspinor.neutrality import (
    absorb_momentum,
    conjugation_identity_deviation,
    elko_pair,
    elko_relations_check,
    majorana_momentum_obstruction,
    plane_wave_check,
)
from polarspinor.polar import RegularPolarData
from polarspinor.solutions import solution_spec

U_REST = np.array([1.0, 0, 0, 0])
S_REST = np.array([0, 0, 0, 1.0])


def random_R(rng):
    R = rng.normal(size=(4, 4, 4))
    return R - R.transpose(1, 0, 2)


def test_plane_wave_constant(basis):
    rep = plane_wave_check(RegularPolarData(1.3, 0.4, I4), np.zeros((4, 4, 4)), basis)
    assert rep.is_plane_wave and rep.injective and not rep.violations
    assert set(rep.forced_constraints) == {"R=0", "d_beta=0", "d_phi=0"}


def test_plane_wave_rejects_connection(basis):
    R = np.zeros((4, 4, 4))
    R[1, 2, 0], R[2, 1, 0] = 0.3, -0.3
    rep = plane_wave_check(RegularPolarData(1.0, 0.0, I4), R, basis)
    assert not rep.is_plane_wave and rep.violations == ("R[12,0]",)


def test_plane_wave_solution1(basis):
    bg = solution_spec(1).background()
    frame = bg.frame(1.5, 1.0)
    R = np.einsum("ijm,km->ijk", bg.tensorial_connection_lorentz(1.5, 1.0), frame)
    rep = plane_wave_check(RegularPolarData(1.0, 0.0, I4), R, basis)
    assert not rep.is_plane_wave and rep.violations


def test_plane_wave_boosted_spinor_still_injective(basis):
    S = spinor_transform(LorentzParams.from_components(t01=0.8, t23=0.3), basis)
    rep = plane_wave_check(RegularPolarData(2.0, 1.0, S), np.zeros((4, 4, 4)), basis, d_beta=[0, 0.1, 0, 0])
    assert rep.injective and not rep.is_plane_wave and rep.violations == ("d_beta[1]",)


def test_absorb_momentum(rng):
    R = random_R(rng)
    same, P0 = absorb_momentum(R, np.zeros(4), U_REST, S_REST)
    assert np.allclose(same, R) and not np.any(P0)
    m = 0.9
    shifted, _ = absorb_momentum(np.zeros((4, 4, 4)), [m, 0, 0, 0], U_REST, S_REST)
    assert shifted[1, 2, 0] == pytest.approx(-2 * m) and shifted[2, 1, 0] == pytest.approx(2 * m)
    assert np.count_nonzero(shifted) == 2
    with pytest.raises(ValueError):
        absorb_momentum(R, np.zeros(4), np.zeros(4), S_REST)


def test_absorbed_momentum_leaves_transport_unchanged():
    spec = solution_spec(1)
    bg = spec.background()

    def absorbed(r, th):
        R, _ = absorb_momentum(bg.tensorial_connection_lorentz(r, th), [spec.m, 0, 0, 0], U_REST, S_REST)
        return lorentz_to_coordinate(R, bg.coframe(r, th))

    grid = Grid(6, 6)
    before = transport_check(bg, grid).deviations
    after = transport_check(bg, grid, tensorial=absorbed).deviations
    assert all(abs(after[k] - before[k]) < 1e-10 for k in before)


def test_conjugation_identity(basis):
    assert conjugation_identity_deviation(basis) == 0.0


def test_majorana_obstruction(basis, rng):
    R = random_R(rng)
    rep = majorana_momentum_obstruction(R, np.zeros(4), basis)
    assert rep.consistent and rep.forced_P == 0 and rep.deviation < 1e-12
    rep = majorana_momentum_obstruction(R, [0.5, 0, 0, 0], basis)
    assert not rep.consistent and rep.deviation == pytest.approx(1.0)  # 2 |P_t| |psi|, |psi| = 1


def test_elko_relations(basis):
    for m in (1.0, 0.0, 2.5):
        rep = elko_relations_check(basis, m)
        assert rep.passed and rep.branch == "lambda_plus"
    with pytest.raises(ValueError):
        elko_relations_check(basis, -1.0)


def test_elko_pair_is_self_conjugate_with_dual_helicity(basis):
    lp, lm = elko_pair(basis)
    for lam in (lp, lm):
        assert np.allclose(basis.charge_conjugate(lam), lam)
    # upper and lower Weyl blocks have opposite helicity along the third axis
    s3 = np.diag([1, -1])
    up, down = lp[:2], lp[2:]
    assert np.vdot(up, s3 @ up).real * np.vdot(down, s3 @ down).real < 0


def test_elko_flipped_branch(basis):
    rep = elko_relations_check(basis, 1.0, flipped=True)
    assert rep.eigenvalue == pytest.approx(-1j) and rep.branch == "lambda_minus"
    assert rep.deviations["gamma013"] > 1
