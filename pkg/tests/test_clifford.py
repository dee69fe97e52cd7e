import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarspinor.clifford import (
    I4,
    LorentzParams,
    basis_from_gammas,
    build_gamma_basis,
    closed_form_coefficients,
    exp_series,
    generator,
    lorentz_closed_form,
    lorentz_inverse,
    matrix_deviation,
    s_inv_ds_decompose,
    spinor_transform,
    vector_representation,
)

angles = st.floats(-2.0, 2.0, allow_nan=False)


def theta_from(vals):
    th = np.zeros((4, 4))
    th[np.triu_indices(4, 1)] = vals
    return th - th.T


# --- basis -------------------------------------------------------------------


def test_basis_matrices(basis):
    assert basis.convention == "chiral"
    g0 = basis.gamma[0]
    assert np.array_equal(g0 @ g0 + g0 @ g0, 2 * I4)
    assert abs(np.trace(basis.sigma[0, 1])) == 0
    assert np.allclose(basis.pi, np.diag([-1, -1, 1, 1]))
    assert basis.epsilon[0, 1, 2, 3] == 1 and basis.epsilon_upper[0, 1, 2, 3] == -1


def test_unknown_convention_rejected():
    with pytest.raises(ValueError):
        build_gamma_basis("dirac")


def test_identity_families_pass(basis):
    from polarspinor.clifford import verify_clifford_identities

    rep = verify_clifford_identities(basis, 1e-12)
    assert rep.passed
    assert {f.name for f in rep.families} == {"anticommutator", "generators", "duality", "chirality", "triple_product"}


def test_triple_product_012_by_hand(basis):
    # gamma_0 gamma_1 gamma_2 = -i pi eps_{012q} gamma^q (metric terms vanish); eps_0123 = 1
    gl = basis.gamma_lower
    assert np.allclose(gl[0] @ gl[1] @ gl[2], 1j * basis.pi @ basis.gamma[3])


def test_scaled_gamma_breaks_anticommutator(basis):
    from polarspinor.clifford import verify_clifford_identities

    g = basis.gamma.copy()
    g[1] *= 2
    rep = verify_clifford_identities(basis_from_gammas(g), 1e-12)
    fam = rep["anticommutator"]
    assert not fam.passed
    assert fam.deviation == pytest.approx(6.0)
    assert fam.worst_index == (1, 1)


def test_zero_tolerance_fails_only_by_rounding(basis):
    from polarspinor.clifford import verify_clifford_identities

    rep = verify_clifford_identities(basis, 0.0)
    assert max(f.deviation for f in rep.families) < 1e-14


# --- closed-form Lorentz transformations -------------------------------------------


def test_identity_element(basis):
    c, lam = lorentz_closed_form(LorentzParams(np.zeros((4, 4))), basis)
    assert (c.X, c.Y) == (1.0, 0.0) and not np.any(c.Z)
    assert np.allclose(lam, I4)
    assert np.allclose(lorentz_inverse(c, basis), I4)


def test_boost_matches_series(basis):
    p = LorentzParams.from_components(t03=0.5)
    _, lam = lorentz_closed_form(p, basis)
    assert np.max(np.abs(lam - exp_series(generator(p.theta, basis)))) < 1e-10
    c, _ = lorentz_closed_form(p, basis)
    assert np.max(np.abs(lorentz_inverse(c, basis) @ lam - I4)) < 1e-12


def test_full_rotation_is_minus_one(basis):
    _, lam = lorentz_closed_form(LorentzParams.from_components(t12=2 * np.pi), basis)
    assert np.allclose(lam, -I4, atol=1e-12)
    assert np.allclose(exp_series(generator(LorentzParams.from_components(t12=2 * np.pi).theta, basis)), -I4, atol=1e-12)


def test_null_rotation_degenerate_branch(basis):
    # theta_01 = theta_13 gives a = b = 0; the generator is nilpotent
    p = LorentzParams.from_components(t01=0.7, t13=0.7)
    c, lam = lorentz_closed_form(p, basis)
    assert abs(c.a) < 1e-15 and abs(c.b) < 1e-15
    gen = generator(p.theta, basis)
    assert np.allclose(lam, I4 + gen + gen @ gen / 2, atol=1e-14)


def test_invalid_params():
    with pytest.raises(ValueError):
        LorentzParams(np.ones((4, 4)))
    with pytest.raises(ValueError):
        LorentzParams(np.zeros((3, 3)))
    th = np.zeros((4, 4))
    th[0, 1], th[1, 0] = np.nan, np.nan
    with pytest.raises(ValueError):
        LorentzParams(th)


def test_inverse_rejects_non_group_coefficients(basis):
    c, _ = lorentz_closed_form(LorentzParams.from_components(t12=0.3), basis)
    bad = type(c)(c.a, c.b, c.x, c.y, 2 * c.X, c.Y, c.Z)
    with pytest.raises(ValueError):
        lorentz_inverse(bad, basis)


@settings(max_examples=200, deadline=None)
@given(st.lists(angles, min_size=6, max_size=6))
def test_closed_form_properties(vals):
    basis = build_gamma_basis()
    th = theta_from(vals)
    c, lam = lorentz_closed_form(LorentzParams(th), basis)
    series = exp_series(generator(th, basis))
    assert np.linalg.norm(lam - series) / np.linalg.norm(series) < 1e-9
    scale = max(1.0, c.X**2 + c.Y**2)
    assert abs(c.norm_residual()) < 1e-9 * scale
    assert abs(c.dual_residual(basis.epsilon)) < 1e-9 * scale
    assert matrix_deviation(lorentz_inverse(c, basis), np.linalg.inv(lam)) < 1e-9
    assert abs(abs(np.linalg.det(lam)) - 1) < 1e-9


def test_closed_form_tiny_pseudoscalar_invariant(basis):
    # b ~ 1e-7 with a > 0 cancels catastrophically in sqrt((rho - a) / 2)
    th = theta_from([1.0, 0.0, 2.0, 0.0, 0.0, 1.192092896e-07])
    _, lam = lorentz_closed_form(LorentzParams(th), basis)
    series = exp_series(generator(th, basis))
    assert np.linalg.norm(lam - series) / np.linalg.norm(series) < 1e-13


def test_coefficients_match_eps_default(basis):
    th = theta_from([0.1, -0.4, 0.2, 0.9, -0.3, 0.5])
    a = closed_form_coefficients(th)
    b = closed_form_coefficients(th, basis.epsilon)
    assert np.allclose(a.Z, b.Z)


# --- spinor transform and vector representation ------------------------------------


def test_pure_phases(basis):
    assert np.allclose(spinor_transform(LorentzParams(np.zeros((4, 4)), q=1.0, alpha=np.pi), basis), -I4)
    assert np.allclose(spinor_transform(LorentzParams(np.zeros((4, 4)), q=1.0, alpha=np.pi / 2), basis), 1j * I4)


def test_unit_determinant(basis):
    S = spinor_transform(LorentzParams.from_components(t03=1.0, q=1.0, alpha=0.3), basis)
    assert abs(abs(np.linalg.det(S)) - 1) < 1e-12


def test_vector_representation_basics(basis):
    assert np.allclose(vector_representation(I4, basis), np.eye(4))
    assert np.allclose(vector_representation(-I4, basis), np.eye(4))
    _, lam = lorentz_closed_form(LorentzParams.from_components(t03=0.5), basis)
    L = vector_representation(lam, basis)
    ch, sh = np.cosh(0.5), np.sinh(0.5)
    assert np.allclose(np.abs(L[np.ix_([0, 3], [0, 3])]), [[ch, sh], [sh, ch]])
    assert np.allclose(L[1:3, 1:3], np.eye(2))
    assert np.allclose(L[[1, 2]][:, [0, 3]], 0)


def test_vector_representation_rejects_singular(basis):
    with pytest.raises(ValueError):
        vector_representation(np.zeros((4, 4)), basis)


@settings(max_examples=100, deadline=None)
@given(st.lists(angles, min_size=12, max_size=12), st.floats(-3, 3), st.floats(-3, 3))
def test_homomorphism_and_phase_independence(vals, q, alpha):
    basis = build_gamma_basis()
    _, s1 = lorentz_closed_form(LorentzParams(theta_from(vals[:6])), basis)
    _, s2 = lorentz_closed_form(LorentzParams(theta_from(vals[6:])), basis)
    L1, L2 = vector_representation(s1, basis), vector_representation(s2, basis)
    assert matrix_deviation(vector_representation(s1 @ s2, basis), L1 @ L2) < 1e-9
    phased = spinor_transform(LorentzParams(theta_from(vals[:6]), q, alpha), basis)
    assert matrix_deviation(vector_representation(phased, basis), L1) < 1e-9
    eta = np.diag([1.0, -1, -1, -1])
    assert matrix_deviation(L1.T @ eta @ L1, eta) < 1e-9


# --- S^-1 dS decomposition ------------------------------------------------------------


def test_decompose_constant_path(basis):
    dz, dphase, res = s_inv_ds_decompose(lambda lam: I4, basis, 0.3)
    assert np.allclose(dz, 0) and dphase == pytest.approx(0) and res == pytest.approx(0)


def test_decompose_pure_phase(basis):
    dz, dphase, res = s_inv_ds_decompose(lambda lam: np.exp(1j * lam) * I4, basis, 0.3)
    assert np.allclose(dz, 0, atol=1e-8) and dphase == pytest.approx(1, abs=1e-7) and res < 1e-8


def test_decompose_one_parameter_subgroup(basis):
    from scipy.linalg import expm

    dz, _, res = s_inv_ds_decompose(lambda lam: expm(lam * basis.sigma[1, 2]), basis, 0.4, h=1e-4)
    assert dz[1, 2] == pytest.approx(1, abs=1e-8)
    assert res < 1e-8


def test_decompose_rejects_bad_step(basis):
    with pytest.raises(ValueError):
        s_inv_ds_decompose(lambda lam: I4, basis, 0.0, h=0)
