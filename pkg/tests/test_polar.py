import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarspinor.clifford import I4, LorentzParams, build_gamma_basis, spinor_transform, vector_representation
from polarspinor.polar import (
    REGULAR_CONSTANT,
    SINGULAR_CONSTANT,
    RegularPolarData,
    SingularPolarData,
    SpinorClass,
    bilinears,
    chiral_rotation,
    classify,
    covariant_derivative_polar,
    fierz_check,
    minkowski_dot,
    polar_decompose_regular,
    reconstruct_spinor,
    singular_chiral_angle,
)


def test_regular_constant_bilinears(basis):
    b = bilinears(REGULAR_CONSTANT, basis)
    assert b.scalar == pytest.approx(2) and b.pseudoscalar == pytest.approx(0)
    assert classify(b) is SpinorClass.REGULAR


def test_zero_spinor(basis):
    b = bilinears(np.zeros(4), basis)
    assert b.scalar == 0 and not np.any(b.vector) and not np.any(b.tensor)


def test_singular_constant(basis):
    b = bilinears(SINGULAR_CONSTANT, basis)
    assert abs(b.scalar) < 1e-15 and abs(b.pseudoscalar) < 1e-15
    assert minkowski_dot(b.vector, b.vector) == pytest.approx(0, abs=1e-15)
    assert classify(b) is SpinorClass.MAJORANA
    assert np.allclose(basis.charge_conjugate(SINGULAR_CONSTANT), SINGULAR_CONSTANT)


def test_single_chirality_is_weyl(basis):
    b = bilinears(np.array([1, 0, 0, 0], complex), basis)
    assert np.allclose(b.tensor, 0)
    assert classify(b) is SpinorClass.WEYL and classify(b).is_singular


def test_bilinears_reject_bad_input(basis):
    with pytest.raises(ValueError):
        bilinears(np.ones(3), basis)
    with pytest.raises(ValueError):
        bilinears(np.array([np.nan, 0, 0, 0]), basis)
    with pytest.raises(ValueError):
        classify(bilinears(REGULAR_CONSTANT, basis), tol=0)


def test_decompose_constant(basis):
    d = polar_decompose_regular(REGULAR_CONSTANT, basis)
    assert d.phi == pytest.approx(1) and d.beta == pytest.approx(0)
    assert np.allclose(reconstruct_spinor(d, basis), REGULAR_CONSTANT)


def test_decompose_chiral_rotated(basis):
    psi = 2 * chiral_rotation(np.pi / 2, basis) @ REGULAR_CONSTANT
    d = polar_decompose_regular(psi, basis)
    assert d.phi == pytest.approx(2) and d.beta == pytest.approx(np.pi / 2)


def test_decompose_boosted(basis):
    S = spinor_transform(LorentzParams.from_components(t03=0.5), basis)
    d = polar_decompose_regular(S @ REGULAR_CONSTANT, basis)
    assert d.phi == pytest.approx(1) and d.beta == pytest.approx(0, abs=1e-12)
    u_expected = vector_representation(S, basis)[:, 0]
    u, _ = d.velocity_and_spin(basis)
    assert np.allclose(u, u_expected)


def test_decompose_rejects_singular(basis):
    with pytest.raises(ValueError):
        polar_decompose_regular(SINGULAR_CONSTANT, basis)


def test_reconstruct_examples(basis):
    assert np.allclose(reconstruct_spinor(RegularPolarData(1, 0, I4), basis), REGULAR_CONSTANT)
    psi = reconstruct_spinor(RegularPolarData(3, 0.2, I4), basis)
    # pseudoscalar = 2 phi^2 sin(beta), computed by hand: 18 sin 0.2
    assert bilinears(psi, basis).pseudoscalar == pytest.approx(18 * np.sin(0.2))
    assert bilinears(psi, basis).pseudoscalar == pytest.approx(3.5760, abs=1e-4)
    assert np.allclose(reconstruct_spinor(SingularPolarData(0.0), basis), SINGULAR_CONSTANT)


def test_singular_angle_round_trip(basis):
    for alpha in (-1.2, 0.0, 0.7):
        b = bilinears(reconstruct_spinor(SingularPolarData(alpha), basis), basis)
        assert singular_chiral_angle(b) == pytest.approx(alpha)


@settings(max_examples=150, deadline=None)
@given(
    st.floats(0.1, 5.0),
    st.floats(-3.0, 3.0),
    st.lists(st.floats(-1.5, 1.5), min_size=6, max_size=6),
)
def test_round_trip_and_fierz(phi, beta, vals):
    basis = build_gamma_basis()
    th = np.zeros((4, 4))
    th[np.triu_indices(4, 1)] = vals
    S = spinor_transform(LorentzParams(th - th.T), basis)
    psi = reconstruct_spinor(RegularPolarData(phi, beta, S), basis)
    d = polar_decompose_regular(psi, basis)
    scale = max(1.0, np.max(np.abs(psi)))
    assert np.max(np.abs(reconstruct_spinor(d, basis) - psi)) / scale < 1e-9
    assert d.phi == pytest.approx(phi, rel=1e-9)
    assert fierz_check(bilinears(psi, basis), 1e-8).passed


def test_fierz_singular_and_corrupted(basis):
    b = bilinears(SINGULAR_CONSTANT, basis)
    rep = fierz_check(b)
    assert rep.passed and rep.deviations["U.U"] < 1e-30
    psi = spinor_transform(LorentzParams.from_components(t01=0.4), basis) @ REGULAR_CONSTANT
    good = bilinears(psi, basis)
    vec = good.vector.copy()
    vec[0] += 0.1
    bad = type(good)(good.scalar, good.pseudoscalar, vec, good.axial, good.tensor)
    rep = fierz_check(bad)
    assert not rep.passed and rep.deviations["u.u-1"] > 0.01


def test_covariant_derivative_cases(basis):
    zeros = np.zeros((4, 4, 4))
    psi = REGULAR_CONSTANT
    assert np.allclose(covariant_derivative_polar(psi, zeros, np.zeros(4), basis), 0)
    m = 1.3
    nab = covariant_derivative_polar(psi, zeros, np.array([m, 0, 0, 0]), basis)
    assert np.allclose(nab[0], -1j * m * psi) and np.allclose(nab[1:], 0)
    with pytest.raises(ValueError):
        covariant_derivative_polar(SINGULAR_CONSTANT, zeros, np.array([0.5, 0, 0, 0]), basis, kind="majorana")
    with pytest.raises(ValueError):
        covariant_derivative_polar(psi, zeros, np.zeros(4), basis, point=np.array([0, 1.0, 0.0, 0]))
    with pytest.raises(ValueError):
        covariant_derivative_polar(psi, zeros, np.zeros(4), basis, kind="bogus")
