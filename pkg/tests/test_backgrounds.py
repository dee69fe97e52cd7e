import numpy as np
import pytest

from polarspinor.backgrounds import (
    Background,
    ProfilePair,
    consistency_relations_check,
    example1_background,
    example2_background,
    reduced_components,
    reduced_from_tensor,
    transport_check,
)
from polarspinor.geometry import Grid
from polarspinor.profiles import Profile, random_profile
from polarspinor.solutions import solution_spec

T, R_, TH, PH = range(4)
G16 = Grid(16, 16)


def test_validation():
    with pytest.raises(ValueError):
        Background(3, ProfilePair.trivial())
    with pytest.raises(ValueError):
        Background(1, ProfilePair.trivial(), b=1.0)
    with pytest.raises(ValueError):
        Background(2, ProfilePair.trivial(), winding=1.0)
    bg = example1_background(ProfilePair.trivial(), 0.0)
    with pytest.raises(ValueError):
        bg.null_vector(1, 1)
    with pytest.raises(ValueError):
        bg.tensorial_connection(0.0, 1.0)


def test_example1_trivial_profiles_leave_geometric_block():
    # without the azimuthal winding the block relations keep R_{r phi phi} = -r sin^2
    bg = example1_background(ProfilePair.trivial(), 0.0)
    R = bg.tensorial_connection(2.0, np.pi / 2)
    assert R[R_, PH, PH] == pytest.approx(-2.0)
    assert R[TH, PH, PH] == pytest.approx(0.0, abs=1e-15)


def test_example1_trivialised_by_winding():
    bg = example1_background(ProfilePair.trivial(), 0.0, winding=1.0)
    worst = max(np.max(np.abs(bg.tensorial_connection(r, th))) for r, th in G16.points())
    assert worst < 1e-14
    assert np.allclose(bg.spin_connection(1.3, 0.7), bg.goldstone_gradient())


def test_example2_cannot_be_trivialised():
    bg = example2_background(ProfilePair.trivial(), 0.0)
    R = bg.tensorial_connection(1.5, 1.1)
    assert abs(R[R_, PH, PH]) > 0.1 and abs(R[TH, PH, PH]) > 0.1


def test_example2_r_phi_phi_is_universal(rng):
    for _ in range(10):
        bg = example2_background(ProfilePair(random_profile(rng), random_profile(rng)), rng.uniform(-2, 2))
        assert bg.tensorial_connection(2.0, np.pi / 2)[R_, PH, PH] == pytest.approx(-2.0, abs=1e-14)


def test_example2_k_block_value():
    bg = solution_spec(5, m=1.0, k=0.5).background()
    assert bg.profiles.a(1.0, np.pi / 2) == pytest.approx(-2.0)
    assert bg.tensorial_connection(1.0, np.pi / 2)[R_, T, T] == pytest.approx(-0.5 * np.exp(-2.0))


@pytest.mark.parametrize("sid", [1, 2, 3, 4, 5, 6, 7])
def test_consistency_on_solution_profiles(sid):
    rep = consistency_relations_check(solution_spec(sid, k=0.5).background(), G16, 1e-9)
    assert rep.passed, [(r.name, r.max_deviation) for r in rep.relations if not r.passed]
    assert all(r.skipped == 0 for r in rep.relations)
    if sid not in (5, 6):
        # four blocks of four, plus the phi-component companions
        names = {r.name for r in rep.relations}
        assert {f"dA{i}" for i in range(1, 5)} <= names
        assert sum(n.startswith("block_") for n in names) == 12


def test_consistency_quotient_form_skips_infinite_tangent():
    rep = consistency_relations_check(solution_spec(1).background(), Grid(4, 4), form="quotient")
    assert any(r.skipped > 0 for r in rep.relations)
    assert all(r.evaluated > 0 or not r.passed for r in rep.relations)
    with pytest.raises(ValueError):
        consistency_relations_check(solution_spec(1).background(), Grid(4, 4), form="other")


def test_consistency_detects_corruption():
    bg = solution_spec(1).background()

    def corrupted(r, th):
        R = bg.tensorial_connection(r, th).copy()
        R[T, PH, TH] += 0.01
        R[PH, T, TH] -= 0.01
        return R

    rep = consistency_relations_check(bg, Grid(6, 6), tensorial=corrupted)
    assert not rep["dA1"].passed and rep["dA1"].max_deviation == pytest.approx(0.01)
    assert all(r.passed for r in rep.relations if r.name != "dA1")


def test_reduced_components_examples():
    bg = example1_background(ProfilePair.trivial(), 0.0)
    red = reduced_components(bg, (2.0, np.pi / 2))
    assert red.R_vec[1:3] == pytest.approx([0.5, 0.0], abs=1e-15)
    bg = example1_background(ProfilePair(Profile(0.4), Profile("-pi/2")), 0.0)
    assert reduced_components(bg, np.array([0.0, 1.3, 0.8, 0.0])).B_vec[1] == pytest.approx(0.0)


@pytest.mark.parametrize("example", [1, 2])
def test_reduced_closed_form_matches_contraction(example, rng):
    for _ in range(3):
        pair = ProfilePair(random_profile(rng), random_profile(rng))
        c = rng.uniform(-1, 1)
        bg = example1_background(pair, c) if example == 1 else example2_background(pair, c)
        for r, th in [(0.6, 0.5), (2.5, 2.0)]:
            closed = bg.reduced_components(r, th)
            contracted = reduced_from_tensor(bg.tensorial_connection_lorentz(r, th), bg.frame(r, th), bg.coframe(r, th))
            assert np.allclose(closed.R_vec, contracted.R_vec, atol=1e-10)
            assert np.allclose(closed.B_vec, contracted.B_vec, atol=1e-10)


@pytest.mark.parametrize("sid", [1, 5])
def test_transport_on_solution_profiles(sid):
    rep = transport_check(solution_spec(sid, k=0.5).background(), G16, h=1e-3, tol=1e-6)
    assert rep.passed, rep.deviations


def test_transport_constant_velocity_patch():
    bg = example1_background(ProfilePair.trivial(), 0.0, winding=1.0)
    rep = transport_check(bg, Grid(4, 4))
    assert rep.deviations["velocity"] < 1e-12


def test_transport_detects_wrong_connection():
    bg = solution_spec(1).background()
    rep = transport_check(bg, Grid(4, 4), tensorial=lambda r, th: np.zeros((4, 4, 4)))
    assert not rep.passed
