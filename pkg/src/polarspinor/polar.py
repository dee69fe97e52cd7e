"""Bilinears, classification and the polar parametrisation of spinors."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .clifford import ETA, I4, GammaBasis, LorentzParams, spinor_transform, vector_representation

REGULAR_CONSTANT = np.array([1, 0, 1, 0], dtype=complex)
SINGULAR_CONSTANT = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class BilinearSet:
    """Real bilinears of a spinor; vector indices are upper Lorentz indices."""

    scalar: float
    pseudoscalar: float
    vector: np.ndarray
    axial: np.ndarray
    tensor: np.ndarray
    max_imag: float = 0.0

    @property
    def density(self) -> float:
        """psi^dagger psi, which equals the time component of the vector."""
        return float(self.vector[0])


def dirac_adjoint(psi: np.ndarray, basis: GammaBasis) -> np.ndarray:
    return np.conj(psi) @ basis.gamma[0]


def bilinears(psi: np.ndarray, basis: GammaBasis) -> BilinearSet:
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (4,) or not np.all(np.isfinite(psi)):
        raise ValueError("spinor must be a finite 4-vector")
    bar = dirac_adjoint(psi, basis)
    scalar = bar @ psi
    pseudo = 1j * bar @ basis.pi @ psi
    vector = np.einsum("i,aij,j->a", bar, basis.gamma, psi)
    axial = np.einsum("i,aij,jk,k->a", bar, basis.gamma, basis.pi, psi)
    tensor = 2j * np.einsum("i,abij,j->ab", bar, basis.sigma_upper, psi)
    parts = [np.atleast_1d(x) for x in (scalar, pseudo, vector, axial, tensor.ravel())]
    imag = max(float(np.max(np.abs(p.imag))) for p in parts)
    return BilinearSet(
        scalar=float(scalar.real),
        pseudoscalar=float(pseudo.real),
        vector=vector.real.copy(),
        axial=axial.real.copy(),
        tensor=tensor.real.copy(),
        max_imag=imag,
    )


def minkowski_dot(x: np.ndarray, y: np.ndarray) -> float:
    return float(x @ ETA @ y)


class SpinorClass(enum.Enum):
    REGULAR = "regular"
    WEYL = "weyl"
    MAJORANA = "majorana"
    SINGULAR = "singular"

    @property
    def is_singular(self) -> bool:
        return self is not SpinorClass.REGULAR


def classify(b: BilinearSet, tol: float = 1e-9) -> SpinorClass:
    """Classify by the scalar/pseudoscalar pair, with thresholds relative to psi^dagger psi."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    scale = max(b.density, np.finfo(float).tiny)
    if b.scalar**2 + b.pseudoscalar**2 > (tol * scale) ** 2:
        return SpinorClass.REGULAR
    if np.max(np.abs(b.tensor)) <= tol * scale:
        return SpinorClass.WEYL
    if np.max(np.abs(b.axial)) <= tol * scale:
        return SpinorClass.MAJORANA
    return SpinorClass.SINGULAR


@dataclass(frozen=True)
class RegularPolarData:
    phi: float
    beta: float
    frame: np.ndarray  # spinor matrix L^-1

    def velocity_and_spin(self, basis: GammaBasis) -> tuple[np.ndarray, np.ndarray]:
        """u and s (upper indices): images of the time and third axes under the frame."""
        lam = vector_representation(self.frame, basis)
        return lam[:, 0], lam[:, 3]


@dataclass(frozen=True)
class SingularPolarData:
    alpha: float
    frame: np.ndarray = I4


def chiral_rotation(angle: float, basis: GammaBasis) -> np.ndarray:
    """exp(-i angle pi / 2); pi is diagonal in the chiral basis but stay generic."""
    return expm(-0.5j * angle * basis.pi)


def reconstruct_spinor(data: RegularPolarData | SingularPolarData, basis: GammaBasis) -> np.ndarray:
    if isinstance(data, RegularPolarData):
        return data.phi * chiral_rotation(data.beta, basis) @ data.frame @ REGULAR_CONSTANT
    half = data.alpha / 2
    # the constant column already carries the 1/sqrt(2)
    return (np.cos(half) * I4 - np.sin(half) * basis.pi) @ data.frame @ SINGULAR_CONSTANT


def singular_chiral_angle(b: BilinearSet) -> float:
    """alpha from axial = -sin(alpha) vector, using the time components."""
    if b.vector[0] <= 0:
        raise ValueError("vector bilinear has no positive time component")
    return float(np.arcsin(np.clip(-b.axial[0] / b.vector[0], -1.0, 1.0)))


def _boost_to(u: np.ndarray, basis: GammaBasis) -> np.ndarray:
    spatial = u[1:]
    norm = np.linalg.norm(spatial)
    if norm < 1e-15:
        return I4.copy()
    rapidity = np.arcsinh(norm)
    th = np.zeros((4, 4))
    th[0, 1:] = rapidity * spatial / norm
    th[1:, 0] = -th[0, 1:]
    return spinor_transform(LorentzParams(th), basis)


def _rotate_axis3_to(n: np.ndarray, basis: GammaBasis) -> np.ndarray:
    """Spinor rotation whose vector image sends e_3 to the spatial unit vector n."""
    n = n / np.linalg.norm(n)
    cos = np.clip(n[2], -1.0, 1.0)
    perp = n - cos * np.array([0.0, 0.0, 1.0])
    if np.linalg.norm(perp) < 1e-14:
        if cos > 0:
            return I4.copy()
        perp = np.array([1.0, 0.0, 0.0])
    perp = perp / np.linalg.norm(perp)
    angle = np.arccos(cos)
    th = np.zeros((4, 4))
    # theta_ij > 0 turns e_i towards e_j
    th[3, 1:] = angle * perp
    th[1:, 3] = -angle * perp
    return spinor_transform(LorentzParams(th), basis)


def polar_decompose_regular(psi: np.ndarray, basis: GammaBasis, tol: float = 1e-9) -> RegularPolarData:
    """Invert psi = phi exp(-i beta pi / 2) L^-1 (1,0,1,0).

    L^-1 is a boost taking rest to u, then a rotation taking the third axis
    to the rest-frame spin, then a rotation about the third axis that absorbs
    the remaining overall phase.
    """
    psi = np.asarray(psi, dtype=complex)
    b = bilinears(psi, basis)
    if classify(b, tol) is not SpinorClass.REGULAR:
        raise ValueError("spinor is singular; the regular polar form does not apply")
    two_phi2 = np.hypot(b.scalar, b.pseudoscalar)
    phi = np.sqrt(two_phi2 / 2)
    beta = float(np.arctan2(b.pseudoscalar, b.scalar))
    u, s = b.vector / two_phi2, b.axial / two_phi2

    boost = _boost_to(u, basis)
    s_rest = np.linalg.solve(vector_representation(boost, basis), s)
    frame = boost @ _rotate_axis3_to(s_rest[1:], basis)

    target = chiral_rotation(-beta, basis) @ psi / phi
    guess = frame @ REGULAR_CONSTANT
    phase = np.vdot(guess, target) / np.vdot(guess, guess)
    chi = -2.0 * np.angle(phase)
    third = spinor_transform(LorentzParams.from_components(t12=chi), basis)
    return RegularPolarData(phi=float(phi), beta=beta, frame=frame @ third)


# --- covariant derivative in polar variables --------------------------------


def covariant_derivative_polar(
    psi: np.ndarray,
    R: np.ndarray,
    P: np.ndarray,
    basis: GammaBasis,
    *,
    kind: str = "regular",
    d_beta: np.ndarray | None = None,
    d_ln_phi: np.ndarray | None = None,
    alpha: float = 0.0,
    d_alpha: np.ndarray | None = None,
    point: np.ndarray | None = None,
) -> np.ndarray:
    """Covariant derivative of a polar spinor, one row per derivative index.

    ``R[i, j, mu]`` carries lower Lorentz indices i, j; ``P[mu]`` and the
    gradients share the derivative index mu. ``kind`` selects the regular,
    singular, Weyl or Majorana decomposition. If a coordinate ``point``
    (t, r, theta, phi) is supplied it is checked against the polar axis.
    """
    if point is not None:
        _check_coordinates(point)
    psi = np.asarray(psi, dtype=complex)
    R = np.asarray(R, dtype=float)
    P = np.asarray(P, dtype=float)
    n = R.shape[2]
    zeros = np.zeros(n)
    if kind == "majorana" and np.any(P != 0):
        raise ValueError("Majorana spinors admit no gauge momentum (P must vanish)")
    out = np.empty((n, 4), dtype=complex)
    for mu in range(n):
        op = -0.5 * basis.sigma_contract(R[:, :, mu]) - 1j * P[mu] * I4
        if kind == "regular":
            db = zeros if d_beta is None else d_beta
            dl = zeros if d_ln_phi is None else d_ln_phi
            op = op - 0.5j * db[mu] * basis.pi + dl[mu] * I4
        elif kind == "singular":
            da = zeros if d_alpha is None else d_alpha
            op = op - 0.5 * (np.tan(alpha) * I4 + basis.pi / np.cos(alpha)) * da[mu]
        elif kind not in ("weyl", "majorana"):
            raise ValueError(f"unknown spinor kind {kind!r}")
        out[mu] = op @ psi
    return out


def _check_coordinates(point) -> None:
    r, theta = float(point[1]), float(point[2])
    if r <= 0 or abs(np.sin(theta)) < 1e-12:
        raise ValueError(f"point (r={r}, theta={theta}) lies on a coordinate singularity")


@dataclass(frozen=True)
class FierzReport:
    passed: bool
    deviations: dict


def fierz_check(b: BilinearSet, tol: float = 1e-10, kind: SpinorClass | None = None) -> FierzReport:
    """Normalisation identities of the velocity/spin pair, or light-likeness if singular."""
    kind = classify(b) if kind is None else kind
    if kind is SpinorClass.REGULAR:
        n = np.hypot(b.scalar, b.pseudoscalar)
        u, s = b.vector / n, b.axial / n
        dev = {
            "u.u-1": minkowski_dot(u, u) - 1.0,
            "s.s+1": minkowski_dot(s, s) + 1.0,
            "u.s": minkowski_dot(u, s),
        }
    else:
        scale = max(b.density, np.finfo(float).tiny)
        dev = {
            "U.U": minkowski_dot(b.vector, b.vector) / scale**2,
            "scalar": b.scalar / scale,
            "pseudoscalar": b.pseudoscalar / scale,
        }
    dev = {k: float(abs(v)) for k, v in dev.items()}
    return FierzReport(all(v <= tol for v in dev.values()), dev)
