"""Algebraic checks on plane waves, momentum absorption, Majorana neutrality and ELKO spinors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import I4, GammaBasis
from .field_equations import EPS
from .polar import SINGULAR_CONSTANT, RegularPolarData, reconstruct_spinor

_PAIRS = [(i, j) for i in range(4) for j in range(i + 1, 4)]


@dataclass(frozen=True)
class PlaneWaveReport:
    is_plane_wave: bool
    injective: bool
    forced_constraints: tuple[str, ...]
    violations: tuple[str, ...]
    max_deviation: float


def _realify(v: np.ndarray) -> np.ndarray:
    return np.concatenate([v.real, v.imag])


def plane_wave_check(
    data: RegularPolarData,
    R: np.ndarray,
    basis: GammaBasis,
    d_beta=None,
    d_ln_phi=None,
    tol: float = 1e-12,
) -> PlaneWaveReport:
    """Test i nabla_mu psi = P_mu psi for a regular spinor.

    Subtracting the momentum term, the condition reads
    (-i d_mu beta pi / 2 + d_mu ln phi - R_{ij mu} sigma^ij / 2) psi = 0 for
    every mu. The eight operators involved map to linearly independent
    spinors (checked by rank), so the condition holds only if R, d beta and
    d ln phi all vanish; the nonzero ones are listed as violations.
    """
    psi = reconstruct_spinor(data, basis)
    R = np.asarray(R, dtype=float)
    n = R.shape[2]
    db = np.zeros(n) if d_beta is None else np.asarray(d_beta, dtype=float)
    dl = np.zeros(n) if d_ln_phi is None else np.asarray(d_ln_phi, dtype=float)

    ops = [-0.5j * basis.pi, I4] + [-basis.sigma_upper[i, j] for i, j in _PAIRS]
    A = np.stack([_realify(op @ psi) for op in ops], axis=1)
    injective = np.linalg.matrix_rank(A, tol=1e-9) == len(ops)

    dev, violations = 0.0, []
    for mu in range(n):
        coeffs = np.array([db[mu], dl[mu]] + [R[i, j, mu] for i, j in _PAIRS])
        dev = max(dev, float(np.max(np.abs(A @ coeffs))))
        if abs(db[mu]) > tol:
            violations.append(f"d_beta[{mu}]")
        if abs(dl[mu]) > tol:
            violations.append(f"d_ln_phi[{mu}]")
        violations += [f"R[{i}{j},{mu}]" for i, j in _PAIRS if abs(R[i, j, mu]) > tol]
    forced = ("R=0", "d_beta=0", "d_phi=0") if injective else ()
    return PlaneWaveReport(dev <= tol, bool(injective), forced, tuple(violations), dev)


def absorb_momentum(R: np.ndarray, P, u: np.ndarray, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Move the gauge momentum into the tensorial connection.

    ``R[i, j, mu]`` has a lowered Lorentz pair; ``u`` and ``s`` are upper
    unit vectors (u.u = 1, s.s = -1). Returns (R', 0) with
    R'_{ij mu} = R_{ij mu} - 2 P_mu u^a s^b eps_{abij}.
    """
    u, s = np.asarray(u, dtype=float), np.asarray(s, dtype=float)
    if u.shape != (4,) or s.shape != (4,) or np.allclose(u, 0) or np.allclose(s, 0):
        raise ValueError("absorbing the momentum needs the velocity and spin of a regular spinor")
    P = np.asarray(P, dtype=float)
    shift = -2 * np.einsum("m,a,b,abij->ijm", P, u, s, EPS)
    return np.asarray(R, dtype=float) + shift, np.zeros_like(P)


@dataclass(frozen=True)
class ObstructionReport:
    consistent: bool
    forced_P: float
    deviation: float
    conjugation_identity: float


def conjugation_identity_deviation(basis: GammaBasis) -> float:
    """max |gamma^2 (gamma^a)* gamma^2 - gamma^a| over a and entries."""
    g2 = basis.gamma[2]
    return float(max(np.max(np.abs(g2 @ np.conj(g) @ g2 - g)) for g in basis.gamma))


def majorana_momentum_obstruction(R: np.ndarray, P, basis: GammaBasis, tol: float = 1e-12) -> ObstructionReport:
    """Compare the derivative of a Majorana spinor with the conjugate of the derivative.

    With psi self-conjugate, nabla psi = (-R sigma / 2 - i P) psi while
    conjugating the same expression gives (-R sigma / 2 + i P) psi; the two
    agree only when P = 0, the gap being 2 |P_mu| |psi|.
    """
    ident = conjugation_identity_deviation(basis)
    if ident > 1e-12:
        raise ValueError("basis violates gamma^2 gamma^a* gamma^2 = gamma^a")
    psi = SINGULAR_CONSTANT
    if np.max(np.abs(basis.charge_conjugate(psi) - psi)) > 1e-12:
        raise ValueError("reference spinor is not self-conjugate in this basis")
    R = np.asarray(R, dtype=float)
    P = np.asarray(P, dtype=float)
    dev = 0.0
    for mu in range(R.shape[2]):
        direct = (-0.5 * basis.sigma_contract(R[:, :, mu]) - 1j * P[mu] * I4) @ psi
        conjugated = basis.charge_conjugate(direct)
        dev = max(dev, float(np.linalg.norm(direct - conjugated)))
    return ObstructionReport(dev <= tol, 0.0, dev, ident)


# --- ELKO --------------------------------------------------------------------


def elko_spinor(basis: GammaBasis, flipped: bool = False) -> np.ndarray:
    """Self-conjugate spinor with dual helicity built on the third-axis helicity eigenspinor.

    The lower block is chi = (1, 0) and the upper block zeta sigma_2 chi*,
    dressed with a phase so that i gamma^2 lambda* = lambda. ``flipped``
    takes zeta = -1, which flips the gamma^0 gamma^1 gamma^3 eigenvalue.
    """
    chi = np.array([1.0, 0.0], dtype=complex)
    s2 = np.array([[0, -1j], [1j, 0]])
    zeta, phase = (-1.0, np.exp(-0.25j * np.pi)) if flipped else (1.0, np.exp(0.25j * np.pi))
    lam = phase * np.concatenate([zeta * s2 @ np.conj(chi), chi])
    if np.max(np.abs(basis.charge_conjugate(lam) - lam)) > 1e-12:
        raise ValueError("constructed spinor is not self-conjugate in this basis")
    return lam


def elko_pair(basis: GammaBasis, flipped: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """(lambda_+, lambda_-) with lambda_- = -i gamma^0 lambda_+."""
    lp = elko_spinor(basis, flipped)
    return lp, -1j * basis.gamma[0] @ lp


@dataclass(frozen=True)
class ElkoReport:
    deviations: dict
    eigenvalue: complex
    branch: str
    tol: float

    @property
    def passed(self) -> bool:
        return all(v <= self.tol for v in self.deviations.values())


def elko_relations_check(basis: GammaBasis, m: float, tol: float = 1e-12, flipped: bool = False) -> ElkoReport:
    """Entrywise check of the three gamma relations and of the mass eigen-identity.

    The last relation sets R_130 = 2m (all other components zero) in the
    Majorana covariant derivative, which turns i gamma^mu nabla_mu lambda =
    m lambda into an identity for both members of the pair.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    g = basis.gamma
    lp, lm = elko_pair(basis, flipped)
    T = g[0] @ g[1] @ g[3]
    eig = complex(np.vdot(lp, T @ lp) / np.vdot(lp, lp))
    R = np.zeros((4, 4, 4))
    R[1, 3, 0], R[3, 1, 0] = 2 * m, -2 * m

    def dirac(lam):
        nab0 = -0.5 * basis.sigma_contract(R[:, :, 0]) @ lam
        return 1j * g[0] @ nab0 - m * lam

    dev = {
        "gamma0": float(np.max(np.abs(g[0] @ lp - 1j * lm))),
        "gamma13": float(np.max(np.abs(g[1] @ g[3] @ lp + lm))),
        "gamma013": float(np.max(np.abs(T @ lp - 1j * lp))),
        "mass_plus": float(np.max(np.abs(dirac(lp)))),
        "mass_minus": float(np.max(np.abs(dirac(lm)))),
    }
    branch = "lambda_plus" if np.isclose(eig, 1j) else ("lambda_minus" if np.isclose(eig, -1j) else "none")
    return ElkoReport(dev, eig, branch, tol)
