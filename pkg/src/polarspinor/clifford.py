"""Clifford algebra in a fixed chiral basis and closed-form Lorentz transformations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

ETA = np.diag([1.0, -1.0, -1.0, -1.0])
I4 = np.eye(4, dtype=complex)

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def levi_civita() -> np.ndarray:
    """Rank-4 symbol with all indices down and eps[0,1,2,3] = +1."""
    eps = np.zeros((4, 4, 4, 4))
    for perm in itertools.permutations(range(4)):
        inversions = sum(perm[i] > perm[j] for i in range(4) for j in range(i + 1, 4))
        eps[perm] = -1.0 if inversions % 2 else 1.0
    return eps


@dataclass(frozen=True)
class GammaBasis:
    """Dirac matrices and derived generators.

    ``gamma[a]`` holds the upper-index matrices gamma^a, ``sigma[a, b]`` the
    lower-index generators sigma_ab = [gamma_a, gamma_b]/4, and ``epsilon`` the
    all-lower Levi-Civita symbol (eps_0123 = +1, hence eps^0123 = -1).
    """

    gamma: np.ndarray
    sigma: np.ndarray
    pi: np.ndarray
    eta: np.ndarray = field(default_factory=lambda: ETA.copy())
    epsilon: np.ndarray = field(default_factory=levi_civita)
    convention: str = "chiral"

    @property
    def gamma_lower(self) -> np.ndarray:
        return np.einsum("ab,bij->aij", self.eta, self.gamma)

    @property
    def sigma_upper(self) -> np.ndarray:
        return np.einsum("ac,bd,cdij->abij", self.eta, self.eta, self.sigma)

    @property
    def epsilon_upper(self) -> np.ndarray:
        return -self.epsilon

    def slash(self, v_lower: np.ndarray) -> np.ndarray:
        """gamma^a v_a for a vector with lower Lorentz index."""
        return np.einsum("a,aij->ij", v_lower, self.gamma)

    def sigma_contract(self, w_lower: np.ndarray) -> np.ndarray:
        """w_ab sigma^ab for an antisymmetric array with lower indices."""
        return np.einsum("ab,abij->ij", w_lower, self.sigma_upper)

    def charge_conjugate(self, psi: np.ndarray) -> np.ndarray:
        """i gamma^2 psi*, under which the Majorana constant is self-conjugate."""
        return 1j * self.gamma[2] @ np.conj(psi)


def build_gamma_basis(convention: str = "chiral") -> GammaBasis:
    if convention != "chiral":
        raise ValueError(f"unsupported gamma convention {convention!r}; only 'chiral' is available")
    zero, one = np.zeros((2, 2), dtype=complex), np.eye(2, dtype=complex)
    gamma = np.empty((4, 4, 4), dtype=complex)
    gamma[0] = np.block([[zero, one], [one, zero]])
    for k, s in enumerate(_PAULI, start=1):
        gamma[k] = np.block([[zero, s], [-s, zero]])
    return basis_from_gammas(gamma, convention)


def basis_from_gammas(gamma: np.ndarray, convention: str = "custom") -> GammaBasis:
    """Derive sigma and pi from a given set of upper-index gamma matrices.

    Useful for checking deliberately broken bases; no validation happens here.
    """
    gamma = np.asarray(gamma, dtype=complex)
    low = np.einsum("ab,bij->aij", ETA, gamma)
    sigma = 0.25 * (np.einsum("aij,bjk->abik", low, low) - np.einsum("bij,ajk->abik", low, low))
    pi = 1j * gamma[0] @ gamma[1] @ gamma[2] @ gamma[3]
    return GammaBasis(gamma=gamma, sigma=sigma, pi=pi, convention=convention)


@dataclass(frozen=True)
class IdentityFamily:
    name: str
    deviation: float
    worst_index: tuple
    passed: bool


@dataclass(frozen=True)
class IdentityReport:
    families: tuple[IdentityFamily, ...]
    tol: float

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.families)

    def __getitem__(self, name: str) -> IdentityFamily:
        for fam in self.families:
            if fam.name == name:
                return fam
        raise KeyError(name)


def _worst(items) -> tuple[float, tuple]:
    dev, where = -1.0, ()
    for idx, diff in items:
        d = float(np.max(np.abs(diff)))
        if d > dev:
            dev, where = d, idx
    return dev, where


def verify_clifford_identities(basis: GammaBasis, tol: float = 1e-12) -> IdentityReport:
    """Check the defining algebra over every index combination.

    Deviations are absolute max-entry differences; all entries involved are
    O(1) constants so no relative scaling is applied. A tolerance of zero is
    accepted and simply fails on rounding noise.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    g, gl, eta = basis.gamma, basis.gamma_lower, basis.eta
    sig, sig_up, eps, pi = basis.sigma, basis.sigma_upper, basis.epsilon, basis.pi

    anti = (
        ((a, b), gl[a] @ gl[b] + gl[b] @ gl[a] - 2 * eta[a, b] * I4)
        for a in range(4)
        for b in range(4)
    )
    gens = (
        ((a, b), sig[a, b] - 0.25 * (gl[a] @ gl[b] - gl[b] @ gl[a]))
        for a in range(4)
        for b in range(4)
    )
    dual = (
        ((a, b), 2j * sig[a, b] - pi @ np.einsum("cd,cdij->ij", eps[a, b], sig_up))
        for a in range(4)
        for b in range(4)
    )
    chir = itertools.chain(
        [(("pi^2",), pi @ pi - I4)],
        (((a,), pi @ g[a] + g[a] @ pi) for a in range(4)),
    )
    triple = (
        (
            (i, j, k),
            gl[i] @ gl[j] @ gl[k]
            - (gl[i] * eta[j, k] - gl[j] * eta[i, k] + gl[k] * eta[i, j])
            - 1j * pi @ np.einsum("q,qab->ab", eps[i, j, k], g),
        )
        for i, j, k in itertools.product(range(4), repeat=3)
    )
    fams = []
    for name, items in (
        ("anticommutator", anti),
        ("generators", gens),
        ("duality", dual),
        ("chirality", chir),
        ("triple_product", triple),
    ):
        dev, where = _worst(items)
        fams.append(IdentityFamily(name, dev, where, dev <= tol))
    return IdentityReport(tuple(fams), tol)


def matrix_deviation(a: np.ndarray, b: np.ndarray) -> float:
    """Max-entry deviation, divided by max|b| once the reference exceeds one."""
    scale = max(1.0, float(np.max(np.abs(b))))
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) / scale


# --- Lorentz transformations -------------------------------------------------


@dataclass(frozen=True)
class LorentzParams:
    """exp(theta_ab sigma^ab / 2) combined with a phase exp(i q alpha)."""

    theta: np.ndarray
    q: float = 0.0
    alpha: float = 0.0

    def __post_init__(self):
        th = np.asarray(self.theta, dtype=float)
        if th.shape != (4, 4):
            raise ValueError("theta must be 4x4")
        if not np.all(np.isfinite(th)) or not np.isfinite(self.q) or not np.isfinite(self.alpha):
            raise ValueError("Lorentz parameters must be finite")
        if np.max(np.abs(th + th.T)) > 1e-12 * max(1.0, np.max(np.abs(th))):
            raise ValueError("theta must be antisymmetric")
        object.__setattr__(self, "theta", th)

    @classmethod
    def from_components(cls, q: float = 0.0, alpha: float = 0.0, **pairs: float) -> "LorentzParams":
        """Build from keyword pairs such as ``t03=0.5`` (meaning theta_03)."""
        th = np.zeros((4, 4))
        for key, val in pairs.items():
            a, b = int(key[1]), int(key[2])
            th[a, b], th[b, a] = val, -val
        return cls(th, q, alpha)


@dataclass(frozen=True)
class ClosedFormCoefficients:
    a: float
    b: float
    x: float
    y: float
    X: float
    Y: float
    Z: np.ndarray  # upper indices

    def norm_residual(self) -> float:
        zz = np.einsum("ab,ab->", self.Z, _lower(self.Z))
        return float(self.X**2 - self.Y**2 + zz / 8 - 1)

    def dual_residual(self, eps: np.ndarray | None = None) -> float:
        eps = levi_civita() if eps is None else eps
        return float(2 * self.X * self.Y - np.einsum("ij,ab,ijab->", self.Z, self.Z, eps) / 16)


def _lower(t: np.ndarray) -> np.ndarray:
    return ETA @ t @ ETA


def _zeta_coefficients(x: float, y: float) -> tuple[float, float]:
    d = x * x + y * y
    if d < 1e-8:
        # series of both ratios around the origin; exact at x = y = 0
        return 1.0 + (x * x - y * y) / 6.0, x * y / 3.0
    c1 = (x * np.sinh(x) * np.cos(y) + y * np.sin(y) * np.cosh(x)) / d
    c2 = (x * np.cosh(x) * np.sin(y) - y * np.cos(y) * np.sinh(x)) / d
    return c1, c2


def closed_form_coefficients(theta: np.ndarray, eps: np.ndarray | None = None) -> ClosedFormCoefficients:
    eps = levi_civita() if eps is None else eps
    th_low = np.asarray(theta, dtype=float)
    th_up = _lower(th_low)  # eta is its own inverse
    a = -np.einsum("ij,ij->", th_low, th_up) / 8
    b = -np.einsum("ij,ab,ijab->", th_low, th_low, eps) / 16  # eps^ijab = -eps_ijab
    rho = np.hypot(a, b)
    # stable complex square root: take the larger root directly, the other from x y = b / 2
    if a >= 0:
        x = np.sqrt((a + rho) / 2)
        y = b / (2 * x) if x > 0 else 0.0
    else:
        y = np.copysign(np.sqrt((rho - a) / 2), b)
        x = abs(b) / (2 * abs(y))
    c1, c2 = _zeta_coefficients(x, y)
    dual_up = -0.5 * np.einsum("ij,ijab->ab", th_low, eps)
    Z = c1 * th_up + c2 * dual_up
    return ClosedFormCoefficients(
        a=float(a), b=float(b), x=float(x), y=float(y),
        X=float(np.cos(y) * np.cosh(x)), Y=float(np.sin(y) * np.sinh(x)), Z=Z,
    )


def _assemble(c: ClosedFormCoefficients, basis: GammaBasis, sign: float = 1.0) -> np.ndarray:
    return c.X * I4 + 1j * c.Y * basis.pi + sign * 0.5 * np.einsum("ab,abij->ij", c.Z, basis.sigma)


def lorentz_closed_form(p: LorentzParams, basis: GammaBasis) -> tuple[ClosedFormCoefficients, np.ndarray]:
    coeffs = closed_form_coefficients(p.theta, basis.epsilon)
    return coeffs, _assemble(coeffs, basis)


def lorentz_inverse(coeffs: ClosedFormCoefficients, basis: GammaBasis, tol: float = 1e-8) -> np.ndarray:
    scale = max(1.0, coeffs.X**2 + coeffs.Y**2)
    if abs(coeffs.norm_residual()) > tol * scale or abs(coeffs.dual_residual(basis.epsilon)) > tol * scale:
        raise ValueError("coefficients violate the closed-form identities; not a Lorentz element")
    return _assemble(coeffs, basis, sign=-1.0)


def spinor_transform(p: LorentzParams, basis: GammaBasis) -> np.ndarray:
    _, lam = lorentz_closed_form(p, basis)
    return lam * np.exp(1j * p.q * p.alpha)


def exp_series(m: np.ndarray, tol: float = 1e-18, max_terms: int = 400) -> np.ndarray:
    """Plain Taylor series of the matrix exponential, summed to convergence.

    Serves as an oracle for the closed form, so it deliberately avoids any
    scaling-and-squaring or Pade machinery.
    """
    out = np.eye(m.shape[0], dtype=complex)
    term = out.copy()
    for n in range(1, max_terms):
        term = term @ m / n
        out = out + term
        if n >= 30 and np.max(np.abs(term)) <= tol * np.max(np.abs(out)):
            break
    return out


def generator(theta: np.ndarray, basis: GammaBasis) -> np.ndarray:
    """theta_ab sigma^ab / 2."""
    return 0.5 * basis.sigma_contract(np.asarray(theta, dtype=float))


def vector_representation(S: np.ndarray, basis: GammaBasis) -> np.ndarray:
    """Real matrix L with S^-1 gamma^a S = L^a_b gamma^b.

    With this orientation bilinears transform as U -> L U when psi -> S psi,
    and the map S -> L is a homomorphism.
    """
    S = np.asarray(S, dtype=complex)
    if not np.all(np.isfinite(S)) or np.linalg.cond(S) > 1e12:
        raise ValueError("spinor transformation is singular")
    s_inv = np.linalg.inv(S)
    conj = np.einsum("ij,ajk,kl->ail", s_inv, basis.gamma, S)
    lam = 0.25 * np.einsum("aij,bji->ab", conj, basis.gamma_lower)
    return lam.real


def s_inv_ds_decompose(
    S_path: Callable[[float], np.ndarray],
    basis: GammaBasis,
    lam0: float,
    h: float = 1e-4,
    q: float = 1.0,
) -> tuple[np.ndarray, float, float]:
    """Project S^-1 dS/dlambda onto dzeta_ab sigma^ab / 2 + i q dalpha.

    Returns (dzeta with lower indices, dalpha, norm of the off-span remainder).
    """
    if h <= 0:
        raise ValueError("h must be positive")
    s0 = np.asarray(S_path(lam0), dtype=complex)
    if np.linalg.cond(s0) > 1e12:
        raise ValueError("S is not invertible at lambda0")
    ds = (np.asarray(S_path(lam0 + h)) - np.asarray(S_path(lam0 - h))) / (2 * h)
    m = np.linalg.solve(s0, ds)
    cols, labels = [], []
    for a, b in itertools.combinations(range(4), 2):
        cols.append(basis.sigma_upper[a, b].ravel())
        labels.append((a, b))
    cols.append(1j * I4.ravel())
    A = np.array(cols).T
    A_ri = np.vstack([A.real, A.imag])
    rhs = np.concatenate([m.ravel().real, m.ravel().imag])
    coef, *_ = np.linalg.lstsq(A_ri, rhs, rcond=None)
    dzeta = np.zeros((4, 4))
    for (a, b), c in zip(labels, coef[:-1]):
        dzeta[a, b], dzeta[b, a] = c, -c
    remainder = m - (A @ coef).reshape(4, 4)
    return dzeta, float(coef[-1] / q), float(np.linalg.norm(remainder))
