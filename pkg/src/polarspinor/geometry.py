"""Flat spacetime in spherical coordinates: metric, Christoffels, tetrads and curvatures.

Coordinates are ordered (t, r, theta, phi). Fields are plain callables of a
coordinate 4-vector. Arrays carrying a connection use the layout
``G[nu, sigma, mu]`` for Lambda^nu_{sigma mu} and ``Omega[a, b, mu]`` for
Omega_{ab mu} with both Lorentz indices lowered.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping

import numpy as np

from .clifford import ETA, I4, GammaBasis, levi_civita
from .fd import DEFAULT_DOMAIN, Domain, gradient

COORDS = ("t", "r", "theta", "phi")
Field = Callable[[np.ndarray], np.ndarray]


def _check_point(r, theta) -> None:
    if np.any(np.asarray(r) <= 0) or np.any(np.abs(np.sin(theta)) < 1e-12):
        raise ValueError("evaluation on a coordinate singularity (r = 0 or sin(theta) = 0)")


# --- metric and Christoffel symbols -----------------------------------------


def metric(r: float, theta: float) -> np.ndarray:
    return np.diag([1.0, -1.0, -(r**2), -((r * np.sin(theta)) ** 2)])


def inverse_metric(r: float, theta: float) -> np.ndarray:
    _check_point(r, theta)
    return np.diag([1.0, -1.0, -1.0 / r**2, -1.0 / (r * np.sin(theta)) ** 2])


def metric_derivative(r: float, theta: float) -> np.ndarray:
    """dg[mu, a, b] = d_mu g_ab."""
    d = np.zeros((4, 4, 4))
    s, c = np.sin(theta), np.cos(theta)
    d[1, 2, 2] = -2 * r
    d[1, 3, 3] = -2 * r * s * s
    d[2, 3, 3] = -2 * r * r * s * c
    return d


def christoffel(r: float, theta: float) -> np.ndarray:
    """Lambda^nu_{sigma mu} as G[nu, sigma, mu]; only six families are nonzero."""
    _check_point(r, theta)
    s, c = np.sin(theta), np.cos(theta)
    G = np.zeros((4, 4, 4))
    G[2, 2, 1] = G[2, 1, 2] = 1 / r
    G[3, 3, 1] = G[3, 1, 3] = 1 / r
    G[1, 2, 2] = -r
    G[1, 3, 3] = -r * s * s
    G[3, 3, 2] = G[3, 2, 3] = c / s
    G[2, 3, 3] = -c * s
    return G


def christoffel_derivative(r: float, theta: float) -> np.ndarray:
    """dG[mu, nu, sigma, rho] = d_mu Lambda^nu_{sigma rho}."""
    _check_point(r, theta)
    s, c = np.sin(theta), np.cos(theta)
    d = np.zeros((4, 4, 4, 4))
    d[1, 2, 2, 1] = d[1, 2, 1, 2] = -1 / r**2
    d[1, 3, 3, 1] = d[1, 3, 1, 3] = -1 / r**2
    d[1, 1, 2, 2] = -1
    d[1, 1, 3, 3] = -s * s
    d[2, 1, 3, 3] = -2 * r * s * c
    d[2, 3, 3, 2] = d[2, 3, 2, 3] = -1 / s**2
    d[2, 2, 3, 3] = -(c * c - s * s)
    return d


def christoffel_from_metric(r: float, theta: float) -> np.ndarray:
    """Levi-Civita symbols from the metric and its analytic first derivatives."""
    ginv = inverse_metric(r, theta)
    dg = metric_derivative(r, theta)
    # Lambda^n_{s m} = g^{nk} (d_s g_km + d_m g_ks - d_k g_sm) / 2
    t = np.einsum("skm->ksm", dg) + np.einsum("mks->ksm", dg) - dg
    return 0.5 * np.einsum("nk,ksm->nsm", ginv, t)


def metric_compatibility(r: float, theta: float) -> float:
    """max |nabla_s g_mn| with the closed-form Christoffels."""
    g, G, dg = metric(r, theta), christoffel(r, theta), metric_derivative(r, theta)
    nab = dg - np.einsum("kms,kn->smn", G, g) - np.einsum("kns,mk->smn", G, g)
    return float(np.max(np.abs(nab)))


def riemann_from_christoffel(r: float, theta: float) -> np.ndarray:
    """R^rho_{sigma mu nu} from the closed-form symbols and their analytic derivatives."""
    G, dG = christoffel(r, theta), christoffel_derivative(r, theta)
    term = np.einsum("mpns->psmn", dG) + np.einsum("pml,lns->psmn", G, G)
    return term - np.einsum("psmn->psnm", term)


# --- tetrads and spin connection --------------------------------------------


@dataclass(frozen=True)
class TetradField:
    """Coframe xi^a_mu (as ``coframe(x)[a, mu]``) with optional explicit frame xi_a^mu."""

    coframe: Field
    frame: Field | None = None

    def dual(self, x) -> np.ndarray:
        if self.frame is not None:
            return np.asarray(self.frame(x), dtype=float)
        return np.linalg.inv(self.coframe(x)).T

    def check(self, x) -> dict:
        """Duality and metric reproduction deviations at a point."""
        e, E = np.asarray(self.coframe(x)), self.dual(x)
        return {
            "duality": float(np.max(np.abs(e @ E.T - np.eye(4)))),
            "metric": float(np.max(np.abs(e.T @ ETA @ e - metric(x[1], x[2])))),
        }


def spin_connection_from_tetrad(
    tetrad: TetradField, point, h: float = 1e-3, scheme: str = "central2", domain: Domain = DEFAULT_DOMAIN
) -> np.ndarray:
    """Omega_{ab mu} solving the tetrad postulate, with FD derivatives of the coframe."""
    x = np.asarray(point, dtype=float)
    e = np.asarray(tetrad.coframe(x), dtype=float)
    if abs(np.linalg.det(e)) < 1e-12:
        raise ValueError("tetrad is singular")
    E = tetrad.dual(x)
    de = gradient(tetrad.coframe, x, h, scheme, domain, directions=(1, 2))
    G = christoffel(x[1], x[2])
    # T[mu, a, nu] = d_mu xi^a_nu - Lambda^s_{nu mu} xi^a_s
    T = de - np.einsum("snm,as->man", G, e)
    omega_up = -np.einsum("man,bn->abm", T, E)
    return np.einsum("ac,cbm->abm", ETA, omega_up)


def tetrad_postulate_residual(tetrad: TetradField, omega: np.ndarray, point, h=1e-3, scheme="central2") -> float:
    x = np.asarray(point, dtype=float)
    e = np.asarray(tetrad.coframe(x), dtype=float)
    de = gradient(tetrad.coframe, x, h, scheme, directions=(1, 2))
    G = christoffel(x[1], x[2])
    omega_up = np.einsum("ac,cbm->abm", ETA, omega)
    res = de - np.einsum("snm,as->man", G, e) + np.einsum("abm,bn->man", omega_up, e)
    return float(np.max(np.abs(res)))


def riemann_from_spin_connection(
    omega: Field, point, h: float = 1e-3, scheme: str = "central4", domain: Domain = DEFAULT_DOMAIN
) -> np.ndarray:
    """R^i_{j mu nu} of a spin connection field given with lower Lorentz indices."""
    x = np.asarray(point, dtype=float)
    mixed = lambda y: np.einsum("ac,cbm->abm", ETA, omega(y))  # noqa: E731
    d = gradient(mixed, x, h, scheme, domain)  # d[mu, i, j, nu]
    w = mixed(x)
    term = np.einsum("mijn->ijmn", d) + np.einsum("ikm,kjn->ijmn", w, w)
    return term - np.einsum("ijmn->ijnm", term)


def lower_first(R_mixed: np.ndarray) -> np.ndarray:
    return np.einsum("ia,a...->i...", ETA, R_mixed)


# --- tensorial connection and gauge momentum --------------------------------


def tensorial_connection(
    goldstone: Field, omega: Field, point, h: float = 1e-3, scheme: str = "central2", domain=DEFAULT_DOMAIN
) -> np.ndarray:
    """R_{ij mu} = d_mu xi_ij - Omega_{ij mu}, Lorentz pair lowered."""
    x = np.asarray(point, dtype=float)
    d = gradient(goldstone, x, h, scheme, domain)  # d[mu, i, j]
    return np.einsum("mij->ijm", d) - np.asarray(omega(x))


def lorentz_to_coordinate(R_lorentz: np.ndarray, coframe: np.ndarray) -> np.ndarray:
    """R_{alpha beta mu} = xi^i_alpha xi^j_beta R_{ij mu} (derivative index untouched)."""
    return np.einsum("ia,jb,ijm->abm", coframe, coframe, R_lorentz)


def coordinate_to_lorentz(R_coord: np.ndarray, frame: np.ndarray) -> np.ndarray:
    return np.einsum("ia,jb,abm->ijm", frame, frame, R_coord)


def curvature_from_tensorial(
    R_coord: Field, point, h: float = 1e-3, scheme: str = "central4", domain=DEFAULT_DOMAIN
) -> np.ndarray:
    """-(nabla_mu R^a_{b nu} - nabla_nu R^a_{b mu} + R^a_{k mu} R^k_{b nu} - R^a_{k nu} R^k_{b mu}).

    ``R_coord(x)[a, b, mu]`` has all coordinate indices lowered. The result,
    indexed [a, b, mu, nu], is the Riemann tensor reconstructed from the
    tensorial connection and vanishes on a flat background.
    """
    x = np.asarray(point, dtype=float)

    def mixed(y):
        return np.einsum("ac,cbm->abm", inverse_metric(y[1], y[2]), R_coord(y))

    d = gradient(mixed, x, h, scheme, domain)  # d[mu, a, b, nu]
    Rm = mixed(x)
    G = christoffel(x[1], x[2])
    nab = (
        d
        + np.einsum("amk,kbn->mabn", G, Rm)
        - np.einsum("kmb,akn->mabn", G, Rm)
        - np.einsum("kmn,abk->mabn", G, Rm)
    )
    term = np.einsum("mabn->abmn", nab) + np.einsum("akm,kbn->abmn", Rm, Rm)
    return -(term - np.einsum("abmn->abnm", term))


def maxwell_from_momentum(P: Field, point, h: float = 1e-3, q: float = 1.0, scheme="central2", domain=DEFAULT_DOMAIN):
    """F_{mu nu} with q F = -(d_mu P_nu - d_nu P_mu); Christoffel terms cancel."""
    d = gradient(P, point, h, scheme, domain)
    return -(d - d.T) / q


# --- spinor fields -----------------------------------------------------------


def spinor_covariant_derivative(
    psi: Field,
    omega: Field,
    point,
    basis: GammaBasis,
    h: float = 1e-3,
    A: Field | None = None,
    q: float = 1.0,
    scheme: str = "central2",
    domain=DEFAULT_DOMAIN,
) -> np.ndarray:
    """nabla_mu psi = d_mu psi + Omega_{ij mu} sigma^ij psi / 2 + i q A_mu psi, rows indexed by mu."""
    x = np.asarray(point, dtype=float)
    dpsi = gradient(psi, x, h, scheme, domain)
    p = np.asarray(psi(x), dtype=complex)
    w = np.asarray(omega(x))
    a = np.zeros(4) if A is None else np.asarray(A(x), dtype=float)
    out = np.empty((4, 4), dtype=complex)
    for mu in range(4):
        out[mu] = dpsi[mu] + 0.5 * basis.sigma_contract(w[:, :, mu]) @ p + 1j * q * a[mu] * p
    return out


def spinor_dirac_residual(
    psi: Field,
    omega: Field,
    tetrad: TetradField,
    point,
    basis: GammaBasis,
    m: float,
    h: float = 1e-3,
    A: Field | None = None,
    q: float = 1.0,
    W: Field | None = None,
    X: float = 0.0,
    scheme: str = "central2",
    domain=DEFAULT_DOMAIN,
) -> np.ndarray:
    """i gamma^mu nabla_mu psi - X W_mu gamma^mu pi psi - m psi with gamma^mu = xi_a^mu gamma^a."""
    x = np.asarray(point, dtype=float)
    _check_point(x[1], x[2])
    nab = spinor_covariant_derivative(psi, omega, x, basis, h, A, q, scheme, domain)
    gam = np.einsum("am,aij->mij", tetrad.dual(x), basis.gamma)
    p = np.asarray(psi(x), dtype=complex)
    res = 1j * np.einsum("mij,mj->i", gam, nab) - m * p
    if W is not None and X != 0.0:
        res = res - X * np.einsum("m,mij->ij", np.asarray(W(x)), gam) @ basis.pi @ p
    return res


def commutator_check(
    psi: Field,
    omega: Field,
    point,
    basis: GammaBasis,
    h: float = 1e-3,
    A: Field | None = None,
    q: float = 1.0,
    scheme: str = "central2",
    domain=DEFAULT_DOMAIN,
) -> tuple[float, float]:
    """Compare [nabla_mu, nabla_nu] psi with (R_{ij mu nu} sigma^ij / 2 + i q F_{mu nu}) psi.

    Returns (max deviation, max |left-hand side|). The left side is built by
    differencing the covariant derivative field itself; the Christoffel part
    drops out of the antisymmetrised second derivative.
    """
    x = np.asarray(point, dtype=float)

    def nabla(y):
        return spinor_covariant_derivative(psi, omega, y, basis, h, A, q, scheme, domain)

    dn = gradient(nabla, x, h, scheme, domain)  # dn[mu, nu, :]
    n0 = nabla(x)
    w = np.asarray(omega(x))
    a = np.zeros(4) if A is None else np.asarray(A(x), dtype=float)
    # D_mu (nabla_nu psi) with the same spinor and gauge connection
    dd = np.empty((4, 4, 4), dtype=complex)
    for mu in range(4):
        conn = 0.5 * basis.sigma_contract(w[:, :, mu]) + 1j * q * a[mu] * I4
        dd[mu] = dn[mu] + n0 @ conn.T
    lhs = dd - np.transpose(dd, (1, 0, 2))
    R = lower_first(riemann_from_spin_connection(omega, x, h, scheme, domain))
    F = np.zeros((4, 4)) if A is None else -maxwell_from_momentum(A, x, h, 1.0, scheme, domain)
    p = np.asarray(psi(x), dtype=complex)
    rhs = np.empty_like(lhs)
    for mu in range(4):
        for nu in range(4):
            rhs[mu, nu] = (0.5 * basis.sigma_contract(R[:, :, mu, nu]) + 1j * q * F[mu, nu] * I4) @ p
    return float(np.max(np.abs(lhs - rhs))), float(np.max(np.abs(lhs)))


# --- grids and dumps ---------------------------------------------------------


@dataclass(frozen=True)
class Grid:
    nr: int = 32
    ntheta: int = 32
    r_range: tuple[float, float] = (0.2, 4.0)
    theta_range: tuple[float, float] = (0.3, np.pi - 0.3)

    def __post_init__(self):
        if self.nr < 2 or self.ntheta < 2:
            raise ValueError("grid needs at least two samples per axis")
        lo, hi = self.r_range
        tlo, thi = self.theta_range
        if not (0.05 <= lo < hi) or not (0.05 <= tlo < thi <= np.pi - 0.05):
            raise ValueError("grid leaves the admissible domain r >= 0.05, 0.05 <= theta <= pi - 0.05")

    @property
    def r(self) -> np.ndarray:
        return np.linspace(*self.r_range, self.nr)

    @property
    def theta(self) -> np.ndarray:
        return np.linspace(*self.theta_range, self.ntheta)

    def points(self):
        for r in self.r:
            for th in self.theta:
                yield float(r), float(th)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.r, self.theta, indexing="ij")

    def as_dict(self) -> dict:
        return {"nr": self.nr, "ntheta": self.ntheta, "r_range": list(self.r_range), "theta_range": list(self.theta_range)}


def write_grid_csv(path, grid: Grid, fields: Mapping[str, Callable[[float, float], float]]) -> Path:
    """One row per (r, theta) sample, 17 significant digits."""
    path = Path(path)
    names = list(fields)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["r", "theta", *names])
        for r, th in grid.points():
            w.writerow([f"{v:.17g}" for v in (r, th, *(float(fields[n](r, th)) for n in names))])
    return path


EPSILON = levi_civita()
