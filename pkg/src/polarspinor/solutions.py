"""The seven exact solutions and the residual evaluators that certify them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import sympy as sp
from scipy import integrate
from scipy.linalg import expm

from .backgrounds import Background, ProfilePair, example1_background, example2_background
from .clifford import GammaBasis, build_gamma_basis
from .fd import Domain, mesh_derivative
from .field_equations import majorana_equations, regular_equations
from .geometry import Grid, spinor_dirac_residual
from .polar import REGULAR_CONSTANT, SINGULAR_CONSTANT, bilinears, chiral_rotation
from .profiles import R, THETA, Profile

REGULAR_IDS = (1, 2, 3, 4, 7)
MAJORANA_IDS = (5, 6)


@dataclass(frozen=True)
class SolutionSpec:
    """Closed-form data of one exact solution.

    ``density`` is phi^2 r^2 sin(theta) for the regular solutions and
    e^a r^2 sin(theta) for the Majorana ones; ``F`` is its logarithm.
    """

    id: int
    m: float
    eps: float | None
    E: float | None
    k: float
    profiles: ProfilePair
    beta: Profile
    F: Profile

    @property
    def kind(self) -> str:
        return "majorana" if self.id in MAJORANA_IDS else "regular"

    @property
    def momentum_t(self) -> float:
        """P_t bound to the solution: m for ids 1-4, zero for Majorana, E for id 7."""
        if self.id == 7:
            return self.E
        return 0.0 if self.kind == "majorana" else self.m

    @property
    def g_branch(self) -> str:
        return "a" if self.id in (1, 3, 5) else "b"

    def background(self) -> Background:
        if self.id in MAJORANA_IDS:
            return example2_background(self.profiles, self.k)
        if self.id == 7:
            return example1_background(self.profiles, 0.0, winding=1.0)
        return example1_background(self.profiles, self.eps)

    def density(self, r, theta):
        return np.exp(self.F(r, theta))

    def ln_phi2(self, r, theta):
        """ln(phi^2), regular solutions only."""
        return self.F(r, theta) - np.log(r * r * np.sin(theta))


def _beta7(E: float, m: float) -> Profile:
    """Continuous lift of tan(beta/2) = c tan(x), x = r cos(theta) sqrt(E^2 - m^2).

    The principal arctan jumps by 2 pi whenever x crosses an odd multiple of
    pi/2; adding 2 pi round(x / pi) removes the jumps, which is the same as
    unwrapping each theta-row in r starting from beta ~ 0 near the origin.
    The gradient is supplied in closed form because sympy cannot
    differentiate round().
    """
    w = np.sqrt(E * E - m * m)
    c = np.sqrt((E - m) / (E + m))

    def value(r, th):
        x = np.asarray(r) * np.cos(th) * w
        return 2 * np.arctan(c * np.tan(x)) + 2 * np.pi * np.round(x / np.pi)

    x = R * sp.cos(THETA) * sp.Float(w)
    bx = 2 * sp.Float(c) / (sp.cos(x) ** 2 + sp.Float(c) ** 2 * sp.sin(x) ** 2)
    grad = (bx * sp.diff(x, R), bx * sp.diff(x, THETA))
    return Profile(2 * sp.atan(sp.Float(c) * sp.tan(x)), value=value, grad=grad, name="beta")


def solution_spec(id: int, m: float = 1.0, eps: float = 0.5, E: float = 1.3, k: float = 0.0) -> SolutionSpec:
    """Build the closed forms of solution ``id`` (1..7)."""
    if id not in range(1, 8):
        raise ValueError(f"unknown solution id {id}")
    if not m > 0:
        raise ValueError("m must be positive")
    half_pi = sp.pi / 2
    if id <= 4:
        if not m > eps > 0:
            raise ValueError("solutions 1-4 require m > eps > 0")
        kap = sp.sqrt(sp.Float(eps) * (2 * sp.Float(m) - sp.Float(eps)))
        me = sp.Float(m - eps)
        rr = R if id in (1, 3) else R * sp.sin(THETA)
        if id in (1, 2):
            a = sp.asinh(kap / me)
            F = sp.log(R) - 2 * rr * kap if id == 2 else -2 * R * kap
        else:
            a = 2 * sp.atanh(-sp.sqrt(sp.Float(eps) / (2 * sp.Float(m) - sp.Float(eps))) * sp.tanh(rr * kap))
            F = sp.log(rr / sp.sin(THETA) if id == 4 else sp.Integer(1)) + sp.log(sp.Float(m) + me * sp.cosh(2 * rr * kap))
        g = -half_pi if id in (1, 3) else -THETA
        return SolutionSpec(id, m, eps, None, 0.0, ProfilePair(Profile(a), Profile(g)), Profile(0), Profile(F))
    if id in MAJORANA_IDS:
        mm = sp.Float(m)
        if id == 5:
            F = -2 * mm * R
            g = -half_pi
        else:
            F = sp.log(R) - 2 * mm * R * sp.sin(THETA)
            g = -THETA
        a = F - 2 * sp.log(R) - sp.log(sp.sin(THETA))
        return SolutionSpec(id, m, None, None, float(k), ProfilePair(Profile(a), Profile(g)), Profile(0), Profile(F))
    if not E > m:
        raise ValueError("solution 7 requires E > m > 0")
    x = R * sp.cos(THETA) * sp.sqrt(sp.Float(E * E - m * m))
    F = 2 * sp.log(R) + sp.log(sp.sin(THETA)) + sp.log(sp.Float(E) + sp.Float(m) * sp.cos(2 * x))
    return SolutionSpec(7, m, None, E, 0.0, ProfilePair.trivial(), _beta7(E, m), Profile(F))


# --- reports -----------------------------------------------------------------


@dataclass(frozen=True)
class Stats:
    max: float
    mean: float
    l2: float

    @classmethod
    def of(cls, values) -> "Stats":
        v = np.abs(np.asarray(values, dtype=float)).ravel()
        if v.size == 0:
            return cls(0.0, 0.0, 0.0)
        return cls(float(v.max()), float(v.mean()), float(np.sqrt(np.mean(v * v))))


@dataclass(frozen=True)
class ResidualReport:
    """Per-equation statistics over a grid. ``l2`` is the root mean square."""

    checks: dict[str, Stats]
    tol: float
    mode: str
    grid: Grid | None = None
    info: dict = field(default_factory=dict)

    @property
    def max(self) -> float:
        return max((s.max for s in self.checks.values()), default=0.0)

    @property
    def passed(self) -> bool:
        return all(np.isfinite(s.max) and s.max <= self.tol for s in self.checks.values())

    def __getitem__(self, name: str) -> Stats:
        return self.checks[name]


_TOL = {"analytic": 1e-10, "fd": 1e-6}


class _Derivs:
    """First derivatives of a profile on mesh arrays, analytic or by finite differences."""

    def __init__(self, mode: str, h: float, scheme: str, domain: Domain | None):
        if mode not in _TOL:
            raise ValueError(f"unknown derivative mode {mode!r}")
        self.mode, self.h, self.scheme, self.domain = mode, h, scheme, domain

    def __call__(self, f: Callable | Profile, r, th):
        if self.mode == "analytic":
            return f.grad(r, th)
        return tuple(mesh_derivative(f, r, th, ax, self.h, self.scheme, self.domain) for ax in ("r", "theta"))


def _mesh(grid: Grid):
    r, th = grid.mesh()
    if np.min(r) <= 0 or np.min(np.abs(np.sin(th))) < 1e-12:
        raise ValueError("grid touches a coordinate singularity")
    return r, th


def regular_polar_residuals(
    spec: SolutionSpec,
    grid: Grid | None = None,
    mode: str = "analytic",
    h: float = 1e-3,
    scheme: str = "central4",
    tol: float | None = None,
    F: Callable | None = None,
) -> ResidualReport:
    """Residuals of the reduced scalar systems of a regular solution.

    Ids 1 and 3 use the sin g = -1 system, ids 2 and 4 the g = -theta system,
    id 7 the trivial-connection system. In analytic mode the two vector
    equations are also evaluated through the background's frame-projected
    tensorial connection (``dep1``, ``dep2``, relative once the Lorentz
    components exceed 1). ``F`` overrides ln(phi^2 r^2 sin)
    to probe deliberate violations.
    """
    if spec.id not in REGULAR_IDS:
        raise ValueError(f"solution {spec.id} is not regular")
    grid = grid or Grid()
    r, th = _mesh(grid)
    d = _Derivs(mode, h, scheme, Domain())
    Ffun = F or spec.F
    a, b = spec.profiles.a(r, th), spec.beta(r, th)
    a_r, a_t = d(spec.profiles.a, r, th)
    b_r, b_t = d(spec.beta, r, th)
    F_r, F_t = d(Ffun, r, th)
    m = spec.m
    out = {}
    if spec.id == 7:
        E = spec.E
        # ln phi^2 = F - ln(r^2 sin theta)
        l_r, l_t = F_r - 2 / r, F_t - np.cos(th) / np.sin(th)
        out["triv1"] = 2 * E * r * np.sin(th) + b_t - 2 * m * r * np.sin(th) * np.cos(b)
        out["triv2"] = -2 * E * np.cos(th) + b_r + 2 * m * np.cos(b) * np.cos(th)
        out["triv3"] = -2 * m * r * np.sin(th) * np.sin(b) + l_t
        out["triv4"] = 2 * m * np.sin(b) * np.cos(th) + l_r
    else:
        me = m - spec.eps
        if spec.g_branch == "a":
            out["deps1a"] = a_t + r * b_r
            out["deps2a"] = r * a_r - 2 * me * r * np.cosh(a) - b_t + 2 * m * r * np.cos(b)
            out["deps3a"] = 2 * me * np.sinh(a) + F_r
            out["deps4a"] = -2 * m * r * np.sin(b) + F_t
        else:
            s, c = np.sin(th), np.cos(th)
            out["deps1b"] = a_t - 2 * me * r * np.cosh(a) * c + r * b_r + 2 * m * r * np.cos(b) * c
            out["deps2b"] = r * a_r - 2 * me * r * np.cosh(a) * s - b_t + 2 * m * r * np.cos(b) * s
            out["deps3b"] = -1 + 2 * me * r * s * np.sinh(a) + 2 * m * r * c * np.sin(b) + r * F_r
            out["deps4b"] = 2 * me * r * c * np.sinh(a) - 2 * m * r * s * np.sin(b) + F_t
    if mode == "analytic" and F is None:
        out.update(_tensor_regular(spec, r, th))
    checks = {k: Stats.of(v) for k, v in out.items()}
    return ResidualReport(checks, _TOL[mode] if tol is None else tol, mode, grid)


def _scale(R_l: np.ndarray) -> float:
    # Strongly boosted frames give Lorentz components of order cosh^2(a) that
    # cancel in the equations; judge them relative to that size, as for matrices.
    return max(1.0, float(np.max(np.abs(R_l))))


def _tensor_regular(spec: SolutionSpec, r, th) -> dict[str, np.ndarray]:
    bg = spec.background()
    u = np.array([1.0, 0.0, 0.0, 0.0])
    s = np.array([0.0, 0.0, 0.0, 1.0])
    dep1, dep2 = [], []
    for rr, tt in zip(r.ravel(), th.ravel()):
        frame = bg.frame(rr, tt)
        R_l = np.einsum("ijm,km->ijk", bg.tensorial_connection_lorentz(rr, tt), frame)
        P = frame @ np.array([spec.momentum_t, 0.0, 0.0, 0.0])
        db = frame @ np.array([0.0, *spec.beta.grad(rr, tt), 0.0])
        F_r, F_t = spec.F.grad(rr, tt)
        dl = frame @ np.array([0.0, F_r - 2 / rr, F_t - np.cos(tt) / np.sin(tt), 0.0])
        e1, e2 = regular_equations(R_l, P, u, s, spec.m, float(spec.beta(rr, tt)), db, dl)
        scale = _scale(R_l)
        dep1.append(e1 / scale)
        dep2.append(e2 / scale)
    return {"dep1": np.array(dep1), "dep2": np.array(dep2)}


def majorana_polar_residuals(
    spec: SolutionSpec,
    grid: Grid | None = None,
    mode: str = "analytic",
    h: float = 1e-3,
    scheme: str = "central4",
    tol: float | None = None,
    m: float | None = None,
    k: float | None = None,
) -> ResidualReport:
    """Residuals of the Majorana system of solutions 5 and 6.

    Reports the diagonalised pair (``diag1``, ``diag2``), the pair before
    diagonalisation (``pair1``, ``pair2``) and, in analytic mode, the tensor
    equations ``m1``, ``m2`` built from the full tensorial connection with
    the explicit background constant ``k``. ``m`` overrides the mass used in
    the equations (the profiles keep the mass of ``spec``).
    """
    if spec.id not in MAJORANA_IDS:
        raise ValueError(f"solution {spec.id} is not a Majorana solution")
    grid = grid or Grid()
    r, th = _mesh(grid)
    mass = spec.m if m is None else m
    d = _Derivs(mode, h, scheme, Domain())
    g = spec.profiles.g(r, th)
    a_r, a_t = d(spec.profiles.a, r, th)
    g_r, g_t = d(spec.profiles.g, r, th)
    X = r * g_r - np.cos(th) / np.sin(th) - a_t
    Y = 2 + g_t + r * a_r
    out = {
        "diag1": X - 2 * mass * r * np.cos(g),
        "diag2": Y - 2 * mass * r * np.sin(g),
        "pair1": np.cos(g) * X + np.sin(g) * Y - 2 * mass * r,
        "pair2": np.cos(g) * Y - np.sin(g) * X,
    }
    info = {"k": spec.k if k is None else k}
    if mode == "analytic":
        out.update(_tensor_majorana(spec, r, th, mass, info["k"]))
    checks = {name: Stats.of(v) for name, v in out.items()}
    return ResidualReport(checks, _TOL[mode] if tol is None else tol, mode, grid, info)


def _tensor_majorana(spec: SolutionSpec, r, th, m: float, k: float) -> dict[str, np.ndarray]:
    bg = example2_background(spec.profiles, k)
    b = bilinears(SINGULAR_CONSTANT, build_gamma_basis())
    m1, m2 = [], []
    for rr, tt in zip(r.ravel(), th.ravel()):
        R_l = np.einsum("ijm,km->ijk", bg.tensorial_connection_lorentz(rr, tt), bg.frame(rr, tt))
        eq = majorana_equations(R_l, b.vector, b.tensor, m)
        scale = _scale(R_l)
        m1.append(eq["m1"] / scale)
        m2.append(eq["m2"] / scale)
    return {"m1": np.array(m1), "m2": np.array(m2)}


def residual_order(spec: SolutionSpec, grid: Grid | None = None, h: float = 1e-3, scheme: str = "central2") -> dict:
    """Ratio of FD residual maxima at h and h/2 per equation (4 for second order).

    Equations whose residual at h is already below 1e-11 are dominated by
    rounding (the stencil is exact on them) and reported as ``None``.
    """
    fn = majorana_polar_residuals if spec.kind == "majorana" else regular_polar_residuals
    coarse = fn(spec, grid, "fd", h, scheme)
    fine = fn(spec, grid, "fd", h / 2, scheme)
    out = {}
    for name, st in coarse.checks.items():
        out[name] = None if st.max < 1e-11 else st.max / max(fine[name].max, 1e-300)
    return out


# --- spinor-level check --------------------------------------------------------


def spinor_field(spec: SolutionSpec, basis: GammaBasis | None = None) -> Callable:
    """The full spinor in the background's frame as a function of (t, r, theta, phi).

    The Goldstone gradient of the background is constant, so the frame part
    integrates to exp(-x^mu K_mu) with K_mu = G_{ij mu} sigma^ij / 2 + i P_mu.
    """
    basis = basis or build_gamma_basis()
    bg = spec.background()
    G = bg.goldstone_gradient()
    P = np.array([spec.momentum_t, 0.0, 0.0, 0.0])
    K = [0.5 * basis.sigma_contract(G[:, :, mu]) + 1j * P[mu] * np.eye(4) for mu in range(4)]
    if spec.kind == "majorana":

        def psi(x):
            return expm(-(x[0] * K[0] + x[3] * K[3])) @ SINGULAR_CONSTANT

        return psi

    def psi(x):
        r, th = x[1], x[2]
        phi = np.sqrt(np.exp(spec.ln_phi2(r, th)))
        rot = chiral_rotation(float(spec.beta(r, th)), basis)
        return phi * rot @ expm(-(x[0] * K[0] + x[3] * K[3])) @ REGULAR_CONSTANT

    return psi


def dirac_equivalence_check(
    spec: SolutionSpec,
    grid: Grid | None = None,
    h: float = 1e-3,
    scheme: str = "central4",
    tol: float = 1e-5,
    t: float = 0.3,
    phi: float = 0.2,
) -> ResidualReport:
    """Rebuild the spinor from its polar data and evaluate the Dirac operator on it.

    Also confirms that the frame-projected tensorial connection plus the spin
    connection reproduces the constant Goldstone gradient used to build the
    spinor (``goldstone``).
    """
    basis = build_gamma_basis()
    grid = grid or Grid(16, 16)
    bg = spec.background()
    psi = spinor_field(spec, basis)
    G = bg.goldstone_gradient()
    gold, dirac = [], []
    for r, th in grid.points():
        omega = bg.spin_connection(r, th)
        gold.append(np.max(np.abs(bg.tensorial_connection_lorentz(r, th) + omega - G)) / _scale(omega))
        x = np.array([t, r, th, phi])
        res = spinor_dirac_residual(psi, bg.omega_field(), bg.tetrad, x, basis, spec.m, h, scheme=scheme)
        dirac.append(np.max(np.abs(res)))
    checks = {"goldstone": Stats.of(gold), "dirac": Stats.of(dirac)}
    return ResidualReport(checks, tol, "fd", grid, {"h": h, "scheme": scheme})


# --- probes ------------------------------------------------------------------


@dataclass(frozen=True)
class IntegralProbe:
    id: int
    r_max: tuple[float, ...]
    values: tuple[float, ...]

    @property
    def relative_change(self) -> float:
        return abs(self.values[-1] - self.values[-2]) / abs(self.values[-2])

    @property
    def converged(self) -> bool:
        """Stable to 1% under the last doubling of the outer radius."""
        return self.relative_change < 0.01

    @property
    def diverging(self) -> bool:
        v = np.asarray(self.values)
        return bool(np.all(np.diff(v) > 0) and self.relative_change >= 0.01)


def volume_density(spec: SolutionSpec) -> Callable:
    """psi^dagger psi sqrt|g| in the frame: 2 phi^2 r^2 sin(theta), or r^2 sin(theta) for Majorana."""
    if spec.kind == "majorana":
        return lambda r, th: r * r * np.sin(th)
    return lambda r, th: 2.0 * spec.density(r, th)


def square_integrability_probe(
    spec: SolutionSpec, r_max: tuple[float, ...] = (10.0, 20.0, 40.0), r0: float = 0.05
) -> IntegralProbe:
    """Integral of the density over r0 < r < R, 0 < theta < pi, 0 < phi < 2 pi."""
    dens = volume_density(spec)
    vals = []
    for Rm in r_max:
        val, _ = integrate.dblquad(lambda th, r: float(dens(r, th)), r0, Rm, 0.0, np.pi, epsabs=1e-10, epsrel=1e-8)
        vals.append(2 * np.pi * val)
    return IntegralProbe(spec.id, tuple(r_max), tuple(vals))


def regularity_probe(spec: SolutionSpec, r_min: float = 0.05, r_ref: float = 0.2, n: int = 64) -> dict:
    """Sup of the density near the origin compared with its sup on the reference shell."""
    r = np.linspace(r_min, r_ref, n)
    th = np.linspace(0.05, np.pi - 0.05, n)
    rr, tt = np.meshgrid(r, th, indexing="ij")
    dens = np.exp(spec.F(rr, tt))
    inner, shell = float(np.max(dens)), float(np.max(dens[-1]))
    return {"inner_max": inner, "shell_max": shell, "bounded": bool(np.isfinite(inner) and inner <= 10 * shell)}


def integrability_probe(g: Profile, grid: Grid | None = None) -> ResidualReport:
    """Constraint cos g (1 + g_theta) = sin g r g_r and harmonicity of g."""
    grid = grid or Grid()
    r, th = _mesh(grid)
    gv = g(r, th)
    g_r, g_t = g.grad(r, th)
    g_rr, _, g_tt = g.hessian(r, th)
    checks = {
        "constraint": Stats.of(np.cos(gv) * (1 + g_t) - np.sin(gv) * r * g_r),
        "harmonic": Stats.of(g_tt + r * g_r + r * r * g_rr),
    }
    return ResidualReport(checks, 1e-12, "analytic", grid)
