"""The two explicit flat tetrad backgrounds and their tensorial-connection blocks.

Both backgrounds are parametrised by a rapidity profile ``a(r, theta)`` and
an angle profile ``g(r, theta)``. Example 1 carries the integration constant
``constant`` = epsilon and is adapted to regular spinors; Example 2 carries
``constant`` = k (plus an optional second constant ``b``) and is adapted to
Majorana spinors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .fd import DEFAULT_DOMAIN, gradient
from .geometry import (
    EPSILON,
    ETA,
    Grid,
    TetradField,
    _check_point,
    christoffel,
    coordinate_to_lorentz,
    lorentz_to_coordinate,
    inverse_metric,
)
from .profiles import Profile

T, RR, TH, PH = range(4)


@dataclass(frozen=True)
class ProfilePair:
    a: Profile
    g: Profile

    @classmethod
    def trivial(cls) -> "ProfilePair":
        """a = 0, g = -theta: the configuration with vanishing Example-1 connection."""
        return cls(Profile(0), Profile("-theta"))


@dataclass(frozen=True)
class ReducedComponents:
    """Trace and dual parts of the tensorial connection, lower coordinate index."""

    R_vec: np.ndarray
    B_vec: np.ndarray


def _antisym(arr: np.ndarray, i: int, j: int, mu: int, value) -> None:
    arr[i, j, mu] = value
    arr[j, i, mu] = -value


@dataclass(frozen=True)
class Background:
    example_id: int
    profiles: ProfilePair
    constant: float = 0.0
    b: float = 0.0
    winding: float = 0.0
    domain: object = field(default=DEFAULT_DOMAIN, repr=False)

    def __post_init__(self):
        if self.example_id not in (1, 2):
            raise ValueError("example_id must be 1 or 2")
        if self.example_id == 1 and self.b != 0.0:
            raise ValueError("the second integration constant b only exists for Example 2")
        if self.example_id == 2 and self.winding != 0.0:
            raise ValueError("the azimuthal winding is only used with Example 1")

    # -- profile access --

    def _prof(self, r, th):
        _check_point(r, th)
        a, g = self.profiles.a(r, th), self.profiles.g(r, th)
        da = self.profiles.a.grad(r, th)
        dg = self.profiles.g.grad(r, th)
        return float(a), float(g), tuple(map(float, da)), tuple(map(float, dg))

    # -- tetrads --

    def coframe(self, r, th) -> np.ndarray:
        """xi^a_mu indexed [a, mu]."""
        a, g, _, _ = self._prof(r, th)
        ch, sh, s = np.cosh(a), np.sinh(a), np.sin(th)
        boost, rot1, rot2 = (2, 1, 3) if self.example_id == 1 else (3, 2, 1)
        e = np.zeros((4, 4))
        e[0, T], e[boost, T] = ch, sh
        e[rot1, RR], e[rot2, RR] = np.sin(g), -np.cos(g)
        e[rot1, TH], e[rot2, TH] = -r * np.cos(g), -r * np.sin(g)
        e[0, PH], e[boost, PH] = r * s * sh, r * s * ch
        return e

    def frame(self, r, th) -> np.ndarray:
        """Dual xi_a^mu indexed [a, mu], written out in closed form."""
        a, g, _, _ = self._prof(r, th)
        ch, sh, s = np.cosh(a), np.sinh(a), np.sin(th)
        boost, rot1, rot2 = (2, 1, 3) if self.example_id == 1 else (3, 2, 1)
        E = np.zeros((4, 4))
        E[0, T], E[boost, T] = ch, -sh
        E[rot1, RR], E[rot2, RR] = np.sin(g), -np.cos(g)
        E[rot1, TH], E[rot2, TH] = -np.cos(g) / r, -np.sin(g) / r
        E[0, PH], E[boost, PH] = -sh / (r * s), ch / (r * s)
        return E

    @property
    def tetrad(self) -> TetradField:
        return TetradField(lambda x: self.coframe(x[1], x[2]), lambda x: self.frame(x[1], x[2]))

    # -- connections --

    def spin_connection(self, r, th) -> np.ndarray:
        """Omega_{ab mu} from the closed-form lists."""
        a, g, (dra, dta), (drg, dtg) = self._prof(r, th)
        ch, sh = np.cosh(a), np.sinh(a)
        c, s = np.cos(th + g), np.sin(th + g)
        W = np.zeros((4, 4, 4))
        if self.example_id == 1:
            _antisym(W, 0, 2, RR, -dra)
            _antisym(W, 1, 3, RR, -drg)
            _antisym(W, 0, 2, TH, -dta)
            _antisym(W, 1, 3, TH, -(1 + dtg))
            _antisym(W, 0, 1, PH, -c * sh)
            _antisym(W, 0, 3, PH, -s * sh)
            _antisym(W, 2, 3, PH, s * ch)
            _antisym(W, 1, 2, PH, -c * ch)
        else:
            _antisym(W, 0, 3, RR, -dra)
            _antisym(W, 2, 1, RR, -drg)
            _antisym(W, 0, 3, TH, -dta)
            _antisym(W, 2, 1, TH, -(1 + dtg))
            _antisym(W, 0, 2, PH, -c * sh)
            _antisym(W, 0, 1, PH, -s * sh)
            _antisym(W, 3, 1, PH, s * ch)
            _antisym(W, 2, 3, PH, -c * ch)
        return W

    def omega_field(self) -> Callable:
        return lambda x: self.spin_connection(x[1], x[2])

    def goldstone_gradient(self) -> np.ndarray:
        """Constant d_mu xi_ij (Lorentz pair lowered).

        Along t it carries the integration constants of the R-blocks; a
        nonzero ``winding`` adds d_phi xi_12 = -winding, which with a = 0,
        g = -theta cancels the whole spin connection.
        """
        G = np.zeros((4, 4, 4))
        if self.example_id == 1:
            _antisym(G, 1, 2, T, 2 * self.constant)
            _antisym(G, 1, 2, PH, -self.winding)
        else:
            _antisym(G, 2, 0, T, self.constant)
            _antisym(G, 2, 3, T, self.constant)
            _antisym(G, 1, 0, T, -self.b)
            _antisym(G, 1, 3, T, -self.b)
        return G

    def tensorial_connection(self, r, th) -> np.ndarray:
        """R_{alpha beta mu}, all coordinate indices, from the closed-form component lists."""
        a, g, (dra, dta), (drg, dtg) = self._prof(r, th)
        s, c = np.sin(th), np.cos(th)
        R = np.zeros((4, 4, 4))
        _antisym(R, T, PH, TH, r * s * dta)
        _antisym(R, T, PH, RR, r * s * dra)
        _antisym(R, RR, TH, TH, -r * (1 + dtg))
        _antisym(R, TH, RR, RR, r * drg)
        _antisym(R, RR, PH, PH, -r * s * s)
        _antisym(R, TH, PH, PH, -r * r * c * s)
        if self.example_id == 1:
            eps = self.constant
            _antisym(R, RR, T, T, 2 * eps * np.sinh(a) * np.sin(g))
            _antisym(R, PH, RR, T, -2 * eps * r * s * np.cosh(a) * np.sin(g))
            _antisym(R, TH, T, T, -2 * eps * r * np.sinh(a) * np.cos(g))
            _antisym(R, PH, TH, T, 2 * eps * r * r * s * np.cosh(a) * np.cos(g))
        else:
            A, B = self.k_block(r, th)
            _antisym(R, RR, T, T, A)
            _antisym(R, TH, T, T, r * B)
            _antisym(R, RR, PH, T, A * r * s)
            _antisym(R, TH, PH, T, B * r * r * s)
        if self.winding:
            extra = np.zeros((4, 4, 4))
            _antisym(extra, 1, 2, PH, -self.winding)
            R = R + lorentz_to_coordinate(extra, self.coframe(r, th))
        return R

    def k_block(self, r, th) -> tuple[float, float]:
        """Example 2 auxiliary pair (A, B) fixed by the two integration constants."""
        a, g, _, _ = self._prof(r, th)
        ea = np.exp(a)
        return ea * (self.constant * np.sin(g) + self.b * np.cos(g)), ea * (self.b * np.sin(g) - self.constant * np.cos(g))

    def tensorial_field(self) -> Callable:
        return lambda x: self.tensorial_connection(x[1], x[2])

    def tensorial_connection_lorentz(self, r, th) -> np.ndarray:
        return coordinate_to_lorentz(self.tensorial_connection(r, th), self.frame(r, th))

    # -- bilinear vectors adapted to the frame --

    def velocity(self, r, th) -> np.ndarray:
        """Example 1 u_mu."""
        self._require(1)
        a, _, _, _ = self._prof(r, th)
        return np.array([np.cosh(a), 0.0, 0.0, r * np.sin(th) * np.sinh(a)])

    def spin(self, r, th) -> np.ndarray:
        """Example 1 s_mu."""
        self._require(1)
        _, g, _, _ = self._prof(r, th)
        return np.array([0.0, np.cos(g), r * np.sin(g), 0.0])

    def null_vector(self, r, th) -> np.ndarray:
        """Example 2 U_mu."""
        self._require(2)
        a, _, _, _ = self._prof(r, th)
        return np.exp(a) * np.array([1.0, 0.0, 0.0, r * np.sin(th)])

    def tensor(self, r, th) -> np.ndarray:
        """Example 2 M_{mu nu}."""
        self._require(2)
        a, g, _, _ = self._prof(r, th)
        ea, s = np.exp(a), np.sin(th)
        M = np.zeros((4, 4))
        M[T, RR] = -ea * np.sin(g)
        M[RR, PH] = ea * r * s * np.sin(g)
        M[T, TH] = ea * r * np.cos(g)
        M[TH, PH] = -ea * r * r * s * np.cos(g)
        return M - M.T

    def _require(self, example_id: int) -> None:
        if self.example_id != example_id:
            raise ValueError(f"quantity only defined for Example {example_id}")

    # -- reduced components --

    def reduced_components(self, r, th) -> ReducedComponents:
        """Closed forms of R_mu and B_mu; only the r and theta components survive."""
        if self.winding:
            return reduced_from_tensor(self.tensorial_connection_lorentz(r, th), self.frame(r, th), self.coframe(r, th))
        a, g, (dra, dta), (drg, dtg) = self._prof(r, th)
        if self.example_id == 1:
            eps = self.constant
            sr = 2 * eps * np.sinh(a)
            cb = 2 * eps * np.cosh(a)
            tr_r, tr_t = sr * np.sin(g), -sr * r * np.cos(g)
            du_r, du_t = cb * np.cos(g), cb * r * np.sin(g)
        else:
            A, B = self.k_block(r, th)
            tr_r, tr_t = A, r * B
            du_r, du_t = -B, r * A
        R_vec = np.array([0.0, tr_r + (2 + dtg) / r, tr_t - r * drg + np.cos(th) / np.sin(th), 0.0])
        B_vec = np.array([0.0, du_r + dta / r, du_t - r * dra, 0.0])
        return ReducedComponents(R_vec, B_vec)


def example1_background(profiles: ProfilePair, eps: float, winding: float = 0.0) -> Background:
    return Background(1, profiles, float(eps), winding=float(winding))


def example2_background(profiles: ProfilePair, k: float, b: float = 0.0) -> Background:
    return Background(2, profiles, float(k), float(b))


def reduced_from_tensor(R_lorentz: np.ndarray, frame: np.ndarray, coframe: np.ndarray) -> ReducedComponents:
    """R_i = R_{ij}^j and B_i = eps_ijkl R^{jkl} / 2 from R_{ij mu}, returned with coordinate index."""
    Rl = np.einsum("ijm,km->ijk", R_lorentz, frame)  # all Lorentz, lowered
    trace = np.einsum("ijk,jk->i", Rl, ETA)
    Rup = np.einsum("ijk,ia,jb,kc->abc", Rl, ETA, ETA, ETA)
    dual = 0.5 * np.einsum("iabc,abc->i", EPSILON, Rup)
    return ReducedComponents(coframe.T @ trace, coframe.T @ dual)


def reduced_components(bg: Background, point) -> ReducedComponents:
    """``point`` is either (r, theta) or a full coordinate 4-vector."""
    r, th = (point[1], point[2]) if len(point) == 4 else point
    return bg.reduced_components(float(r), float(th))


# --- consistency relations ---------------------------------------------------

# Each relation reads  left = right * T  with T in {tan g, tanh a, 1}.
# ``i`` maps names to coordinate indices for readability.
_I = {"t": T, "r": RR, "th": TH, "ph": PH}


def _c(R, name: str):
    a, b, m = (_I[p] for p in name.split(","))
    return R[a, b, m]


def _example1_relations():
    rels = [
        ("dA1", lambda R, r, s, c, da, dg: r * s * da[1], lambda R, *_: _c(R, "t,ph,th"), "one"),
        ("dA2", lambda R, r, s, c, da, dg: r * s * da[0], lambda R, *_: _c(R, "t,ph,r"), "one"),
        ("dA3", lambda R, r, s, c, da, dg: -r * (1 + dg[1]), lambda R, *_: _c(R, "r,th,th"), "one"),
        ("dA4", lambda R, r, s, c, da, dg: r * dg[0], lambda R, *_: _c(R, "th,r,r"), "one"),
        ("aux1", lambda R, r, *_: r * _c(R, "r,t,ph"), lambda R, *_: _c(R, "t,th,ph"), "tan"),
        (
            "aux2",
            lambda R, r, s, *_: r * s * _c(R, "t,th,ph"),
            lambda R, r, s, c, *_: _c(R, "ph,th,ph") - r * r * c * s,
            "tanh",
        ),
        (
            "aux3",
            lambda R, r, s, *_: r * (_c(R, "r,ph,ph") + r * s * s),
            lambda R, r, s, c, *_: _c(R, "ph,th,ph") - r * r * s * c,
            "tan",
        ),
        (
            "aux4",
            lambda R, r, s, *_: r * s * _c(R, "r,t,ph"),
            lambda R, r, s, *_: _c(R, "r,ph,ph") + r * s * s,
            "tanh",
        ),
    ]
    for mu in ("t", "r", "th"):
        rels += [
            (f"block_{mu}_1", lambda R, r, *_, mu=mu: r * _c(R, f"r,t,{mu}"), lambda R, *_, mu=mu: _c(R, f"t,th,{mu}"), "tan"),
            (
                f"block_{mu}_2",
                lambda R, r, s, *_, mu=mu: r * s * _c(R, f"t,th,{mu}"),
                lambda R, *_, mu=mu: _c(R, f"ph,th,{mu}"),
                "tanh",
            ),
            (f"block_{mu}_3", lambda R, r, *_, mu=mu: r * _c(R, f"r,ph,{mu}"), lambda R, *_, mu=mu: _c(R, f"ph,th,{mu}"), "tan"),
            (
                f"block_{mu}_4",
                lambda R, r, s, *_, mu=mu: r * s * _c(R, f"r,t,{mu}"),
                lambda R, *_, mu=mu: _c(R, f"r,ph,{mu}"),
                "tanh",
            ),
        ]
    return rels


def _example2_relations():
    rels = [
        ("dB1", lambda R, r, s, c, da, dg: r * s * da[1], lambda R, *_: _c(R, "t,ph,th"), "one"),
        ("dB2", lambda R, r, s, c, da, dg: r * s * da[0], lambda R, *_: _c(R, "t,ph,r"), "one"),
        ("dB3", lambda R, r, s, c, da, dg: -r * (1 + dg[1]), lambda R, *_: _c(R, "r,th,th"), "one"),
        ("dB4", lambda R, r, s, c, da, dg: r * dg[0], lambda R, *_: _c(R, "th,r,r"), "one"),
        ("bux1", lambda R, r, s, *_: -r * s * s - r * s * _c(R, "t,r,ph"), lambda R, *_: _c(R, "r,ph,ph"), "one"),
        ("bux2", lambda R, r, s, c, *_: -r * r * s * c - r * s * _c(R, "t,th,ph"), lambda R, *_: _c(R, "th,ph,ph"), "one"),
    ]
    pairs = [("r,t,t", "r,ph,t"), ("th,t,t", "th,ph,t"), ("t,r,r", "ph,r,r"),
             ("t,th,r", "ph,th,r"), ("t,th,th", "ph,th,th"), ("t,r,th", "ph,r,th")]
    for n, (lhs, rhs) in enumerate(pairs, start=1):
        rels.append(
            (f"sibling{n}", lambda R, r, s, *_, lhs=lhs: r * s * _c(R, lhs), lambda R, *_, rhs=rhs: _c(R, rhs), "one")
        )
    return rels


@dataclass(frozen=True)
class RelationResult:
    name: str
    max_deviation: float
    evaluated: int
    skipped: int
    passed: bool


@dataclass(frozen=True)
class ConsistencyReport:
    relations: tuple[RelationResult, ...]
    tol: float
    form: str

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.relations)

    def __getitem__(self, name: str) -> RelationResult:
        return next(r for r in self.relations if r.name == name)


def consistency_relations_check(
    bg: Background,
    grid: Grid,
    tol: float = 1e-9,
    tensorial: Callable | None = None,
    form: str = "cleared",
    skip_threshold: float = 1e12,
) -> ConsistencyReport:
    """Evaluate every component relation of the background on the grid.

    ``form="cleared"`` multiplies relations through by cos g (or cosh a), so
    points where tan g blows up are still tested. ``form="quotient"`` keeps
    the quotient and skips points whose coefficient exceeds ``skip_threshold``;
    skipped points never count as passes. ``tensorial`` overrides the
    background's R evaluator (used to inject deliberate corruption).
    """
    if form not in ("cleared", "quotient"):
        raise ValueError("form must be 'cleared' or 'quotient'")
    tens = tensorial or bg.tensorial_connection
    rels = _example1_relations() if bg.example_id == 1 else _example2_relations()
    worst = {n: 0.0 for n, *_ in rels}
    skipped = {n: 0 for n, *_ in rels}
    evaluated = {n: 0 for n, *_ in rels}
    for r, th in grid.points():
        R = tens(r, th)
        a, g, da, dg = bg._prof(r, th)
        args = (R, r, np.sin(th), np.cos(th), da, dg)
        for name, left, right, kind in rels:
            lv, rv = left(*args), right(*args)
            if kind == "one":
                dev = lv - rv
            elif form == "cleared":
                num, den = (np.sin(g), np.cos(g)) if kind == "tan" else (np.sinh(a), np.cosh(a))
                dev = lv * den - rv * num
            else:
                coef = np.tan(g) if kind == "tan" else np.tanh(a)
                if not np.isfinite(coef) or abs(coef) > skip_threshold:
                    skipped[name] += 1
                    continue
                dev = lv - rv * coef
            evaluated[name] += 1
            worst[name] = max(worst[name], abs(float(dev)))
    results = tuple(
        RelationResult(n, worst[n], evaluated[n], skipped[n], evaluated[n] > 0 and worst[n] <= tol) for n, *_ in rels
    )
    return ConsistencyReport(results, tol, form)


# --- transport ---------------------------------------------------------------


@dataclass(frozen=True)
class TransportReport:
    deviations: dict
    tol: float

    @property
    def passed(self) -> bool:
        return all(v <= self.tol for v in self.deviations.values())


def _covector_transport(field: Callable, R: np.ndarray, x, h, scheme) -> np.ndarray:
    """nabla_mu v_nu - R_{s nu mu} v^s, indexed [mu, nu]."""
    d = gradient(field, x, h, scheme, DEFAULT_DOMAIN, directions=(1, 2))
    G = christoffel(x[1], x[2])
    v = field(x)
    nab = d - np.einsum("knm,k->mn", G, v)
    v_up = inverse_metric(x[1], x[2]) @ v
    return nab - np.einsum("snm,s->mn", R, v_up)


def _bivector_transport(field: Callable, R: np.ndarray, x, h, scheme) -> np.ndarray:
    """nabla_mu M_ab + R_{ak mu} M^k_b - R_{bk mu} M^k_a, indexed [mu, a, b].

    Lower-index form of the Lorentz-index law; lowering commutes with nabla
    and keeps the components bounded near the origin.
    """
    d = gradient(field, x, h, scheme, DEFAULT_DOMAIN, directions=(1, 2))
    G = christoffel(x[1], x[2])
    M = field(x)
    nab = d - np.einsum("kam,kb->mab", G, M) - np.einsum("kbm,ak->mab", G, M)
    mixed = inverse_metric(x[1], x[2]) @ M  # M^k_b
    return nab + np.einsum("akm,kb->mab", R, mixed) - np.einsum("bkm,ka->mab", R, mixed)


def transport_check(
    bg: Background,
    grid: Grid,
    h: float = 1e-3,
    tol: float = 1e-6,
    scheme: str = "central4",
    tensorial: Callable | None = None,
) -> TransportReport:
    """FD check that the frame-adapted bilinears are carried by the tensorial connection.

    Deviations are absolute where the field gradient is O(1) and relative to
    its largest component elsewhere (the Example-2 fields grow like e^a).
    """
    tens = tensorial or bg.tensorial_connection
    if bg.example_id == 1:
        fields = {
            "velocity": ("co", lambda x: bg.velocity(x[1], x[2])),
            "spin": ("co", lambda x: bg.spin(x[1], x[2])),
        }
    else:
        fields = {
            "null_vector": ("co", lambda x: bg.null_vector(x[1], x[2])),
            "tensor": ("bi", lambda x: bg.tensor(x[1], x[2])),
        }
    dev = {k: 0.0 for k in fields}
    for r, th in grid.points():
        x = np.array([0.0, r, th, 0.0])
        R = tens(r, th)
        for name, (kind, f) in fields.items():
            res = _covector_transport(f, R, x, h, scheme) if kind == "co" else _bivector_transport(f, R, x, h, scheme)
            # same convention as matrix comparisons: relative once entries exceed 1
            scale = max(1.0, float(np.max(np.abs(gradient(f, x, h, scheme, DEFAULT_DOMAIN, directions=(1, 2))))))
            dev[name] = max(dev[name], float(np.max(np.abs(res))) / scale)
    return TransportReport(dev, tol)
