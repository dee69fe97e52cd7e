"""Central finite differences over the (t, r, theta, phi) chart."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

_STENCILS = {
    "central2": ((-1, -0.5), (1, 0.5)),
    "central4": ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12)),
}


@dataclass(frozen=True)
class Domain:
    """Admissible region for stencil points; t and phi are unrestricted."""

    r_min: float = 0.05
    r_max: float = np.inf
    theta_min: float = 0.05

    def __post_init__(self):
        if self.r_min < 0.05 or self.theta_min < 0.05:
            raise ValueError("domain must stay at least 0.05 away from r = 0 and the polar axis")

    def contains(self, x: np.ndarray) -> bool:
        r, th = x[1], x[2]
        return self.r_min <= r <= self.r_max and self.theta_min <= th <= np.pi - self.theta_min


DEFAULT_DOMAIN = Domain()


def fd_derivative(
    field: Callable[[np.ndarray], np.ndarray],
    point,
    direction: int,
    h: float = 1e-3,
    scheme: str = "central2",
    domain: Domain | None = DEFAULT_DOMAIN,
):
    """Derivative of ``field`` along one coordinate axis at ``point``.

    ``field`` maps a coordinate 4-vector to a scalar or array. Raises
    ValueError if any stencil point falls outside ``domain``.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    try:
        stencil = _STENCILS[scheme]
    except KeyError:
        raise ValueError(f"unknown scheme {scheme!r}") from None
    x = np.asarray(point, dtype=float)
    total = 0.0
    for k, w in stencil:
        xs = x.copy()
        xs[direction] += k * h
        if domain is not None and not domain.contains(xs):
            raise ValueError(f"stencil point {xs} leaves the domain")
        total = total + w * np.asarray(field(xs))
    return total / h


def gradient(field, point, h=1e-3, scheme="central2", domain=DEFAULT_DOMAIN, directions=range(4)) -> np.ndarray:
    """Stack of derivatives with the derivative index first; skipped axes are zero."""
    x = np.asarray(point, dtype=float)
    sample = np.asarray(field(x))
    out = np.zeros((4,) + sample.shape, dtype=sample.dtype if np.iscomplexobj(sample) else float)
    for mu in directions:
        out[mu] = fd_derivative(field, x, mu, h, scheme, domain)
    return out


def convergence_order(
    field, point, direction: int, exact=None, h: float = 1e-2, scheme: str = "central2", domain=DEFAULT_DOMAIN
) -> float:
    """Observed order from errors at h and h/2 (or successive differences if no exact value)."""
    d = [np.asarray(fd_derivative(field, point, direction, h / 2**k, scheme, domain)) for k in range(3)]
    if exact is not None:
        e1, e2 = np.max(np.abs(d[0] - exact)), np.max(np.abs(d[1] - exact))
    else:
        e1, e2 = np.max(np.abs(d[0] - d[1])), np.max(np.abs(d[1] - d[2]))
    return float(np.log2(e1 / e2))


def mesh_derivative(
    f: Callable, r, theta, axis: str, h: float = 1e-3, scheme: str = "central2", domain: Domain | None = DEFAULT_DOMAIN
):
    """Vectorised partial derivative of ``f(r, theta)`` along ``axis`` ("r" or "theta")."""
    if h <= 0:
        raise ValueError("h must be positive")
    if axis not in ("r", "theta"):
        raise ValueError("axis must be 'r' or 'theta'")
    try:
        stencil = _STENCILS[scheme]
    except KeyError:
        raise ValueError(f"unknown scheme {scheme!r}") from None
    r, theta = np.asarray(r, dtype=float), np.asarray(theta, dtype=float)
    reach = max(abs(k) for k, _ in stencil) * h
    if domain is not None:
        lo_r = r.min() - (reach if axis == "r" else 0.0)
        lo_t = theta.min() - (reach if axis == "theta" else 0.0)
        hi_t = theta.max() + (reach if axis == "theta" else 0.0)
        hi_r = r.max() + (reach if axis == "r" else 0.0)
        if lo_r < domain.r_min or hi_r > domain.r_max or lo_t < domain.theta_min or hi_t > np.pi - domain.theta_min:
            raise ValueError("stencil leaves the domain")
    total = 0.0
    for k, w in stencil:
        if axis == "r":
            total = total + w * np.asarray(f(r + k * h, theta))
        else:
            total = total + w * np.asarray(f(r, theta + k * h))
    return total / h
