"""Scalar profiles of (r, theta) with exact derivatives via sympy."""

from __future__ import annotations

from functools import cached_property
from typing import Callable

import numpy as np
import sympy as sp

R, THETA = sp.symbols("r theta", positive=True)


def _compile(expr: sp.Expr) -> Callable:
    f = sp.lambdify((R, THETA), expr, "numpy")
    return lambda r, th: np.asarray(f(r, th), dtype=float) + np.zeros(np.broadcast(r, th).shape)


class Profile:
    """A smooth function of (r, theta).

    Values and derivatives come from one sympy expression. ``value`` may
    override the numeric evaluation (for branch-lifted quantities) and
    ``grad`` may supply the two first derivatives explicitly when the
    expression itself is not differentiable everywhere.
    """

    def __init__(self, expr, value: Callable | None = None, grad: tuple | None = None, name: str = ""):
        self.expr = sp.sympify(expr, locals={"r": R, "theta": THETA})
        self.name = name
        self._value = value
        self._grad_exprs = tuple(sp.sympify(g, locals={"r": R, "theta": THETA}) for g in grad) if grad else None

    def __repr__(self) -> str:
        return f"Profile({self.expr})"

    @cached_property
    def first(self) -> tuple[sp.Expr, sp.Expr]:
        if self._grad_exprs is not None:
            return self._grad_exprs
        return sp.diff(self.expr, R), sp.diff(self.expr, THETA)

    @cached_property
    def _f(self):
        return self._value or _compile(self.expr)

    @cached_property
    def _df(self):
        return tuple(_compile(e) for e in self.first)

    @cached_property
    def _d2f(self):
        dr, dth = self.first
        return tuple(_compile(e) for e in (sp.diff(dr, R), sp.diff(dr, THETA), sp.diff(dth, THETA)))

    def __call__(self, r, theta):
        return self._f(r, theta)

    def grad(self, r, theta) -> tuple[np.ndarray, np.ndarray]:
        return self._df[0](r, theta), self._df[1](r, theta)

    def hessian(self, r, theta) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(d_rr, d_r d_theta, d_theta theta)."""
        return tuple(f(r, theta) for f in self._d2f)

    def __add__(self, other) -> "Profile":
        other = other.expr if isinstance(other, Profile) else other
        return Profile(self.expr + sp.sympify(other, locals={"r": R, "theta": THETA}))

    @classmethod
    def constant(cls, c: float) -> "Profile":
        return cls(sp.Float(c))


def random_profile(rng: np.random.Generator, scale: float = 0.3) -> Profile:
    """Low-order trigonometric/polynomial draw, used for flatness sweeps."""
    c = rng.uniform(-scale, scale, size=5)
    expr = (
        c[0]
        + c[1] * R
        + c[2] * R * sp.sin(THETA)
        + c[3] * sp.cos(THETA)
        + c[4] * R**2 * sp.cos(THETA) / 4
    )
    return Profile(expr)
