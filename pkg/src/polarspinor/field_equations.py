"""Polar form of the Dirac equations, written entirely with Lorentz indices.

Conventions shared by every function here:

* ``R[i, j, k]`` is the tensorial connection with all three indices lowered
  and projected on the frame (the derivative index is the third one).
* Covectors (``P``, ``W``, gradients) are lower-index arrays of length 4.
* ``u``, ``s``, ``U`` are upper-index vectors and ``M`` is the upper-index
  antisymmetric tensor bilinear.

Antisymmetrisation brackets carry unit weight: ``x_[a y_b] = x_a y_b - x_b y_a``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import ETA, levi_civita

EPS = levi_civita()  # lower indices, eps_0123 = +1
EPS_UP = -EPS


@dataclass(frozen=True)
class Reduced:
    """Trace ``R_i = R_{ij}^j`` and dual ``B_i = eps_{ijkl} R^{jkl} / 2``, lower index."""

    trace: np.ndarray
    dual: np.ndarray


def reduce_connection(R: np.ndarray) -> Reduced:
    R = np.asarray(R, dtype=float)
    trace = np.einsum("ijk,jk->i", R, ETA)
    up = np.einsum("ijk,ia,jb,kc->abc", R, ETA, ETA, ETA)
    return Reduced(trace, 0.5 * np.einsum("iabc,abc->i", EPS, up))


def _zeros(v):
    return np.zeros(4) if v is None else np.asarray(v, dtype=float)


def _pair(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.outer(x, y) - np.outer(y, x)


# --- regular spinors ---------------------------------------------------------


def regular_equations(
    R: np.ndarray,
    P,
    u: np.ndarray,
    s: np.ndarray,
    m: float,
    beta: float = 0.0,
    d_beta=None,
    d_ln_phi2=None,
    W=None,
    X: float = 0.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Residuals of the two vector equations that fix d(beta) and d(ln phi^2)."""
    red = reduce_connection(R)
    P = _zeros(P)
    P_up = ETA @ P
    u_low, s_low = ETA @ u, ETA @ s
    dep1 = red.dual - 2 * P_up @ _pair(u_low, s_low) + _zeros(d_beta) - 2 * X * _zeros(W) + 2 * s_low * m * np.cos(beta)
    dep2 = (
        red.trace
        - 2 * np.einsum("mrna,r,n,a->m", EPS, P_up, u, s)
        + 2 * s_low * m * np.sin(beta)
        + _zeros(d_ln_phi2)
    )
    return dep1, dep2


# --- singular spinors --------------------------------------------------------


def singular_equations(
    R: np.ndarray,
    P,
    U: np.ndarray,
    M: np.ndarray,
    m: float,
    alpha: float,
    d_alpha=None,
    W=None,
    X: float = 0.0,
    cos_tol: float = 1e-12,
) -> dict[str, np.ndarray]:
    """The four equations of a singular spinor with chiral degree ``alpha``.

    At cos(alpha) = 0 the secant terms are undefined: massless input is
    handed to :func:`weyl_equations`, anything else is rejected.
    """
    if abs(np.cos(alpha)) < cos_tol:
        if m != 0.0:
            raise ValueError("alpha = +-pi/2 requires m = 0 (Weyl spinor)")
        return weyl_equations(R, P, U, W=W, X=X, helicity=int(np.sign(np.sin(alpha))))
    red = reduce_connection(R)
    P, da = _zeros(P), _zeros(d_alpha)
    P_up, da_up = ETA @ P, ETA @ da
    U_low, M_low = ETA @ U, ETA @ M @ ETA
    sec, tan = 1.0 / np.cos(alpha), np.tan(alpha)
    V_up = ETA @ (2 * X * _zeros(W) - red.dual)

    # T_{mu rho nu}, shared by the first two equations
    T = (
        np.einsum("s,smrn->mrn", V_up, EPS)
        + np.einsum("m,rn->mrn", red.trace, ETA)
        - np.einsum("r,mn->mrn", red.trace, ETA)
        + tan * (np.einsum("nm,r->mrn", ETA, da) - np.einsum("nr,m->mrn", ETA, da))
    )
    dual_M = np.einsum("hz,mrhz->mr", M_low, EPS_UP)
    f1 = np.einsum("mrn,mr->n", T, dual_M)
    f2 = np.einsum("mrn,mr->n", T, M) + 4 * m * U_low
    A3 = sec * np.einsum("mrsn,m->rsn", EPS_UP, da) - 2 * (
        np.einsum("r,sn->rsn", P_up, ETA) - np.einsum("s,rn->rsn", P_up, ETA)
    )
    f3 = np.einsum("rsn,rs->n", A3, M_low)
    A4 = sec * (np.einsum("nr,s->rsn", ETA, da_up) - np.einsum("ns,r->rsn", ETA, da_up)) - 2 * np.einsum(
        "m,mrsn->rsn", P, EPS_UP
    )
    f4 = np.einsum("rs,rsn->n", M_low, A4) + 4 * m * np.sin(alpha) * U
    return {"f1": f1, "f2": f2, "f3": f3, "f4": f4}


def majorana_equations(R: np.ndarray, U: np.ndarray, M: np.ndarray, m: float) -> dict[str, np.ndarray]:
    """The two Majorana equations; no momentum and no torsion enter."""
    red = reduce_connection(R)
    R_up = ETA @ red.trace
    M_low = ETA @ M @ ETA
    gB = np.einsum("sp,k->spk", ETA, red.dual) - np.einsum("sk,p->spk", ETA, red.dual)
    m1 = np.einsum("spk,pk->s", gB - np.einsum("m,mspk->spk", R_up, EPS), M)
    gR = np.einsum("sp,k->spk", ETA, R_up) - np.einsum("sk,p->spk", ETA, R_up)
    m2 = 0.5 * np.einsum("spk,pk->s", np.einsum("m,mspk->spk", red.dual, EPS_UP) + gR, M_low) - 2 * m * U
    return {"m1": m1, "m2": m2}


def weyl_equations(R: np.ndarray, P, U: np.ndarray, W=None, X: float = 0.0, helicity: int = 1) -> dict[str, np.ndarray]:
    """Massless singular equations; ``helicity`` is the sign of alpha = +-pi/2."""
    if helicity not in (1, -1):
        raise ValueError("helicity must be +1 or -1")
    red = reduce_connection(R)
    U_low = ETA @ U
    R_up = ETA @ red.trace
    V = -red.dual + 2 * X * _zeros(W) + 2 * helicity * _zeros(P)
    w3 = np.einsum("m,mran,r->an", V, EPS_UP, U_low) + np.outer(U, R_up) - np.outer(R_up, U)
    return {"w1": np.atleast_1d(red.trace @ U), "w2": np.atleast_1d(V @ U), "w3": w3}
