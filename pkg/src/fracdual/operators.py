"""Dense matrix forms of the two fractional-derivative representations.

Row k of an operator matrix reproduces the corresponding scalar
quadrature at t = k*h applied to stencil-reconstructed derivative
samples of the grid function, so a matrix-vector product evaluates
D^alpha u at every node at once. The solver reuses these across Newton
iterations; they are cached per (method, effective order, h, m).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .caputo import FractionalOrder, MethodKind, power_weights
from .special_functions import gamma
from .stencils import difference_matrix_3pt, differentiation_matrix

__all__ = ["fractional_operator", "substitution_weight_matrix", "byparts_weight_parts"]


@lru_cache(maxsize=64)
def substitution_weight_matrix(effective: float, n: int, h: float, m: int) -> np.ndarray:
    """Lower-triangular W with (W g)_k = substitution quadrature of g at x_k.

    Row coefficients are the trapezoid weights of the transformed
    integral regrouped per sample: interior samples get
    (w[i+1]-w[i-1])/2 by distance i = k-j, the endpoints get
    (w[k]-w[k-1])/2 and w[1]/2.
    """
    p = n - effective
    w = power_weights(p, h, m)
    a = np.zeros(m + 1)
    if m >= 2:
        a[1:m] = 0.5 * (w[2 : m + 1] - w[0 : m - 1])
    idx = np.arange(m + 1)
    dist = idx[:, None] - idx[None, :]
    W = np.where(dist >= 1, a[np.clip(dist, 0, m)], 0.0)
    ks = np.arange(1, m + 1)
    W[ks, 0] = 0.5 * (w[ks] - w[ks - 1])
    W[ks, ks] = 0.5 * w[1]
    W /= gamma(n + 1 - effective)
    W.setflags(write=False)
    return W


@lru_cache(maxsize=64)
def byparts_weight_parts(effective: float, n: int, h: float, m: int) -> tuple[np.ndarray, np.ndarray]:
    """(boundary column c, interior matrix P) of the by-parts quadrature.

    Row k of the full rule is c[k]*g(0) + (P d)_k where g = f^(n) and
    d = f^(n+1) samples: c[k] = w[k]/Gamma, P[k,0] = (h/2) w[k]/Gamma,
    P[k,j] = h*w[k-j]/Gamma for 1 <= j <= k-1, and the x = t node is
    absent (zero weight).
    """
    p = n - effective
    w = power_weights(p, h, m)
    g = gamma(n + 1 - effective)
    idx = np.arange(m + 1)
    dist = idx[:, None] - idx[None, :]
    mask = (dist >= 1) & (idx[None, :] >= 1)
    P = np.where(mask, h * w[np.clip(dist, 0, m)], 0.0)
    P[:, 0] = 0.5 * h * w
    P /= g
    c = w / g
    P.setflags(write=False)
    c.setflags(write=False)
    return c, P


@lru_cache(maxsize=64)
def fractional_operator(method: MethodKind, effective: float, n: int, h: float, m: int) -> np.ndarray:
    """(m+1)x(m+1) matrix A with (A u)_k = D^alpha u(x_k) under ``method``.

    Substitution applies the weight matrix to S_n u. By-parts applies the
    trapezoid weights to three-point first differences of S_n u (its
    summation-by-parts dual form) with the boundary term anchored at
    (S_n u)(0); only node 0 of S_n's one-sided rows enters that term.
    """
    Sn = differentiation_matrix(m, h, n)
    if method is MethodKind.SUBSTITUTION:
        A = substitution_weight_matrix(effective, n, h, m) @ Sn
    else:
        c, P = byparts_weight_parts(effective, n, h, m)
        D = difference_matrix_3pt(m, h)
        A = np.outer(c, Sn[0, :]) + P @ (D @ Sn)
    A.setflags(write=False)
    return A


def operator_for(method: MethodKind, order: FractionalOrder, h: float, m: int) -> np.ndarray:
    return fractional_operator(method, order.effective, order.n, h, m)
