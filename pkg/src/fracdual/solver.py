"""Implicit collocation solver for quasilinear fractional equations.

An equation sum_i K_i(u,x) D^(alpha_i) u(x) + f(x) = g(u(x)) on [0, T]
is discretized on the uniform grid x_k = k*h: one row per initial
condition, then one collocation row per remaining node, with the
fractional derivatives represented by the dense operators of either
method. The square nonlinear system is solved globally (all nodes at
once) by damped Newton with a forward-difference Jacobian and a dense
LU step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .caputo import FractionalOrder, GridFunction, MethodKind
from .expr import EvalDomainError, ExpressionTree, evaluate
from .operators import operator_for

__all__ = [
    "TermSpec",
    "EquationSpec",
    "SolverConfig",
    "Solution",
    "ConstraintPlan",
    "SolverDomainError",
    "ResidualDomainError",
    "grid_size",
    "collocation_layout",
    "assemble_residual",
    "solve",
]

# Converged means the residual is at the configured tolerance or at the
# rounding floor of its own evaluation: eps times the absolute-value sum
# that the residual cancellation runs over, with this safety factor.
RESIDUAL_FLOOR_FACTOR = 256.0

_FWD3 = np.array([-3.0, 4.0, -1.0])


class SolverDomainError(RuntimeError):
    """Expression domain errors blocked every damping level; cannot proceed."""


class ResidualDomainError(ValueError):
    """Expression domain error during residual assembly, tagged with the node."""

    def __init__(self, message: str, node: Optional[int]):
        where = f" at node {node}" if node is not None else ""
        super().__init__(f"{message}{where}")
        self.node = node


@dataclass(frozen=True)
class TermSpec:
    """One fractional term K(x,u) * D^alpha u."""

    coeff: ExpressionTree
    order: FractionalOrder


@dataclass(frozen=True)
class EquationSpec:
    """sum of terms + forcing(x) = rhs(u), with initial data at x = 0."""

    terms: tuple[TermSpec, ...]
    forcing: ExpressionTree
    rhs: ExpressionTree
    interval_end: float
    ic_u0: float
    ic_du0: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("equation needs at least one fractional term")
        if self.interval_end <= 0.0:
            raise ValueError(f"interval end must be positive, got {self.interval_end}")
        needs_du0 = self.max_alpha > 1.0
        if needs_du0 and self.ic_du0 is None:
            raise ValueError("orders above 1 require the first-derivative initial condition")
        if not needs_du0 and self.ic_du0 is not None:
            raise ValueError("first-derivative initial condition given but max order is <= 1")

    @property
    def max_alpha(self) -> float:
        return max(t.order.alpha for t in self.terms)

    @property
    def n_ic(self) -> int:
        return max(t.order.n for t in self.terms)


@dataclass(frozen=True)
class SolverConfig:
    h: float
    method: Optional[MethodKind] = None
    newton_tol: float = 1e-12
    newton_max_iter: int = 50
    damping_min: float = 1.0 / 64.0

    def __post_init__(self):
        if self.h <= 0.0:
            raise ValueError(f"step must be positive, got {self.h}")
        if self.newton_tol <= 0.0 or self.newton_max_iter < 1:
            raise ValueError("bad Newton parameters")


@dataclass(frozen=True)
class Solution:
    u: GridFunction
    residual: GridFunction
    converged: bool
    newton_iters: int
    method: MethodKind


@dataclass(frozen=True)
class ConstraintPlan:
    """Deterministic constraint map: which row is which."""

    m: int
    n_ic: int
    collocation_nodes: np.ndarray

    def placement(self, node: int) -> str:
        if node < 2:
            return "forward"
        if node > self.m - 2:
            return "backward"
        return "central"


def grid_size(T: float, h: float) -> int:
    """Number of steps m with m*h = T; validates divisibility and m >= 8."""
    ratio = T / h
    m = int(round(ratio))
    if m < 8:
        raise ValueError(f"grid too coarse: T/h = {ratio}, need at least 8 steps")
    if abs(ratio - m) > 1e-8 * max(1.0, m):
        raise ValueError(f"step {h} does not divide interval {T}")
    return m


def collocation_layout(eq: EquationSpec, cfg: SolverConfig) -> ConstraintPlan:
    m = grid_size(eq.interval_end, cfg.h)
    n_ic = eq.n_ic
    return ConstraintPlan(m=m, n_ic=n_ic, collocation_nodes=np.arange(n_ic, m + 1))


def _tree_eval(tree, x, u, node_offset: int):
    try:
        return evaluate(tree, x, u)
    except EvalDomainError as exc:
        node = None if exc.index is None else exc.index + node_offset
        raise ResidualDomainError(str(exc), node) from exc


class _Workspace:
    """Precomputed pieces shared across Newton iterations of one solve."""

    def __init__(self, eq: EquationSpec, cfg: SolverConfig, method: MethodKind):
        self.eq = eq
        self.cfg = cfg
        self.method = method
        self.plan = collocation_layout(eq, cfg)
        m, h = self.plan.m, cfg.h
        self.m, self.h = m, h
        self.x = np.arange(m + 1) * h
        self.n_ic = self.plan.n_ic
        self.ops = [operator_for(method, t.order, h, m) for t in eq.terms]
        self.abs_ops = [np.abs(A) for A in self.ops]
        self.xc = self.x[self.n_ic :]

    def residual(self, u: np.ndarray) -> np.ndarray:
        eq, nic = self.eq, self.n_ic
        r = np.empty(self.m + 1)
        r[0] = u[0] - eq.ic_u0
        if nic == 2:
            r[1] = float(_FWD3 @ u[:3]) / (2.0 * self.h) - eq.ic_du0
        uc = u[nic:]
        acc = _tree_eval(eq.forcing, self.xc, uc, nic) - _tree_eval(eq.rhs, self.xc, uc, nic)
        acc = np.asarray(acc, dtype=float)
        if acc.ndim == 0:
            acc = np.full(uc.shape, float(acc))
        for term, A in zip(eq.terms, self.ops):
            K = _tree_eval(term.coeff, self.xc, uc, nic)
            acc = acc + np.asarray(K) * (A @ u)[nic:]
        r[nic:] = acc
        return r

    def residual_scale(self, u: np.ndarray) -> float:
        """Absolute-value magnitude the residual sums cancel over."""
        eq, nic = self.eq, self.n_ic
        au = np.abs(u)
        acc = np.abs(_tree_eval(eq.forcing, self.xc, u[nic:], nic)) + np.abs(
            _tree_eval(eq.rhs, self.xc, u[nic:], nic)
        )
        acc = np.asarray(acc, dtype=float)
        if acc.ndim == 0:
            acc = np.full(self.xc.shape, float(acc))
        for term, absA in zip(eq.terms, self.abs_ops):
            K = np.abs(np.asarray(_tree_eval(term.coeff, self.xc, u[nic:], nic)))
            acc = acc + K * (absA @ au)[nic:]
        scale = float(np.max(acc))
        scale = max(scale, abs(u[0]) + abs(eq.ic_u0))
        if nic == 2:
            scale = max(scale, float(np.abs(_FWD3) @ au[:3]) / (2.0 * self.h) + abs(eq.ic_du0))
        return scale

    def jacobian(self, u: np.ndarray) -> np.ndarray:
        """Forward-difference Jacobian, column step 1e-7*(1+|u_j|).

        Expression trees act pointwise, so the finite-difference column j
        differs from the linear part only in its diagonal entry; the
        closed form below reproduces the column-by-column differences
        without m+1 full residual evaluations.
        """
        eq, nic, m = self.eq, self.n_ic, self.m
        eps = 1e-7 * (1.0 + np.abs(u))
        xc, uc, epsc = self.xc, u[nic:], eps[nic:]
        J = np.zeros((m + 1, m + 1))
        diag = np.zeros(m + 1 - nic)
        for term, A in zip(eq.terms, self.ops):
            K = np.asarray(_tree_eval(term.coeff, xc, uc, nic), dtype=float)
            if K.ndim == 0:
                K = np.full(uc.shape, float(K))
            J[nic:, :] += K[:, None] * A[nic:, :]
            Kp = np.asarray(_tree_eval(term.coeff, xc, uc + epsc, nic), dtype=float)
            if Kp.ndim == 0:
                Kp = np.full(uc.shape, float(Kp))
            base = (A @ u)[nic:]
            diag += (Kp - K) / epsc * base + (Kp - K) * np.diag(A)[nic:]
        gb = np.asarray(_tree_eval(eq.rhs, xc, uc, nic), dtype=float)
        gp = np.asarray(_tree_eval(eq.rhs, xc, uc + epsc, nic), dtype=float)
        diag -= (gp - gb) / epsc
        J[np.arange(nic, m + 1), np.arange(nic, m + 1)] += diag
        J[0, :] = 0.0
        J[0, 0] = 1.0
        if nic == 2:
            J[1, :] = 0.0
            J[1, 0:3] = _FWD3 / (2.0 * self.h)
        return J


def assemble_residual(eq: EquationSpec, cfg: SolverConfig, candidate: GridFunction) -> GridFunction:
    """Residual vector of ``candidate``: IC rows, then collocation rows.

    Entry 0 is u_0 minus the initial value; with a first-derivative
    condition, entry 1 is its forward-difference mismatch; entries
    n_ic..m are sum_i K_i(x_k,u_k) D^(alpha_i)u(x_k) + f(x_k) - g(u_k).
    """
    if cfg.method is None:
        raise ValueError("config carries no method")
    ws = _Workspace(eq, cfg, cfg.method)
    if candidate.m != ws.m or not math.isclose(candidate.h, cfg.h, rel_tol=1e-12):
        raise ValueError(
            f"candidate grid (h={candidate.h}, m={candidate.m}) does not match config (h={cfg.h}, m={ws.m})"
        )
    return GridFunction(cfg.h, ws.residual(np.asarray(candidate.values, dtype=float)))


def _converged(r: np.ndarray, u: np.ndarray, ws: _Workspace, tol: float) -> bool:
    rnorm = float(np.max(np.abs(r)))
    limit = tol * (1.0 + float(np.max(np.abs(u))))
    if rnorm <= limit:
        return True
    floor = RESIDUAL_FLOOR_FACTOR * np.finfo(float).eps * ws.residual_scale(u)
    return rnorm <= floor


def _newton(ws: _Workspace, u0: np.ndarray, cfg: SolverConfig):
    u = u0.copy()
    r = ws.residual(u)  # ResidualDomainError propagates: bad starting point
    iters = 0
    for _ in range(cfg.newton_max_iter):
        if _converged(r, u, ws, cfg.newton_tol):
            return u, r, iters, True
        J = ws.jacobian(u)
        try:
            delta = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            return u, r, iters, False
        rnorm = float(np.max(np.abs(r)))
        lam = 1.0
        accepted = None
        domain_blocked = True
        while lam >= cfg.damping_min:
            try:
                r_try = ws.residual(u + lam * delta)
            except ResidualDomainError:
                lam *= 0.5
                continue
            domain_blocked = False
            if np.isfinite(r_try).all() and float(np.max(np.abs(r_try))) < rnorm:
                accepted = (lam, r_try)
                break
            lam *= 0.5
        if accepted is None:
            if domain_blocked:
                raise SolverDomainError(
                    "expression domain error at every damping level; solver cannot proceed"
                )
            return u, r, iters, False  # stalled: non-convergence is data
        u = u + accepted[0] * delta
        r = accepted[1]
        iters += 1
    return u, r, iters, _converged(r, u, ws, cfg.newton_tol)


def solve(eq: EquationSpec, cfg: SolverConfig, method: Optional[MethodKind] = None) -> Solution:
    """Damped-Newton solve of the collocation system.

    Non-convergence returns the best iterate with converged=False; only a
    domain error that survives every damping level raises. The initial
    guess is the constant ic_u0, retried once from the linear profile
    ic_u0 + ic_du0*x when a first-derivative condition exists.
    """
    chosen = method or cfg.method
    if chosen is None:
        raise ValueError("no method selected")
    ws = _Workspace(eq, cfg, chosen)
    guesses = [np.full(ws.m + 1, float(eq.ic_u0))]
    if eq.ic_du0 is not None and eq.ic_du0 != 0.0:
        guesses.append(eq.ic_u0 + eq.ic_du0 * ws.x)
    last_exc = None
    result = None
    for guess in guesses:
        try:
            u, r, iters, ok = _newton(ws, guess, cfg)
        except (ResidualDomainError, SolverDomainError) as exc:
            last_exc = exc
            continue
        result = (u, r, iters, ok)
        if ok:
            break
    if result is None:
        raise SolverDomainError(str(last_exc))
    u, r, iters, ok = result
    return Solution(
        u=GridFunction(cfg.h, u),
        residual=GridFunction(cfg.h, r),
        converged=ok,
        newton_iters=iters,
        method=chosen,
    )
