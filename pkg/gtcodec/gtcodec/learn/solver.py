"""
Convex edge-weight learning.

For a block u on grid g the weights minimise

    f(w) = c^T w + alpha * ||Psi_d^T w||_1 - beta * sum(log w),   0 < w <= 1

with c_e = (u_i - u_j)^2 and Psi_d the dual-graph Fourier basis.

`learn_weights` works on the dual coefficients v = Psi_d^T w. The l1 term is
split with bounds -t <= v <= t and the box w <= 1 gets a log barrier; damped
Newton steps follow the central path while the barrier weight shrinks. The
last barrier iterate then fixes the zero coefficients, their signs and the
edges at w = 1, and an equality-constrained Newton solve on that active set
lands on the exact kink of the l1 term.


file: gtcodec/gtcodec/learn/solver.py
"""

import itertools
import math

import numpy as np

from scipy.linalg import (
    LinAlgError,
    cho_factor,
    cho_solve,
    solve,
)
from scipy.optimize import lsq_linear
from typing import Optional

# Models
from gtcodec.graph.models import (
    DualGraph,
    GridGraph,
)
from gtcodec.learn.models import (
    LearnParams,
    LearnResult,
)
from gtcodec.graph.core import edge_differences

# Errors
from gtcodec.errors import (
    DimensionError,
    DomainError,
    InvalidParameterError,
)

# Logger
from gtcodec.logger import logger

ORACLE_MAX_EDGES = 6
ZERO_TOLERANCE = 1e-6
BOUND_TOLERANCE = 1e-9

# barrier path
BARRIER_SHRINK = 10.0
GAP_TOLERANCE = 1e-10
FINAL_TIGHTENING = 1e-6
ARMIJO = 0.01
MAX_HALVINGS = 60

# active-set refinement
ACTIVE_MARGIN = 1e-3
BOUND_GAP = 1e-6
POLISH_ROUNDS = 5
POLISH_STEPS = 20
ACCEPT_SLACK = 1e-9


def _weights(d: DualGraph, w: np.ndarray) -> np.ndarray:
    weights = np.asarray(w, dtype=np.float64)
    if weights.ndim != 1 or weights.shape[0] != d.node_count:
        raise DimensionError(f"expected {d.node_count} edge weights, got shape {weights.shape}")
    return weights


def _costs(g: GridGraph, d: DualGraph, u: np.ndarray) -> np.ndarray:
    if g.edge_count != d.node_count:
        raise DimensionError(f"dual graph has {d.node_count} nodes but the grid has {g.edge_count} edges")
    return edge_differences(g, np.asarray(u, dtype=np.float64).ravel())


def objective(g: GridGraph, d: DualGraph, u: np.ndarray, w: np.ndarray, p: LearnParams) -> float:
    """
    Evaluate the learning objective at `w`.

    Args:
        `g` (GridGraph): Block topology.
        `d` (DualGraph): Dual of `g`.
        `u` (np.ndarray): Block intensities (any shape with N entries).
        `w` (np.ndarray): Edge weights, all strictly positive.
        `p` (LearnParams): alpha and beta.

    Returns:
        float: f(w).
    """
    c = _costs(g, d, u)
    weights = _weights(d, w)
    if np.any(weights <= 0):
        raise DomainError("the log barrier is undefined for non-positive weights")

    dual = d.spectrum.eigenvectors.T @ weights
    return float(c @ weights + p.alpha * np.abs(dual).sum() - p.beta * np.log(weights).sum())


def stationarity_residual(
    g: GridGraph,
    d: DualGraph,
    u: np.ndarray,
    w: np.ndarray,
    p: LearnParams,
) -> float:
    """
    Norm of the smallest projected subgradient of f at `w`.

    Dual coefficients within 1e-6 (relative) of zero take the subgradient
    entry in [-1, 1] that minimises the norm, the others their sign.
    Components with w_e = 1 only count a positive gradient. When both sets
    are present the minimum is a bounded least-squares problem.
    """
    c = _costs(g, d, u)
    weights = _weights(d, w)
    if np.any(weights <= 0):
        raise DomainError("the log barrier is undefined for non-positive weights")

    psi = d.spectrum.eigenvectors
    smooth_grad = c - p.beta / weights
    at_bound = weights >= 1.0 - BOUND_TOLERANCE
    if p.alpha == 0:
        grad = smooth_grad
    else:
        dual = psi.T @ weights
        zero = np.abs(dual) <= ZERO_TOLERANCE * (1.0 + np.max(np.abs(dual)))
        s = np.where(zero, 0.0, np.sign(dual))
        grad = smooth_grad + p.alpha * (psi @ s)

        if zero.any() and at_bound.any():
            system = np.hstack([p.alpha * psi[:, zero], np.eye(weights.shape[0])[:, at_bound]])
            lower = np.concatenate([np.full(zero.sum(), -1.0), np.zeros(at_bound.sum())])
            upper = np.concatenate([np.ones(zero.sum()), np.full(at_bound.sum(), np.inf)])
            fit = lsq_linear(system, -grad, bounds=(lower, upper), method="bvls")
            return float(np.linalg.norm(system @ fit.x + grad))

        # Psi is orthogonal, so the clipped projection is the exact minimiser on the zero set
        s[zero] = np.clip(-(psi.T @ smooth_grad)[zero] / p.alpha, -1.0, 1.0)
        grad = smooth_grad + p.alpha * (psi @ s)

    grad = np.where(at_bound, np.maximum(grad, 0.0), grad)
    return float(np.linalg.norm(grad))


def _closed_form(c: np.ndarray, beta: float) -> np.ndarray:
    return np.where(c > 0, np.minimum(1.0, beta / np.where(c > 0, c, 1.0)), 1.0)


def _bound_gap(mu: float) -> float:
    # distance to w = 1 read as an active bound on the central path
    return min(max(math.sqrt(mu), BOUND_GAP), ACTIVE_MARGIN)


def _solve_spd(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    # Jacobi scaling first: the barrier curvatures span many decades
    scale = 1.0 / np.sqrt(np.diag(matrix))
    scaled = matrix * scale[:, None] * scale[None, :]
    try:
        factor = cho_factor(scaled, lower=True, check_finite=False)
        return scale * cho_solve(factor, scale * rhs, check_finite=False)
    except LinAlgError:
        logger.debug("Newton system is not numerically positive definite, using least squares")
        solution, *_ = np.linalg.lstsq(scaled, scale * rhs, rcond=None)
        return scale * solution


def _solve_kkt(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        return solve(matrix, rhs, assume_a="sym", check_finite=False)
    except LinAlgError:
        solution, *_ = np.linalg.lstsq(matrix, rhs, rcond=None)
        return solution


class _BarrierProblem:
    """The objective in dual coordinates with the l1 split and the barrier weight mu."""

    def __init__(self, c: np.ndarray, psi: np.ndarray, p: LearnParams) -> None:
        self.c = c
        self.psi = psi
        self.alpha = p.alpha
        self.beta = p.beta

    def objective(self, v: np.ndarray) -> tuple[np.ndarray, float]:
        w = self.psi @ v
        return w, float(self.c @ w + self.alpha * np.abs(v).sum() - self.beta * np.log(w).sum())

    def value(self, v: np.ndarray, t: np.ndarray, mu: float) -> float:
        w = self.psi @ v
        a, b, r = t - v, t + v, 1.0 - w
        if min(w.min(), a.min(), b.min(), r.min()) <= 0:
            return math.inf
        barrier = np.log(a).sum() + np.log(b).sum() + np.log(r).sum()
        return float(self.c @ w + self.alpha * t.sum() - self.beta * np.log(w).sum() - mu * barrier)

    def newton_step(self, v: np.ndarray, t: np.ndarray, mu: float) -> tuple[np.ndarray, np.ndarray, float]:
        """Newton direction in (v, t) and the directional derivative along it."""
        psi = self.psi
        w = psi @ v
        a, b, r = t - v, t + v, 1.0 - w

        grad_w = self.c - self.beta / w + mu / r
        grad_v = psi.T @ grad_w + mu / a - mu / b
        grad_t = self.alpha - mu / a - mu / b

        curvature = self.beta / w**2 + mu / r**2
        lower, upper = mu / a**2, mu / b**2
        total = lower + upper

        # eliminate t: the (v, t) Hessian has diagonal blocks apart from Psi^T D Psi
        schur = psi.T @ (curvature[:, None] * psi)
        schur[np.diag_indices_from(schur)] += 4.0 * lower * upper / total
        step_v = _solve_spd(schur, -grad_v + (upper - lower) * grad_t / total)
        step_t = -(grad_t + (upper - lower) * step_v) / total

        return step_v, step_t, float(grad_v @ step_v + grad_t @ step_t)

    def line_search(
        self,
        v: np.ndarray,
        t: np.ndarray,
        mu: float,
        step_v: np.ndarray,
        step_t: np.ndarray,
        slope: float,
    ) -> float:
        """Backtracking step length, 0 when no step decreases the barrier objective."""
        current = self.value(v, t, mu)
        step = 1.0
        for _ in range(MAX_HALVINGS):
            if self.value(v + step * step_v, t + step * step_t, mu) <= current + ARMIJO * step * slope:
                return step
            step *= 0.5
        return 0.0


def _polish(
    problem: _BarrierProblem,
    v: np.ndarray,
    t: np.ndarray,
    mu: float,
    budget: int,
    target: float,
) -> tuple[Optional[np.ndarray], int]:
    """
    Solve the smooth problem on the active set read off a barrier iterate.

    Coefficients well inside their l1 bounds are fixed at zero, the rest keep
    their sign, and edges close to w = 1 become equalities. The guess is
    corrected for a few rounds: sign changes join the zero set, zero
    coefficients whose subgradient leaves [-1, 1] are released, edges pushed
    above 1 join the bound set and bound edges with a negative multiplier
    leave it.

    Returns:
        tuple[np.ndarray | None, int]: Candidate weights (None when the active
            set leaves the domain) and the Newton steps spent.
    """
    c, psi, alpha, beta = problem.c, problem.psi, problem.alpha, problem.beta
    m = c.shape[0]

    zero = np.abs(v) < (1.0 - ACTIVE_MARGIN) * t
    signs = np.sign(v)
    bound = 1.0 - psi @ v <= _bound_gap(mu)
    x = np.where(zero, 0.0, v)
    used = 0
    w = psi @ x

    for _ in range(POLISH_ROUNDS):
        support = ~zero
        if not support.any() or np.any(w <= 0):
            return None, used

        basis = psi[:, support]
        rows = basis[bound]
        linear = basis.T @ c + alpha * signs[support]
        vs = x[support]
        nu = np.zeros(rows.shape[0])

        def residual(coefficients: np.ndarray, multipliers: np.ndarray) -> np.ndarray:
            weights = basis @ coefficients
            return np.concatenate([
                linear - basis.T @ (beta / weights) + rows.T @ multipliers,
                rows @ coefficients - 1.0,
            ])

        current = residual(vs, nu)
        for _ in range(POLISH_STEPS):
            norm = np.linalg.norm(current)
            if norm <= target or used >= budget:
                break

            weights = basis @ vs
            hessian = basis.T @ ((beta / weights**2)[:, None] * basis)
            kkt = np.block([
                [hessian, rows.T],
                [rows, np.zeros((rows.shape[0], rows.shape[0]))],
            ])
            step_v, step_nu = np.split(_solve_kkt(kkt, -current), [vs.shape[0]])

            # infeasible-start Newton: backtrack on the KKT residual norm
            step = 1.0
            trial = None
            for _ in range(MAX_HALVINGS):
                if np.all(basis @ (vs + step * step_v) > 0):
                    trial = residual(vs + step * step_v, nu + step * step_nu)
                    if np.linalg.norm(trial) <= (1.0 - ARMIJO * step) * norm:
                        break
                    trial = None
                step *= 0.5
            if trial is None:
                break

            vs, nu, current = vs + step * step_v, nu + step * step_nu, trial
            used += 1

        x = np.zeros(m)
        x[support] = vs
        w = psi @ x
        if np.any(w <= 0):
            return None, used

        multipliers = np.zeros(m)
        multipliers[bound] = nu
        slope = psi[:, zero].T @ (c - beta / w + multipliers)
        outside = np.abs(slope) > alpha * (1.0 + ACTIVE_MARGIN)
        released = np.flatnonzero(zero)[outside]
        flipped = support & (signs * x <= 0)
        over = ~bound & (w > 1.0 + BOUND_TOLERANCE)
        dropped = bound & (multipliers < 0)

        if not (flipped.any() or over.any() or dropped.any() or released.size):
            break

        zero |= flipped
        zero[released] = False
        signs[released] = -np.sign(slope[outside])
        bound = (bound | over) & ~dropped
        x[flipped] = 0.0
        w = psi @ x

    if np.any(w <= 0):
        return None, used
    return np.minimum(w, 1.0), used


def learn_weights(
    g: GridGraph,
    d: DualGraph,
    u: np.ndarray,
    p: LearnParams,
) -> LearnResult:
    """
    Learn the edge weights of a block.

    Starts from w0 = 0.5 and keeps the best iterate, so the returned objective
    never exceeds f(w0) and `history` (one entry per Newton step) is
    non-increasing. `p.max_iter` bounds the Newton steps. When the
    stationarity residual does not reach `p.stationarity_tol * (1 + |f|)` the
    best iterate is returned with `converged=False`.

    Args:
        `g` (GridGraph): Block topology.
        `d` (DualGraph): Dual of `g`.
        `u` (np.ndarray): Block intensities.
        `p` (LearnParams): Solver parameters.

    Returns:
        LearnResult: Weights in (0, 1] with the solver status.
    """
    c = _costs(g, d, u)
    m = c.shape[0]

    if p.alpha == 0:
        # separable problem
        w = _closed_form(c, p.beta)
        f = objective(g, d, u, w, p)
        residual = stationarity_residual(g, d, u, w, p)
        return LearnResult(weights=w, objective=f, residual=residual, iterations=0, converged=True, history=[f])

    problem = _BarrierProblem(c, d.spectrum.eigenvectors, p)

    v = d.spectrum.eigenvectors.T @ np.full(m, 0.5)
    t = np.abs(v) + 1.0
    best_w, best_f = problem.objective(v)
    history = [best_f]

    scale = 1.0 + abs(best_f)
    mu = scale / m
    iterations = 0

    while iterations < p.max_iter:
        # 3 m barrier terms bound the gap to the optimum
        final = 3 * m * mu <= GAP_TOLERANCE * scale
        decrement = p.tol * (FINAL_TIGHTENING if final else 1.0)

        while iterations < p.max_iter:
            step_v, step_t, slope = problem.newton_step(v, t, mu)
            if -slope / 2.0 <= decrement * (1.0 + abs(best_f)):
                break
            step = problem.line_search(v, t, mu, step_v, step_t, slope)
            if step == 0.0:
                break

            v = v + step * step_v
            t = t + step * step_t
            iterations += 1

            w, f = problem.objective(v)
            if f < best_f:
                best_w, best_f = w, f
            history.append(best_f)

        if final:
            break
        mu /= BARRIER_SHRINK

    residual = stationarity_residual(g, d, u, best_w, p)

    w = problem.psi @ v
    candidates = [np.where(1.0 - w <= _bound_gap(mu), 1.0, w)]
    if iterations < p.max_iter:
        target = 1e-3 * p.stationarity_tol * (1.0 + abs(best_f))
        polished, used = _polish(problem, v, t, mu, p.max_iter - iterations, target)
        iterations += used
        if polished is not None:
            candidates.append(polished)

    for candidate in candidates:
        f = objective(g, d, u, candidate, p)
        candidate_residual = stationarity_residual(g, d, u, candidate, p)
        if candidate_residual < residual and f <= best_f + ACCEPT_SLACK * (1.0 + abs(best_f)):
            best_w, best_f, residual = candidate, f, candidate_residual
            history.append(min(history[-1], f))

    converged = residual <= p.stationarity_tol * (1.0 + abs(best_f))
    if not converged:
        logger.warning(f"Weight learning stopped after {iterations} Newton steps, residual={residual:.3e}")

    return LearnResult(
        weights=best_w,
        objective=best_f,
        residual=residual,
        iterations=iterations,
        converged=converged,
        history=history,
    )


def _levels(step: float) -> np.ndarray:
    if step <= 0:
        raise InvalidParameterError(f"grid step must be positive, got {step}")
    count = int(np.floor(1.0 / step + 1e-9))
    levels = step * np.arange(1, count + 1, dtype=np.float64)
    if count == 0 or levels[-1] < 1.0 - 1e-12:
        levels = np.append(levels, 1.0)
    levels[-1] = 1.0
    return levels


def oracle_grid_search(
    g: GridGraph,
    d: DualGraph,
    u: np.ndarray,
    p: LearnParams,
    step: float,
) -> tuple[np.ndarray, float]:
    """
    Exhaustive minimisation of the objective over {step, 2 step, ..., 1}^M.

    Only meant to validate `learn_weights` on graphs with at most six edges.
    The first minimiser in lexicographic grid order is returned.

    Args:
        `g` (GridGraph): Topology with M <= 6 edges.
        `d` (DualGraph): Dual of `g`.
        `u` (np.ndarray): Block intensities.
        `p` (LearnParams): alpha and beta.
        `step` (float): Grid spacing.

    Returns:
        tuple[np.ndarray, float]: Best weights and their objective.
    """
    c = _costs(g, d, u)
    m = c.shape[0]
    if m > ORACLE_MAX_EDGES:
        raise InvalidParameterError(f"oracle search supports at most {ORACLE_MAX_EDGES} edges, got {m}")

    levels = _levels(step)
    psi_t = d.spectrum.eigenvectors.T
    log_levels = np.log(levels)

    # the last (up to) two coordinates are evaluated as one vectorised grid
    inner = min(2, m)
    outer = m - inner
    inner_grid = np.array(list(itertools.product(levels, repeat=inner)))
    inner_log = np.array(list(itertools.product(log_levels, repeat=inner))).sum(axis=1)
    inner_dual = inner_grid @ psi_t[:, outer:].T
    inner_separable = inner_grid @ c[outer:] - p.beta * inner_log

    best_f = np.inf
    best_w = None
    for prefix in itertools.product(range(levels.shape[0]), repeat=outer):
        head = levels[list(prefix)]
        base_dual = psi_t[:, :outer] @ head
        base = float(c[:outer] @ head - p.beta * np.log(head).sum())
        values = base + inner_separable + p.alpha * np.abs(inner_dual + base_dual).sum(axis=1)
        index = int(np.argmin(values))
        if values[index] < best_f:
            best_f = float(values[index])
            best_w = np.concatenate([head, inner_grid[index]])

    return best_w, best_f
