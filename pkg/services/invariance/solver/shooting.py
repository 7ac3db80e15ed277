"""Indirect single shooting for fixed-endpoint constrained problems.

The canonical system ``x' = phi``, ``psi' = -dH/dx`` is integrated with
classic RK4; (u, lambda) are re-resolved from stationarity and the
constraints at every stage, warm-started from the previous one. Newton on
``psi_a -> x(b) - x_b`` closes the boundary value problem.
"""

from collections.abc import Collection, Sequence
from typing import Optional

import numpy as np
import structlog

from core.errors import DomainError, InvarianceError, NoConvergence
from ocp import Problem
from pmp.hamiltonian import CostateState, adjoint_rhs
from pmp.residuals import pmp_report
from pmp.resolve import AlgebraicSolution, ResolveConfig, resolve_algebraic
from solver.config import ShootConfig
from solver.extremal import Extremal

logger = structlog.get_logger(__name__)

Seeds = tuple[Sequence[float], Sequence[float]]


def default_seeds(p: Problem) -> Seeds:
    return np.ones(p.r), np.zeros(p.m)


def _at_node(exc: InvarianceError, node: int) -> InvarianceError:
    exc.details.setdefault("node", node)
    return exc


def integrate(
    p: Problem,
    psi0: float,
    psi_a: Sequence[float],
    seeds: Optional[Seeds] = None,
    active: Collection[int] = (),
    N: int = 1000,
    config: Optional[ResolveConfig] = None,
) -> Extremal:
    """RK4 on (x, psi) from ``(x_a, psi_a)``; no partial arc is returned on failure."""
    config = config or ResolveConfig()
    seeds = seeds or default_seeds(p)
    n, r, m = p.n, p.r, p.m
    grid = np.linspace(p.a, p.b, N + 1)
    h = (p.b - p.a) / N
    x = np.empty((N + 1, n))
    psi = np.empty((N + 1, n))
    u = np.empty((N + 1, r))
    lam = np.empty((N + 1, m))
    x[0] = p.x_a
    psi[0] = np.asarray(psi_a, dtype=float)

    def solve(t: float, y: np.ndarray, warm: AlgebraicSolution | Seeds, node: int) -> AlgebraicSolution:
        guess = (warm.u, warm.lam) if isinstance(warm, AlgebraicSolution) else warm
        jac = warm.jacobian if isinstance(warm, AlgebraicSolution) else None
        try:
            return resolve_algebraic(p, t, y[:n], (psi0, y[n:]), guess, active, config, jac)
        except InvarianceError as exc:
            raise _at_node(exc, node)

    def rhs(t: float, y: np.ndarray, sol: AlgebraicSolution, node: int) -> np.ndarray:
        c = CostateState(psi0, y[n:], sol.lam)
        try:
            return np.concatenate([p.velocity(t, y[:n], sol.u), adjoint_rhs(p, t, y[:n], sol.u, c)])
        except DomainError as exc:
            raise _at_node(exc, node)

    y = np.concatenate([x[0], psi[0]])
    sol = solve(grid[0], y, seeds, 0)
    u[0], lam[0] = sol.u, sol.lam

    for k in range(N):
        t = grid[k]
        k1 = rhs(t, y, sol, k)
        s2 = solve(t + h / 2, y + h / 2 * k1, sol, k)
        k2 = rhs(t + h / 2, y + h / 2 * k1, s2, k)
        s3 = solve(t + h / 2, y + h / 2 * k2, s2, k)
        k3 = rhs(t + h / 2, y + h / 2 * k2, s3, k)
        s4 = solve(t + h, y + h * k3, s3, k)
        k4 = rhs(t + h, y + h * k3, s4, k)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise DomainError("canonical system", "non-finite state or costate", node=k + 1)
        sol = solve(grid[k + 1], y, s4, k + 1)
        x[k + 1], psi[k + 1] = y[:n], y[n:]
        u[k + 1], lam[k + 1] = sol.u, sol.lam

    return Extremal(grid=grid, x=x, u=u, psi=psi, lam=lam, psi0=psi0, problem=p.name, active=tuple(sorted(active)))


def shoot(
    p: Problem,
    psi_a_guess: Sequence[float],
    config: Optional[ShootConfig] = None,
    seeds: Optional[Seeds] = None,
) -> Extremal:
    """Damped Newton on the boundary mismatch with a forward-difference Jacobian.

    Integration failures during a trial step count as a failed trial and
    trigger halving; the guess itself must integrate.
    """
    config = config or ShootConfig()
    psi0 = -1.0
    target = np.asarray(p.x_b, dtype=float)
    log = logger.bind(problem=p.name, grid=config.grid)

    def run(psi_a: np.ndarray) -> Extremal:
        return integrate(p, psi0, psi_a, seeds, config.active, config.grid, config.resolve)

    psi_a = np.asarray(psi_a_guess, dtype=float).copy()
    arc = run(psi_a)
    mismatch = arc.x[-1] - target
    norm = float(np.max(np.abs(mismatch)))
    iterations = 0

    while norm > config.tol:
        if iterations >= config.max_iter:
            log.warning("shooting exhausted", iterations=iterations, residual=norm)
            raise NoConvergence("shooting did not converge", iterations, norm, psi_a=psi_a.tolist())
        iterations += 1

        jac = np.empty((p.n, p.n))
        for i in range(p.n):
            step = config.fd_step * max(1.0, abs(psi_a[i]))
            for direction in (1.0, -1.0):
                shifted = psi_a.copy()
                shifted[i] += direction * step
                try:
                    jac[:, i] = (run(shifted).x[-1] - target - mismatch) / (direction * step)
                    break
                except InvarianceError:
                    continue
            else:
                raise NoConvergence("shooting Jacobian column failed", iterations, norm, column=i)
        try:
            delta = np.linalg.solve(jac, -mismatch)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence("singular shooting Jacobian", iterations, norm) from exc

        factor = 1.0
        for _ in range(config.max_halvings + 1):
            trial = psi_a + factor * delta
            try:
                trial_arc = run(trial)
                trial_mismatch = trial_arc.x[-1] - target
                trial_norm = float(np.max(np.abs(trial_mismatch)))
            except InvarianceError as exc:
                log.debug("trial step failed", iteration=iterations, factor=factor, error=exc.code)
                factor *= 0.5
                continue
            if trial_norm < norm:
                break
            factor *= 0.5
        else:
            log.warning("shooting step rejected", iterations=iterations, residual=norm)
            raise NoConvergence("no damped step reduced the boundary mismatch", iterations, norm)

        psi_a, arc, mismatch, norm = trial, trial_arc, trial_mismatch, trial_norm
        log.debug("shooting iteration", iteration=iterations, residual=norm, factor=factor)

    arc.newton_iterations = iterations
    arc.diagnostics = pmp_report(arc, p, boundary_tol=config.tol)
    log.info("shooting converged", iterations=iterations, residual=norm, psi_a=psi_a.tolist())
    return arc


def refine(p: Problem, arc: Extremal, factor: int, config: Optional[ShootConfig] = None) -> Extremal:
    """Re-solve on a grid ``factor`` times finer, warm-started from ``arc``."""
    if factor < 1:
        raise ValueError("refinement factor must be at least 1")
    base = config or ShootConfig(active=list(arc.active))
    finer = base.model_copy(update={"grid": (arc.size - 1) * factor, "active": list(arc.active)})
    return shoot(p, arc.psi[0], finer, seeds=(arc.u[0], arc.lam[0]))
