"""Random sample points for rank and invariance checks."""

import numpy as np

from core.errors import DomainError, NoConvergence
from expr import Point
from ocp.problem import Problem

PROJECTION_TOL = 1e-13


def log_uniform_points(
    p: Problem,
    count: int,
    rng: np.random.Generator,
    low: float = 0.1,
    high: float = 10.0,
) -> list[Point]:
    """Points with t uniform on [a, b] and every x, u log-uniform in [low, high]."""
    out = []
    for _ in range(count):
        t = float(rng.uniform(p.a, p.b))
        x = np.exp(rng.uniform(np.log(low), np.log(high), p.n))
        u = np.exp(rng.uniform(np.log(low), np.log(high), p.r))
        out.append(Point(t, x, u))
    return out


def project_controls(p: Problem, point: Point, max_iter: int = 50) -> Point:
    """Move u onto the equality constraint surface by minimum-norm Gauss-Newton steps."""
    rows = list(p.equality_rows)
    u = np.asarray(point.u, dtype=float).copy()
    residual = np.inf
    for _ in range(max_iter):
        g = p.constraint_values(point.t, point.x, u)[rows]
        residual = float(np.max(np.abs(g)))
        if residual <= PROJECTION_TOL:
            return Point(point.t, point.x, u)
        jac = p.jacobian([p.constraints[i] for i in rows], point.t, point.x, u, p.u_names)
        u = u - np.linalg.pinv(jac) @ g
    raise NoConvergence("projection onto the constraint surface failed", max_iter, residual)


def feasible_points(
    p: Problem,
    count: int,
    rng: np.random.Generator,
    max_attempts: int = 100,
) -> list[Point]:
    """Log-uniform points projected onto the equality rows; inequality rows must hold."""
    if not p.m:
        return log_uniform_points(p, count, rng)
    out: list[Point] = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > max_attempts * count:
            raise NoConvergence("could not sample feasible points", attempts, float(count - len(out)))
        (candidate,) = log_uniform_points(p, 1, rng)
        try:
            if len(p.equality_rows):
                candidate = project_controls(p, candidate)
            values = p.constraint_values(candidate.t, candidate.x, candidate.u)
        except (DomainError, NoConvergence, np.linalg.LinAlgError):
            continue
        if p.m_ineq and np.min(values[list(p.inequality_rows)]) < 0.0:
            continue
        out.append(candidate)
    return out
