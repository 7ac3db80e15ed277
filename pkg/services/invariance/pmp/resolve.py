"""Pointwise resolution of (u, lambda) from stationarity and the active constraints.

The square system in ``z = (u, lambda)`` is::

    dH/du = 0                       (r rows)
    phi_i = 0                       equality rows
    phi_j = 0                       active inequality rows
    lambda_j = 0                    inactive inequality rows

solved by a chord Newton method on a finite-difference Jacobian.
"""

from collections.abc import Collection, Sequence
from dataclasses import dataclass
from typing import Optional

import numpy as np
import structlog
from pydantic import BaseModel, Field
from scipy.linalg import lu_factor, lu_solve

from core.errors import DomainError, NoConvergence, SingularJacobian
from ocp import Problem
from pmp.hamiltonian import CostateState, stationarity_residual

logger = structlog.get_logger(__name__)

ACTIVE_THRESHOLD = 1e-8


class ResolveConfig(BaseModel):
    """Newton settings for the algebraic sub-solve."""

    tol: float = Field(default=1e-12, gt=0, description="Residual max-norm at convergence")
    max_iter: int = Field(default=50, ge=1)
    fd_step: float = Field(default=1e-7, gt=0, description="Relative forward-difference step")
    max_halvings: int = Field(default=30, ge=0)
    cond_limit: float = Field(default=1e13, gt=1, description="Condition number above which J is singular")


@dataclass
class ChordJacobian:
    """Finite-difference Jacobian with its LU factors, reused until contraction slows."""

    matrix: np.ndarray
    lu: tuple[np.ndarray, np.ndarray]

    @classmethod
    def factor(cls, matrix: np.ndarray, limit: float) -> "ChordJacobian":
        with np.errstate(divide="ignore", invalid="ignore"):
            condition = float(np.linalg.cond(matrix))
        if not np.isfinite(condition) or condition > limit:
            raise SingularJacobian("Newton Jacobian is singular", condition=condition)
        try:
            return cls(matrix, lu_factor(matrix, check_finite=False))
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise SingularJacobian("Newton Jacobian is singular", reason=str(exc)) from exc

    @property
    def shape(self) -> tuple[int, ...]:
        return self.matrix.shape

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        return lu_solve(self.lu, rhs, check_finite=False)


@dataclass
class AlgebraicSolution:
    u: np.ndarray
    lam: np.ndarray
    jacobian: Optional[ChordJacobian]
    iterations: int
    residual: float


def algebraic_residual(
    p: Problem,
    t: float,
    x: Sequence[float],
    z: np.ndarray,
    psi0: float,
    psi: np.ndarray,
    active: Collection[int],
) -> np.ndarray:
    u, lam = z[: p.r], z[p.r :]
    out = np.empty(p.r + p.m)
    out[: p.r] = stationarity_residual(p, t, x, u, CostateState(psi0, psi, lam))
    if p.m:
        values = p.constraint_values(t, x, u)
        for i in range(p.m):
            enforced = i in p.equality_rows or i in active
            out[p.r + i] = values[i] if enforced else lam[i]
    return out


def _fd_jacobian(fun, z: np.ndarray, f0: np.ndarray, step: float) -> np.ndarray:
    jac = np.empty((f0.size, z.size))
    for k in range(z.size):
        h = step * max(1.0, abs(z[k]))
        shifted = z.copy()
        shifted[k] += h
        jac[:, k] = (fun(shifted) - f0) / h
    return jac


def resolve_algebraic(
    p: Problem,
    t: float,
    x: Sequence[float],
    c_partial: tuple[float, Sequence[float]],
    guess: tuple[Sequence[float], Sequence[float]],
    active: Collection[int] = (),
    config: Optional[ResolveConfig] = None,
    jacobian: Optional[ChordJacobian] = None,
) -> AlgebraicSolution:
    """Solve for (u, lambda) at (t, x) given (psi0, psi).

    ``jacobian`` may carry the factored matrix of a nearby solve; it is
    refreshed only while a step fails to contract the residual by half.
    """
    config = config or ResolveConfig()
    psi0, psi = float(c_partial[0]), np.asarray(c_partial[1], dtype=float)
    x = np.asarray(x, dtype=float)
    active = frozenset(active)
    z = np.concatenate([np.asarray(guess[0], dtype=float), np.asarray(guess[1], dtype=float)])
    if z.size != p.r + p.m:
        raise ValueError(f"guess has {z.size} entries, expected r + m = {p.r + p.m}")

    def fun(v: np.ndarray) -> np.ndarray:
        return algebraic_residual(p, t, x, v, psi0, psi, active)

    try:
        f = fun(z)
    except DomainError as exc:
        raise exc.at(t=float(t), stage="initial guess")
    norm = float(np.max(np.abs(f))) if f.size else 0.0
    jac = jacobian
    fresh = False
    iterations = 0

    while norm > config.tol:
        if iterations >= config.max_iter:
            logger.debug("algebraic resolve exhausted", t=float(t), residual=norm)
            raise NoConvergence("algebraic resolve did not converge", iterations, norm, t=float(t))
        iterations += 1
        if jac is None or jac.shape != (z.size, z.size):
            jac = ChordJacobian.factor(_fd_jacobian(fun, z, f, config.fd_step), config.cond_limit)
            fresh = True
        dz = jac.solve(-f)

        step, accepted = 1.0, False
        trial, f_trial, n_trial = z, f, norm
        for _ in range(config.max_halvings + 1):
            trial = z + step * dz
            try:
                f_trial = fun(trial)
                n_trial = float(np.max(np.abs(f_trial)))
            except DomainError:
                n_trial = np.inf
            if n_trial < norm or n_trial <= config.tol:
                accepted = True
                break
            step *= 0.5

        if not accepted:
            if not fresh:
                jac, fresh = None, False
                continue
            raise NoConvergence("algebraic resolve stalled", iterations, norm, t=float(t))

        ratio = n_trial / norm
        z, f, norm = trial, f_trial, n_trial
        if ratio > 0.5 and norm > config.tol:
            jac = None
        fresh = False

    if jac is not None and norm > 0.0:
        # one polishing step with the chord matrix, kept only if it does not increase the residual
        try:
            polished = z + jac.solve(-f)
            f_pol = fun(polished)
            n_pol = float(np.max(np.abs(f_pol)))
            if n_pol <= norm:
                z, norm = polished, n_pol
        except (np.linalg.LinAlgError, DomainError):
            pass

    return AlgebraicSolution(z[: p.r].copy(), z[p.r :].copy(), jac, iterations, norm)


def active_candidates(
    p: Problem, t: float, x: Sequence[float], u: Sequence[float], threshold: float = ACTIVE_THRESHOLD
) -> list[int]:
    """Inequality rows with ``phi_j < threshold``."""
    if not p.m_ineq:
        return []
    values = p.constraint_values(t, x, u)
    return [j for j in p.inequality_rows if values[j] < threshold]
