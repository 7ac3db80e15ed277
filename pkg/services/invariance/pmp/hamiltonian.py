"""Hamiltonian ``H = psi0 L + psi . phi + lambda . phi_c`` and its partials."""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from ocp import Problem


@dataclass(frozen=True)
class CostateState:
    """Multipliers at one instant: ``psi0 <= 0``, costate ``psi``, constraint ``lam``."""

    psi0: float
    psi: np.ndarray = field(default_factory=lambda: np.zeros(0))
    lam: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @classmethod
    def of(cls, psi0: float, psi: Sequence[float], lam: Sequence[float] = ()) -> "CostateState":
        return cls(float(psi0), np.asarray(psi, dtype=float), np.asarray(lam, dtype=float))

    @classmethod
    def zero(cls, p: Problem) -> "CostateState":
        return cls(0.0, np.zeros(p.n), np.zeros(p.m))

    def __add__(self, other: "CostateState") -> "CostateState":
        return CostateState(self.psi0 + other.psi0, self.psi + other.psi, self.lam + other.lam)


def hamiltonian(p: Problem, t: float, x: Sequence[float], u: Sequence[float], c: CostateState) -> float:
    h = c.psi0 * p.cost(t, x, u) if c.psi0 else 0.0
    h += float(np.dot(c.psi, p.velocity(t, x, u)))
    if p.m:
        h += float(np.dot(c.lam, p.constraint_values(t, x, u)))
    return h


def hamiltonian_partials(
    p: Problem,
    t: float,
    x: Sequence[float],
    u: Sequence[float],
    c: CostateState,
    wrt: Sequence[str],
) -> np.ndarray:
    """Partial derivatives of H holding the multipliers fixed."""
    out = c.psi0 * p.L.partials(t, x, u, wrt) if c.psi0 else np.zeros(len(wrt))
    out = out + c.psi @ p.jacobian(p.dynamics, t, x, u, wrt)
    if p.m:
        out = out + c.lam @ p.jacobian(p.constraints, t, x, u, wrt)
    return out


def adjoint_rhs(p: Problem, t: float, x: Sequence[float], u: Sequence[float], c: CostateState) -> np.ndarray:
    """``psi' = -dH/dx``."""
    return -hamiltonian_partials(p, t, x, u, c, p.x_names)


def stationarity_residual(
    p: Problem, t: float, x: Sequence[float], u: Sequence[float], c: CostateState
) -> np.ndarray:
    """``dH/du``; zero on an extremal."""
    return hamiltonian_partials(p, t, x, u, c, p.u_names)


def partial_t(p: Problem, t: float, x: Sequence[float], u: Sequence[float], c: CostateState) -> float:
    return float(hamiltonian_partials(p, t, x, u, c, ("t",))[0])
