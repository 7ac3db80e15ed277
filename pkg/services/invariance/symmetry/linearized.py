"""Invariance conditions differentiated in s at s = 0.

Each series is the s-derivative at 0 of the matching exact residual, so it
agrees with a central difference in s of :func:`invariance_residuals`::

    lin_L = -(L_t tau + L_x xi + L_u upsilon + L tau')
    lin_phi = xi' - (phi_t tau + phi_x xi + phi_u upsilon + phi tau')
    lin_c = -(phi_c,t tau + phi_c,x xi + phi_c,u upsilon + phi_c tau')

``combined`` is the multiplier-weighted sum; ``reduced`` drops the
``dH/du . upsilon`` term, which vanishes on extremals, and equals
``-d(charge)/dt`` there.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.errors import DomainError
from ocp import Problem, Trajectory
from pmp.hamiltonian import CostateState, stationarity_residual
from schemas.models import LinearizedSummary
from symmetry.family import Generator, SymmetryFamily


@dataclass
class LinearizedResiduals:
    lagrangian: np.ndarray  # (N - 1,)
    dynamics: np.ndarray  # (N - 1, n)
    constraints: np.ndarray  # (N - 1, m)
    combined: Optional[np.ndarray]
    reduced: Optional[np.ndarray]
    generator_source: str

    def summary(self, family: str) -> LinearizedSummary:
        def worst(a: Optional[np.ndarray]) -> float:
            return float(np.max(np.abs(a))) if a is not None and a.size else 0.0

        return LinearizedSummary(
            family=family,
            generator_source=self.generator_source,
            lagrangian_max=worst(self.lagrangian),
            dynamics_max=worst(self.dynamics),
            constraints_max=worst(self.constraints),
            combined_max=worst(self.combined),
            reduced_max=worst(self.reduced),
        )


def _costates(arc: Trajectory, costates: Optional[Sequence[CostateState]]) -> Optional[list[CostateState]]:
    if costates is not None:
        return list(costates)
    if hasattr(arc, "costate"):
        return [arc.costate(k) for k in range(arc.size)]
    return None


def linearized_residuals(
    p: Problem,
    f: SymmetryFamily,
    arc: Trajectory,
    costates: Optional[Sequence[CostateState]] = None,
    generator: Optional[Generator] = None,
) -> LinearizedResiduals:
    """Linearized conditions at the interior nodes of ``arc``.

    ``costates`` default to the arc's own when it is an extremal; without
    them ``combined`` and ``reduced`` are ``None``.
    """
    gen = generator or f.generator()
    size = arc.size
    if size < 3:
        raise ValueError("linearized residuals need at least 3 nodes")
    wrt = ("t", *p.x_names, *p.u_names)

    tau = np.empty(size)
    xi = np.empty((size, p.n))
    upsilon = np.empty((size, p.r))
    for k in range(size):
        try:
            tau[k], xi[k], upsilon[k] = gen.at(*arc.point(k))
        except DomainError as exc:
            raise exc.at(node=k)
    d_tau = np.gradient(tau, arc.grid, edge_order=2)
    d_xi = np.gradient(xi, arc.grid, axis=0, edge_order=2)

    multipliers = _costates(arc, costates)
    lin_l = np.empty(size - 2)
    lin_phi = np.empty((size - 2, p.n))
    lin_c = np.empty((size - 2, p.m))
    combined = np.empty(size - 2) if multipliers is not None else None
    reduced = np.empty(size - 2) if multipliers is not None else None

    for k in range(1, size - 1):
        t, x, u = arc.point(k)
        direction = np.concatenate([[tau[k]], xi[k], upsilon[k]])
        try:
            lin_l[k - 1] = -(p.L.partials(t, x, u, wrt) @ direction + p.cost(t, x, u) * d_tau[k])
            jac_phi = p.jacobian(p.dynamics, t, x, u, wrt)
            lin_phi[k - 1] = d_xi[k] - (jac_phi @ direction + p.velocity(t, x, u) * d_tau[k])
            if p.m:
                jac_c = p.jacobian(p.constraints, t, x, u, wrt)
                lin_c[k - 1] = -(jac_c @ direction + p.constraint_values(t, x, u) * d_tau[k])
            if multipliers is not None:
                c = multipliers[k]
                total = c.psi0 * lin_l[k - 1] + float(c.psi @ lin_phi[k - 1])
                if p.m:
                    total += float(c.lam @ lin_c[k - 1])
                combined[k - 1] = -total
                reduced[k - 1] = combined[k - 1] - float(stationarity_residual(p, t, x, u, c) @ upsilon[k])
        except DomainError as exc:
            raise exc.at(node=k)

    return LinearizedResiduals(lin_l, lin_phi, lin_c, combined, reduced, gen.source)
