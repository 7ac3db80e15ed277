"""PMP residual suite evaluated along a discretized extremal."""

from typing import TYPE_CHECKING

import numpy as np

from ocp import Problem
from pmp.hamiltonian import adjoint_rhs, hamiltonian, partial_t, stationarity_residual
from schemas.models import HamiltonianCheck, PMPResidualReport

if TYPE_CHECKING:
    from solver.extremal import Extremal

RESIDUAL_TOL = 1e-8
MULTIPLIER_TOL = 1e-10
DHDT_FLOOR = 1e-8
DHDT_CONSTANT = 5.0


def hamiltonian_series(arc: "Extremal", p: Problem) -> np.ndarray:
    return np.array([hamiltonian(p, *arc.point(k), arc.costate(k)) for k in range(arc.size)])


def dHdt_residual(arc: "Extremal", p: Problem) -> np.ndarray:
    """Central difference of the composed H minus the explicit dH/dt, interior nodes only."""
    if arc.size < 3:
        raise ValueError("dH/dt residual needs at least 3 nodes")
    h_values = hamiltonian_series(arc, p)
    grid = arc.grid
    out = np.empty(arc.size - 2)
    for k in range(1, arc.size - 1):
        numerical = (h_values[k + 1] - h_values[k - 1]) / (grid[k + 1] - grid[k - 1])
        out[k - 1] = numerical - partial_t(p, *arc.point(k), arc.costate(k))
    return out


def hamiltonian_check(
    arc: "Extremal", p: Problem, floor: float = DHDT_FLOOR, constant: float = DHDT_CONSTANT
) -> HamiltonianCheck:
    """``max |dHdt_residual| <= max(floor, constant * h^2)``; the measured C is reported."""
    residual = dHdt_residual(arc, p)
    worst = float(np.max(np.abs(residual))) if residual.size else 0.0
    h = arc.h
    bound = max(floor, constant * h * h)
    return HamiltonianCheck(max_residual=worst, bound=bound, constant=worst / (h * h), h=h, passed=worst <= bound)


def hamiltonian_jumps(arc: "Extremal", p: Problem) -> float:
    """Largest ``|H_(k+1) - H_k| / h``; grows like 1/h across a discontinuity of H."""
    h_values = hamiltonian_series(arc, p)
    if h_values.size < 2:
        return 0.0
    return float(np.max(np.abs(np.diff(h_values)) / np.diff(arc.grid)))


def pmp_report(
    arc: "Extremal",
    p: Problem,
    tol: float = RESIDUAL_TOL,
    boundary_tol: float = RESIDUAL_TOL,
    multiplier_tol: float = MULTIPLIER_TOL,
) -> PMPResidualReport:
    """Every pointwise PMP condition checked at every node.

    The adjoint defect compares a second-order difference of psi with
    -dH/dx; it measures grid error and is reported without gating.
    """
    stationarity = 0.0
    violation = 0.0
    complementarity = 0.0
    multiplier_min: float | None = None
    adjoint = np.empty_like(arc.psi)
    eq, ineq = list(p.equality_rows), list(p.inequality_rows)

    for k in range(arc.size):
        t, x, u = arc.point(k)
        c = arc.costate(k)
        stationarity = max(stationarity, float(np.max(np.abs(stationarity_residual(p, t, x, u, c)))))
        adjoint[k] = adjoint_rhs(p, t, x, u, c)
        if p.m:
            g = p.constraint_values(t, x, u)
            if eq:
                violation = max(violation, float(np.max(np.abs(g[eq]))))
            if ineq:
                violation = max(violation, float(np.max(np.maximum(0.0, -g[ineq]))))
                complementarity = max(complementarity, float(np.max(np.abs(c.lam[ineq] * g[ineq]))))
                low = float(np.min(c.lam[ineq]))
                multiplier_min = low if multiplier_min is None else min(multiplier_min, low)

    if arc.size >= 3:
        dpsi = np.gradient(arc.psi, arc.grid, axis=0, edge_order=2)
        adjoint_defect = float(np.max(np.abs(dpsi - adjoint)))
    else:
        adjoint_defect = 0.0

    initial = float(np.max(np.abs(arc.x[0] - np.asarray(p.x_a))))
    boundary = float(np.max(np.abs(arc.x[-1] - np.asarray(p.x_b))))
    nontrivial = arc.psi0 != 0.0 or bool(np.any(arc.psi != 0.0))

    passed = (
        stationarity <= tol
        and violation <= tol
        and (multiplier_min is None or multiplier_min >= -multiplier_tol)
        and complementarity <= tol
        and initial <= tol
        and boundary <= boundary_tol
        and nontrivial
    )
    return PMPResidualReport(
        stationarity=stationarity,
        constraint_violation=violation,
        inequality_multiplier_min=multiplier_min,
        complementarity=complementarity,
        initial_mismatch=initial,
        boundary_mismatch=boundary,
        adjoint_defect=adjoint_defect,
        hamiltonian_jump=hamiltonian_jumps(arc, p),
        nontrivial=nontrivial,
        passed=passed,
    )
