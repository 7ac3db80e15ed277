"""Pontryagin maximum principle: Hamiltonian, residuals and algebraic resolution."""

from pmp.hamiltonian import (
    CostateState,
    adjoint_rhs,
    hamiltonian,
    hamiltonian_partials,
    partial_t,
    stationarity_residual,
)
from pmp.residuals import dHdt_residual, hamiltonian_check, hamiltonian_jumps, hamiltonian_series, pmp_report
from pmp.resolve import AlgebraicSolution, ChordJacobian, ResolveConfig, active_candidates, resolve_algebraic

__all__ = [
    "AlgebraicSolution",
    "ChordJacobian",
    "CostateState",
    "ResolveConfig",
    "active_candidates",
    "adjoint_rhs",
    "dHdt_residual",
    "hamiltonian",
    "hamiltonian_check",
    "hamiltonian_jumps",
    "hamiltonian_partials",
    "hamiltonian_series",
    "partial_t",
    "pmp_report",
    "resolve_algebraic",
    "stationarity_residual",
]
