"""Pydantic models for reports and wire documents.

The matching JSON schemas live in ``protocol/schemas``.
"""

from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class ErrorModel(BaseModel):
    code: str = Field(..., description="Error code")
    message: str = Field(..., description="Error message")
    details: Optional[dict[str, Any]] = Field(default=None, description="Additional error details")


class RankPoint(BaseModel):
    t: float = Field(..., description="Sample time")
    x: list[float] = Field(..., description="Sample state")
    u: list[float] = Field(..., description="Sample control")
    singular_values: list[float] = Field(..., description="Singular values of d(constraints)/du")
    rank: int = Field(..., description="Numerical rank", ge=0)


class RankReport(BaseModel):
    m: int = Field(..., description="Number of constraints")
    threshold: float = Field(..., description="Relative singular value threshold")
    points: list[RankPoint] = Field(default_factory=list)
    deficient: list[int] = Field(default_factory=list, description="Indices of points with rank < m")
    full_rank: bool = Field(..., description="True when no sampled point is deficient")


class PMPResidualReport(BaseModel):
    stationarity: float = Field(..., description="max |dH/du|")
    constraint_violation: float = Field(..., description="max equality |phi_i| and inequality max(0, -phi_j)")
    inequality_multiplier_min: Optional[float] = Field(default=None, description="min lambda_j over inequality rows")
    complementarity: float = Field(..., description="max |lambda_j phi_j| over inequality rows")
    initial_mismatch: float = Field(..., description="|x(a) - x_a|")
    boundary_mismatch: float = Field(..., description="|x(b) - x_b|")
    adjoint_defect: float = Field(..., description="max |central d(psi)/dt + dH/dx| at interior nodes")
    hamiltonian_jump: float = Field(..., description="max |H_(k+1) - H_k| / h")
    nontrivial: bool = Field(..., description="(psi0, psi) not identically zero")
    passed: bool = Field(..., description="All residuals within tolerance")


class InvarianceSample(BaseModel):
    s: float = Field(..., description="Family parameter")
    lagrangian_max: float
    dynamics_max: float
    constraints_max: float
    constraints_active_max: float = Field(..., description="Condition three restricted to active rows")
    lagrangian: list[float] = Field(default_factory=list)
    dynamics: list[list[float]] = Field(default_factory=list)
    constraints: list[list[float]] = Field(default_factory=list)


class InvarianceReport(BaseModel):
    family: str
    mode: Literal["arc", "pointwise"]
    points: int = Field(..., description="Nodes or sample points checked")
    s_samples: list[float]
    identity_defect: float = Field(..., description="max |h^0(p) - p| over the checked points")
    samples: list[InvarianceSample]
    baseline: Optional[dict[str, float]] = Field(default=None, description="s = 0 residuals (grid error) for arcs")
    tolerance: dict[str, float]
    passed: bool


class LinearizedSummary(BaseModel):
    family: str
    generator_source: Literal["analytic", "finite-difference"]
    lagrangian_max: float
    dynamics_max: float
    constraints_max: float
    combined_max: float
    reduced_max: float


class ConservationReport(BaseModel):
    family: str
    generator_source: Literal["analytic", "finite-difference"]
    charge_series: list[Optional[float]] = Field(..., description="Charge per grid node, null where undefined")
    reference: float = Field(..., description="Charge at t = a")
    max_abs_drift: float
    rel_drift: float = Field(..., description="max_abs_drift / max(1, |reference|)")
    grid_size: int
    missing_nodes: list[int] = Field(default_factory=list)
    threshold: float
    passed: bool


class HamiltonianCheck(BaseModel):
    max_residual: float = Field(..., description="max |central dH/dt - dH/dt (partial)|")
    bound: float = Field(..., description="max(1e-8, C h^2) with the reported constant")
    constant: float
    h: float
    passed: bool


class ExtremalModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    problem: str
    psi0: float
    t: list[float]
    x: list[list[float]]
    u: list[list[float]]
    psi: list[list[float]]
    lam: list[list[float]] = Field(..., alias="lambda")
    active: list[int] = Field(default_factory=list)
    newton_iterations: int = 0
    diagnostics: Optional[PMPResidualReport] = None


class OracleComparison(BaseModel):
    x_rel_sup: float
    psi_rel_sup: float
    lambda_max_dev: float
    passed: bool


class PipelineReport(BaseModel):
    problem: str
    grid_size: int
    psi_a: list[float]
    newton_iterations: int
    pmp: PMPResidualReport
    hamiltonian: HamiltonianCheck
    invariance_pointwise: list[InvarianceReport]
    invariance_arc: list[InvarianceReport]
    linearized: list[LinearizedSummary]
    conservation: list[ConservationReport]
    oracle: Optional[OracleComparison] = None
    passed: bool
