"""Solver configuration models."""

from pydantic import BaseModel, Field

from pmp.resolve import ResolveConfig


class ShootConfig(BaseModel):
    """Single-shooting settings; every field maps to a CLI flag."""

    grid: int = Field(default=1000, ge=2, description="Number of uniform grid intervals N")
    fd_step: float = Field(default=1e-6, gt=0, description="Forward-difference step in psi_a")
    tol: float = Field(default=1e-8, gt=0, description="Boundary mismatch max-norm at convergence")
    max_iter: int = Field(default=30, ge=1)
    max_halvings: int = Field(default=30, ge=0, description="Step halvings per Newton iteration")
    active: list[int] = Field(default_factory=list, description="Active inequality rows, fixed per solve")
    resolve: ResolveConfig = Field(default_factory=ResolveConfig)


__all__ = ["ResolveConfig", "ShootConfig"]
