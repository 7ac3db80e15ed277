"""Invariance verification settings."""

from pydantic import BaseModel, Field

from core.settings import settings

DEFAULT_S_SAMPLES = [-0.5, -0.25, -0.1, 0.1, 0.25, 0.5]


class VerifyConfig(BaseModel):
    s_samples: list[float] = Field(default_factory=lambda: list(DEFAULT_S_SAMPLES))
    points: int = Field(default=100, ge=1, description="Random feasible points for pointwise checks")
    tol: float = Field(default=1e-9, gt=0, description="Residual max-norm floor")
    grid_factor: float = Field(
        default=10.0, ge=1, description="Arc tolerance multiple of the s = 0 residual (grid error)"
    )
    seed: int = Field(default_factory=lambda: settings.default_seed)
    include_series: bool = Field(default=False, description="Keep per-node residual series in reports")
