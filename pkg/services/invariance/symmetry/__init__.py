"""One-parameter families, exact and linearized invariance checks."""

from symmetry.config import DEFAULT_S_SAMPLES, VerifyConfig
from symmetry.family import Generator, SymmetryFamily, apply, generator_of, identity_defect
from symmetry.invariance import admissible_samples, invariance_pointwise, invariance_residuals
from symmetry.linearized import LinearizedResiduals, linearized_residuals

__all__ = [
    "DEFAULT_S_SAMPLES",
    "Generator",
    "LinearizedResiduals",
    "SymmetryFamily",
    "VerifyConfig",
    "admissible_samples",
    "apply",
    "generator_of",
    "identity_defect",
    "invariance_pointwise",
    "invariance_residuals",
    "linearized_residuals",
]
