"""Pydantic models and schemas."""

from .models import (
    ConservationReport,
    ErrorModel,
    ExtremalModel,
    HamiltonianCheck,
    InvarianceReport,
    InvarianceSample,
    LinearizedSummary,
    OracleComparison,
    PipelineReport,
    PMPResidualReport,
    RankPoint,
    RankReport,
)

__all__ = [
    "ConservationReport",
    "ErrorModel",
    "ExtremalModel",
    "HamiltonianCheck",
    "InvarianceReport",
    "InvarianceSample",
    "LinearizedSummary",
    "OracleComparison",
    "PipelineReport",
    "PMPResidualReport",
    "RankPoint",
    "RankReport",
]
