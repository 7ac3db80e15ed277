"""Problem model, structural validation, sampling and the constraint rank check."""

from ocp.problem import Diagnostic, Problem, Trajectory, validate
from ocp.rank import as_points, numerical_rank, rank_check
from ocp.sampling import feasible_points, log_uniform_points, project_controls

__all__ = [
    "Diagnostic",
    "Problem",
    "Trajectory",
    "as_points",
    "feasible_points",
    "log_uniform_points",
    "numerical_rank",
    "project_controls",
    "rank_check",
    "validate",
]
