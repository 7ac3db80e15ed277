"""Numerical full-rank check of d(constraints)/du on sample points."""

from collections.abc import Iterable, Sequence

import numpy as np

from core.errors import DomainError
from expr import Point
from ocp.problem import Problem
from schemas.models import RankPoint, RankReport

RANK_THRESHOLD = 1e-10


def constraint_control_jacobian(p: Problem, point: Point) -> np.ndarray:
    """The m x r matrix d(phi_c)/du at a point."""
    return p.jacobian(p.constraints, point.t, point.x, point.u, p.u_names)


def numerical_rank(matrix: np.ndarray, threshold: float = RANK_THRESHOLD) -> tuple[int, np.ndarray]:
    """Rank counting singular values above ``threshold`` times the largest."""
    if matrix.size == 0:
        return 0, np.zeros(0)
    sv = np.linalg.svd(matrix, compute_uv=False)
    top = sv[0] if sv.size else 0.0
    if top == 0.0:
        return 0, sv
    return int(np.sum(sv > threshold * top)), sv


def rank_check(p: Problem, points: Iterable[Point], threshold: float = RANK_THRESHOLD) -> RankReport:
    """Rank of d(phi_c)/du at every point; points below m are flagged."""
    if p.m == 0:
        return RankReport(m=0, threshold=threshold, points=[], deficient=[], full_rank=True)
    rows: list[RankPoint] = []
    deficient: list[int] = []
    for k, point in enumerate(points):
        try:
            jac = constraint_control_jacobian(p, point)
        except DomainError as exc:
            raise exc.at(point_index=k, t=point.t, x=list(map(float, point.x)), u=list(map(float, point.u)))
        rank, sv = numerical_rank(jac, threshold)
        rows.append(
            RankPoint(
                t=float(point.t),
                x=[float(v) for v in point.x],
                u=[float(v) for v in point.u],
                singular_values=[float(v) for v in sv],
                rank=rank,
            )
        )
        if rank < p.m:
            deficient.append(k)
    return RankReport(m=p.m, threshold=threshold, points=rows, deficient=deficient, full_rank=not deficient)


def as_points(rows: Sequence[tuple[float, Sequence[float], Sequence[float]]]) -> list[Point]:
    return [Point(float(t), np.asarray(x, float), np.asarray(u, float)) for t, x, u in rows]
