"""Exact invariance conditions under ``h^s``, checked along arcs or at points.

For each s the three residuals are::

    r_L = L(p) - L(h^s p) dT/dt
    r_phi = dX/dt - phi(h^s p) dT/dt
    r_c = phi_c(p) - phi_c(h^s p) dT/dt
"""

from collections.abc import Sequence
from typing import Optional

import numpy as np
import structlog

from core.errors import DomainError, UnsupportedFamily
from expr import Point
from ocp import Problem, Trajectory
from schemas.models import InvarianceReport, InvarianceSample
from symmetry.config import VerifyConfig
from symmetry.family import SymmetryFamily, apply, identity_defect

logger = structlog.get_logger(__name__)

CONDITIONS = ("lagrangian", "dynamics", "constraints")
IDENTITY_TOL = 1e-12


def admissible_samples(f: SymmetryFamily, s_samples: Sequence[float]) -> list[float]:
    """Samples inside the family's declared interval ``|s| <= epsilon``."""
    return [float(s) for s in s_samples if abs(s) <= f.epsilon]


def _active_rows(p: Problem, arc: Trajectory) -> list[int]:
    return [*p.equality_rows, *(j for j in getattr(arc, "active", ()) if j in p.inequality_rows)]


def _max(values: np.ndarray) -> float:
    return float(np.max(np.abs(values))) if values.size else 0.0


def _arc_residuals(
    p: Problem, f: SymmetryFamily, arc: Trajectory, s: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Residual series at the interior nodes of the arc for one s."""
    size = arc.size
    images: list[Point] = []
    for k in range(size):
        try:
            images.append(apply(f, arc.point(k), s))
        except DomainError as exc:
            raise exc.at(node=k, s=s)
    composed_t = np.array([img.t for img in images])
    composed_x = np.array([img.x for img in images]).reshape(size, p.n)
    dT = np.gradient(composed_t, arc.grid, edge_order=2)
    dX = np.gradient(composed_x, arc.grid, axis=0, edge_order=2)

    r_l = np.empty(size - 2)
    r_phi = np.empty((size - 2, p.n))
    r_c = np.empty((size - 2, p.m))
    for k in range(1, size - 1):
        t, x, u = arc.point(k)
        img = images[k]
        try:
            r_l[k - 1] = p.cost(t, x, u) - p.cost(*img) * dT[k]
            r_phi[k - 1] = dX[k] - p.velocity(*img) * dT[k]
            if p.m:
                r_c[k - 1] = p.constraint_values(t, x, u) - p.constraint_values(*img) * dT[k]
        except DomainError as exc:
            raise exc.at(node=k, s=s)
    return r_l, r_phi, r_c


def _sample(
    s: float,
    r_l: np.ndarray,
    r_phi: np.ndarray,
    r_c: np.ndarray,
    active: list[int],
    include_series: bool,
) -> InvarianceSample:
    return InvarianceSample(
        s=s,
        lagrangian_max=_max(r_l),
        dynamics_max=_max(r_phi),
        constraints_max=_max(r_c),
        constraints_active_max=_max(r_c[:, active]) if active else 0.0,
        lagrangian=r_l.tolist() if include_series else [],
        dynamics=r_phi.tolist() if include_series else [],
        constraints=r_c.tolist() if include_series else [],
    )


def _passed(samples: list[InvarianceSample], tolerance: dict[str, float]) -> bool:
    return all(
        sample.lagrangian_max <= tolerance["lagrangian"]
        and sample.dynamics_max <= tolerance["dynamics"]
        and sample.constraints_max <= tolerance["constraints"]
        for sample in samples
    )


def invariance_residuals(
    p: Problem,
    f: SymmetryFamily,
    arc: Trajectory,
    s_samples: Optional[Sequence[float]] = None,
    config: Optional[VerifyConfig] = None,
) -> InvarianceReport:
    """Invariance along an arc; total time derivatives difference the composed signals.

    The residual at s = 0 is pure differencing error of the arc itself, so
    each condition passes when its max-norm stays below
    ``max(tol, grid_factor * baseline)``.
    """
    config = config or VerifyConfig()
    if arc.size < 3:
        raise ValueError("invariance along an arc needs at least 3 nodes")
    samples_s = admissible_samples(f, config.s_samples if s_samples is None else s_samples)
    active = _active_rows(p, arc)

    base = _sample(0.0, *_arc_residuals(p, f, arc, 0.0), active, False)
    baseline = {
        "lagrangian": base.lagrangian_max,
        "dynamics": base.dynamics_max,
        "constraints": base.constraints_max,
    }
    tolerance = {name: max(config.tol, config.grid_factor * baseline[name]) for name in CONDITIONS}
    samples = [_sample(s, *_arc_residuals(p, f, arc, s), active, config.include_series) for s in samples_s]
    defect = identity_defect(f, (arc.point(k) for k in range(arc.size)))
    passed = _passed(samples, tolerance) and defect <= IDENTITY_TOL
    logger.info("arc invariance checked", family=f.name, nodes=arc.size, passed=passed)
    return InvarianceReport(
        family=f.name,
        mode="arc",
        points=arc.size,
        s_samples=samples_s,
        identity_defect=defect,
        samples=samples,
        baseline=baseline,
        tolerance=tolerance,
        passed=passed,
    )


def _point_residuals(p: Problem, f: SymmetryFamily, point: Point, s: float) -> tuple[float, np.ndarray, np.ndarray]:
    t, x, u = point
    extra = (s,)
    velocity = p.velocity(t, x, u)
    dT = float(f.T.partials(t, x, u, ("t",), extra)[0])
    dX = np.empty(p.n)
    for i, g in enumerate(f.X):
        grads = g.partials(t, x, u, ("t", *p.x_names), extra)
        dX[i] = grads[0] + float(np.dot(grads[1:], velocity))
    img = apply(f, point, s)
    r_l = p.cost(t, x, u) - p.cost(*img) * dT
    r_phi = dX - p.velocity(*img) * dT
    r_c = p.constraint_values(t, x, u) - p.constraint_values(*img) * dT if p.m else np.zeros(0)
    return r_l, r_phi, r_c


def invariance_pointwise(
    p: Problem,
    f: SymmetryFamily,
    points: Sequence[Point],
    s_samples: Optional[Sequence[float]] = None,
    config: Optional[VerifyConfig] = None,
) -> InvarianceReport:
    """Invariance at isolated points through a curve with velocity ``x' = phi``.

    Only for separable families, where ``dT/dt = dT/dt|partial`` and
    ``dX/dt = dX/dt|partial + dX/dx . phi`` need no control derivative.
    """
    config = config or VerifyConfig()
    if not f.separable:
        raise UnsupportedFamily(
            f"family {f.name!r} maps time or state through the control; verify it along an arc",
            family=f.name,
        )
    samples_s = admissible_samples(f, config.s_samples if s_samples is None else s_samples)
    active = list(p.equality_rows)
    samples = []
    for s in samples_s:
        r_l = np.empty(len(points))
        r_phi = np.empty((len(points), p.n))
        r_c = np.empty((len(points), p.m))
        for k, point in enumerate(points):
            try:
                r_l[k], r_phi[k], r_c[k] = _point_residuals(p, f, point, s)
            except DomainError as exc:
                raise exc.at(point_index=k, s=s)
        samples.append(_sample(s, r_l, r_phi, r_c, active, config.include_series))
    tolerance = {name: config.tol for name in CONDITIONS}
    defect = identity_defect(f, points)
    passed = _passed(samples, tolerance) and defect <= IDENTITY_TOL
    logger.info("pointwise invariance checked", family=f.name, points=len(points), passed=passed)
    return InvarianceReport(
        family=f.name,
        mode="pointwise",
        points=len(points),
        s_samples=samples_s,
        identity_defect=defect,
        samples=samples,
        baseline=None,
        tolerance=tolerance,
        passed=passed,
    )
