"""Noether charge ``psi . xi - H tau`` and its drift along extremals."""

import io
from pathlib import Path
from typing import Optional

import numpy as np
import structlog

from core.errors import DomainError
from expr import Point
from ocp import Problem
from pmp.hamiltonian import CostateState, hamiltonian
from schemas.models import ConservationReport
from solver.extremal import Extremal
from symmetry.family import Generator

logger = structlog.get_logger(__name__)

DRIFT_THRESHOLD = 1e-6


def charge(p: Problem, gen: Generator, node: Point, c: CostateState) -> float:
    t, x, u = node
    tau, xi, _ = gen.at(t, x, u)
    value = float(np.dot(c.psi, xi))
    if tau:
        value -= hamiltonian(p, t, x, u, c) * tau
    return value


def charge_series(p: Problem, gen: Generator, arc: Extremal) -> tuple[np.ndarray, list[int]]:
    """Charge per node; nodes outside the domain are NaN and listed."""
    values = np.full(arc.size, np.nan)
    missing: list[int] = []
    for k in range(arc.size):
        try:
            values[k] = charge(p, gen, arc.point(k), arc.costate(k))
        except DomainError:
            missing.append(k)
    return values, missing


def conservation_report(
    p: Problem,
    gen: Generator,
    arc: Extremal,
    family: str = "",
    threshold: float = DRIFT_THRESHOLD,
) -> ConservationReport:
    """Drift of the charge relative to its value at t = a.

    ``rel_drift = max_abs_drift / max(1, |reference|)``; the report fails
    when it exceeds ``threshold`` or when any node could not be evaluated.
    """
    values, missing = charge_series(p, gen, arc)
    finite = values[np.isfinite(values)]
    reference = float(values[0]) if np.isfinite(values[0]) else (float(finite[0]) if finite.size else 0.0)
    max_abs_drift = float(np.max(np.abs(finite - reference))) if finite.size else 0.0
    rel_drift = max_abs_drift / max(1.0, abs(reference))
    passed = rel_drift <= threshold and not missing
    if missing:
        logger.warning("charge undefined at nodes", family=family, count=len(missing), first=missing[0])
    return ConservationReport(
        family=family,
        generator_source=gen.source,
        charge_series=[None if not np.isfinite(v) else float(v) for v in values],
        reference=reference,
        max_abs_drift=max_abs_drift,
        rel_drift=rel_drift,
        grid_size=arc.size,
        missing_nodes=missing,
        threshold=threshold,
        passed=passed,
    )


def report_to_csv(report: ConservationReport, grid: np.ndarray, path: Optional[str | Path] = None) -> str:
    """Columns ``t, charge, drift`` with 17 significant digits; NaN where undefined."""
    values = np.array([np.nan if v is None else v for v in report.charge_series], dtype=float)
    table = np.column_stack([np.asarray(grid, dtype=float), values, values - report.reference])
    buffer = io.StringIO()
    np.savetxt(buffer, table, fmt="%.17g", delimiter=",", header="t,charge,drift", comments="")
    text = buffer.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
