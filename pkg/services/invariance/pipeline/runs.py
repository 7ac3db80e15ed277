"""End-to-end runs shared by the CLI and the HTTP surface."""

from collections.abc import Sequence
from typing import Optional

import numpy as np
import structlog

from core.errors import UnsupportedFamily
from noether import DRIFT_THRESHOLD, conservation_report
from pmp import hamiltonian_check
from registry import ExampleEntry
from schemas.models import ConservationReport, InvarianceReport, PipelineReport
from solver import Extremal, ShootConfig, shoot
from solver.oracle import compare
from symmetry import VerifyConfig, invariance_pointwise, invariance_residuals, linearized_residuals

logger = structlog.get_logger(__name__)


def _families(entry: ExampleEntry, names: Optional[Sequence[str]]):
    return [entry.family(name) for name in names] if names else list(entry.families)


def verify_entry(
    entry: ExampleEntry,
    config: Optional[VerifyConfig] = None,
    arc: Optional[Extremal] = None,
    families: Optional[Sequence[str]] = None,
) -> list[InvarianceReport]:
    """Pointwise reports on random feasible points, or arc reports when an arc is given.

    Without an arc, families that are not separable are skipped unless
    requested by name, in which case ``UnsupportedFamily`` propagates.
    """
    config = config or VerifyConfig()
    reports = []
    if arc is not None:
        arc.check_against(entry.problem)
        for family in _families(entry, families):
            reports.append(invariance_residuals(entry.problem, family, arc, config=config))
        return reports

    points = entry.sampler(entry.problem, config.points, np.random.default_rng(config.seed))
    for family in _families(entry, families):
        if not family.separable and not families:
            logger.warning("family needs an arc for verification", family=family.name)
            continue
        reports.append(invariance_pointwise(entry.problem, family, points, config=config))
    if not reports:
        raise UnsupportedFamily("no family of this problem can be verified without an arc", problem=entry.name)
    return reports


def solve_entry(
    entry: ExampleEntry, psi_a: Optional[Sequence[float]] = None, config: Optional[ShootConfig] = None
) -> Extremal:
    config = config or ShootConfig(active=list(entry.active))
    guess = entry.psi_a if psi_a is None else np.asarray(psi_a, dtype=float)
    return shoot(entry.problem, guess, config, seeds=entry.seeds)


def charge_entry(
    entry: ExampleEntry, arc: Extremal, family: str, threshold: float = DRIFT_THRESHOLD
) -> ConservationReport:
    arc.check_against(entry.problem)
    f = entry.family(family)
    return conservation_report(entry.problem, f.generator(), arc, family=f.name, threshold=threshold)


def run_report(
    entry: ExampleEntry,
    shoot_config: Optional[ShootConfig] = None,
    verify_config: Optional[VerifyConfig] = None,
    threshold: float = DRIFT_THRESHOLD,
    psi_a: Optional[Sequence[float]] = None,
) -> tuple[PipelineReport, Extremal]:
    """Solve, verify along the arc and at points, then check every charge."""
    verify_config = verify_config or VerifyConfig()
    p = entry.problem
    arc = solve_entry(entry, psi_a, shoot_config)
    assert arc.diagnostics is not None

    pointwise = []
    points = entry.sampler(p, verify_config.points, np.random.default_rng(verify_config.seed))
    for family in entry.families:
        if family.separable:
            pointwise.append(invariance_pointwise(p, family, points, config=verify_config))
    along = [invariance_residuals(p, family, arc, config=verify_config) for family in entry.families]
    linearized = [linearized_residuals(p, family, arc).summary(family.name) for family in entry.families]
    conservation = [
        conservation_report(p, family.generator(), arc, family=family.name, threshold=threshold)
        for family in entry.families
    ]
    ham = hamiltonian_check(arc, p)

    oracle = None
    if entry.oracle is not None:
        oracle = compare(arc.x, arc.psi, arc.lam, entry.oracle(arc.grid))

    passed = (
        arc.diagnostics.passed
        and ham.passed
        and all(r.passed for r in pointwise)
        and all(r.passed for r in along)
        and all(r.passed for r in conservation)
        and (oracle is None or oracle.passed)
    )
    logger.info("report finished", problem=p.name, passed=passed)
    report = PipelineReport(
        problem=p.name,
        grid_size=arc.size,
        psi_a=arc.psi[0].tolist(),
        newton_iterations=arc.newton_iterations,
        pmp=arc.diagnostics,
        hamiltonian=ham,
        invariance_pointwise=pointwise,
        invariance_arc=along,
        linearized=linearized,
        conservation=conservation,
        oracle=oracle,
        passed=passed,
    )
    return report, arc
