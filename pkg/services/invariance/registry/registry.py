"""Lazily built, self-tested registry of the built-in examples."""

from collections.abc import Callable
from typing import Optional

import numpy as np
import structlog

from core.errors import InvarianceError, NotFound
from core.settings import settings
from registry.entries import BUILTINS, ExampleEntry
from symmetry import VerifyConfig, identity_defect, invariance_pointwise

logger = structlog.get_logger(__name__)

SELF_TEST_POINTS = 100
IDENTITY_TOL = 1e-12


def self_test(entry: ExampleEntry, points: int = SELF_TEST_POINTS, seed: Optional[int] = None) -> None:
    """h^0 identity and pointwise invariance of every family at random feasible points."""
    rng = np.random.default_rng(settings.default_seed if seed is None else seed)
    sample = entry.sampler(entry.problem, points, rng)
    failures: list[str] = []
    for family in entry.families:
        defect = identity_defect(family, sample)
        if defect > IDENTITY_TOL:
            failures.append(f"{family.name}: h^0 differs from the identity by {defect:.3g}")
        if not family.separable:
            logger.debug("pointwise check skipped", entry=entry.name, family=family.name)
            continue
        report = invariance_pointwise(entry.problem, family, sample, config=VerifyConfig(points=points))
        if not report.passed:
            failures.append(f"{family.name}: pointwise invariance residuals above {report.tolerance}")
    if failures:
        logger.error("registry self-test failed", entry=entry.name, failures=failures)
        raise InvarianceError(f"self-test failed for {entry.name!r}", failures=failures)


class Registry:
    """Examples by name; entries are built on first access and self-tested once."""

    def __init__(
        self,
        factories: Optional[dict[str, Callable[..., ExampleEntry]]] = None,
        check: bool = True,
    ):
        self._factories = dict(BUILTINS if factories is None else factories)
        self._check = check
        self._cache: dict[str, ExampleEntry] = {}

    def names(self) -> list[str]:
        return sorted(self._factories)

    def get(self, name: str, **params: float) -> ExampleEntry:
        """Entry by name; keyword arguments override its default parameters."""
        factory = self._factories.get(name)
        if factory is None:
            raise NotFound(name, self.names())
        if not params and name in self._cache:
            return self._cache[name]
        entry = factory(**params)
        if self._check:
            self_test(entry)
            logger.info("example loaded", entry=name, params=params or None)
        if not params:
            self._cache[name] = entry
        return entry


registry = Registry()


def get(name: str, **params: float) -> ExampleEntry:
    return registry.get(name, **params)


def names() -> list[str]:
    return registry.names()
