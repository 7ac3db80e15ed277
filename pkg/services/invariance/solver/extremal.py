"""Discretized Pontryagin extremal and its JSON form."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from core.errors import ProblemFileError
from core.yaml_utils import dump_json, yaml_helper
from ocp import Problem, Trajectory
from pmp.hamiltonian import CostateState
from schemas.models import ExtremalModel, PMPResidualReport
from schemas.validators import validator

GRID_TOL = 1e-9


@dataclass
class Extremal(Trajectory):
    """``(x, u, psi0, psi, lambda)`` on a uniform grid."""

    psi: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))  # (N + 1, n)
    lam: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))  # (N + 1, m)
    psi0: float = -1.0
    problem: str = ""
    active: tuple[int, ...] = ()
    newton_iterations: int = 0
    diagnostics: Optional[PMPResidualReport] = None

    def costate(self, k: int) -> CostateState:
        return CostateState(self.psi0, self.psi[k], self.lam[k])

    def to_model(self) -> ExtremalModel:
        return ExtremalModel(
            problem=self.problem,
            psi0=self.psi0,
            t=self.grid.tolist(),
            x=self.x.tolist(),
            u=self.u.tolist(),
            psi=self.psi.tolist(),
            lam=self.lam.tolist(),
            active=list(self.active),
            newton_iterations=self.newton_iterations,
            diagnostics=self.diagnostics,
        )

    @classmethod
    def from_model(cls, model: ExtremalModel, source: str = "<arc>") -> "Extremal":
        """Build an arc, rejecting ragged series and non-uniform grids."""
        grid = np.asarray(model.t, dtype=float)
        size = grid.size
        issues: list[str] = []
        if size < 2:
            issues.append(f"/t: need at least 2 nodes, got {size}")
        else:
            steps = np.diff(grid)
            spread = GRID_TOL * abs(grid[-1] - grid[0])
            if steps[0] <= 0.0 or not np.allclose(steps, steps[0], rtol=0.0, atol=spread):
                issues.append("/t: grid must be uniform and increasing")

        def matrix(name: str, rows: list[list[float]]) -> np.ndarray:
            widths = {len(row) for row in rows}
            if len(rows) != size or len(widths) > 1:
                issues.append(f"/{name}: expected {size} rows of one width, got {len(rows)} of widths {sorted(widths)}")
                return np.zeros((size, 0))
            arr = np.asarray(rows, dtype=float)
            return arr.reshape(size, -1) if arr.size else np.zeros((size, 0))

        x = matrix("x", model.x)
        u = matrix("u", model.u)
        psi = matrix("psi", model.psi)
        lam = matrix("lambda", model.lam)
        if not issues and psi.shape[1] != x.shape[1]:
            issues.append(f"/psi: width {psi.shape[1]} differs from state width {x.shape[1]}")
        if issues:
            raise ProblemFileError(issues, source=source)

        return cls(
            grid=grid,
            x=x,
            u=u,
            psi=psi,
            lam=lam,
            psi0=model.psi0,
            problem=model.problem,
            active=tuple(model.active),
            newton_iterations=model.newton_iterations,
            diagnostics=model.diagnostics,
        )

    def check_against(self, p: Problem, source: str = "<arc>") -> None:
        """Reject an arc computed for another problem or with other dimensions."""
        issues = []
        if self.problem and self.problem != p.name:
            issues.append(f"/problem: arc belongs to {self.problem!r}, not {p.name!r}")
        shapes = (("x", self.x, p.n), ("u", self.u, p.r), ("psi", self.psi, p.n), ("lambda", self.lam, p.m))
        for name, arr, width in shapes:
            if arr.shape[1] != width:
                issues.append(f"/{name}: width {arr.shape[1]}, problem expects {width}")
        if not (np.isclose(self.grid[0], p.a) and np.isclose(self.grid[-1], p.b)):
            issues.append(f"/t: grid spans [{self.grid[0]}, {self.grid[-1]}], problem horizon is [{p.a}, {p.b}]")
        if issues:
            raise ProblemFileError(issues, source=source)

    def save(self, path: str | Path) -> None:
        dump_json(self.to_model().model_dump(by_alias=True), path)

    @classmethod
    def load(cls, path: str | Path) -> "Extremal":
        data = yaml_helper.load(path)
        validator.validate_or_raise(data, "arc_file", source=str(path))
        return cls.from_model(ExtremalModel.model_validate(data), source=str(path))
