"""The constrained optimal control problem and its structural checks.

Constraint rows follow the usual index convention: equalities first
(rows ``0 .. m - m_ineq - 1``), then the inequalities ``phi_j >= 0``.
"""

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Literal, NamedTuple

import numpy as np

from expr import Point, ScalarField, parse

Sense = Literal["maximize", "minimize"]


@dataclass(frozen=True)
class Problem:
    name: str
    n: int
    r: int
    m: int
    m_ineq: int
    L: ScalarField
    dynamics: tuple[ScalarField, ...]
    constraints: tuple[ScalarField, ...]
    a: float
    b: float
    x_a: tuple[float, ...]
    x_b: tuple[float, ...]
    sense: Sense = "minimize"
    params: tuple[tuple[str, float], ...] = ()
    description: str = ""
    x_names: tuple[str, ...] = field(init=False, repr=False, compare=False)
    u_names: tuple[str, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "x_names", tuple(f"x{i}" for i in range(1, self.n + 1)))
        object.__setattr__(self, "u_names", tuple(f"u{j}" for j in range(1, self.r + 1)))

    @classmethod
    def build(
        cls,
        name: str,
        n: int,
        r: int,
        cost: str,
        dynamics: Sequence[str],
        constraints: Sequence[str] = (),
        *,
        m_ineq: int = 0,
        interval: tuple[float, float] = (0.0, 1.0),
        x_a: Sequence[float],
        x_b: Sequence[float],
        sense: Sense = "minimize",
        params: Mapping[str, float] | None = None,
        description: str = "",
    ) -> "Problem":
        """Parse expression strings into a problem."""
        params = dict(params or {})
        return cls(
            name=name,
            n=n,
            r=r,
            m=len(constraints),
            m_ineq=m_ineq,
            L=parse(cost, n, r, params),
            dynamics=tuple(parse(d, n, r, params) for d in dynamics),
            constraints=tuple(parse(c, n, r, params) for c in constraints),
            a=float(interval[0]),
            b=float(interval[1]),
            x_a=tuple(float(v) for v in x_a),
            x_b=tuple(float(v) for v in x_b),
            sense=sense,
            params=tuple(sorted(params.items())),
            description=description,
        )

    def with_params(self, **updates: float) -> "Problem":
        """Same problem with some parameters rebound; fields are re-parsed."""
        merged = dict(self.params)
        merged.update(updates)
        return Problem.build(
            self.name,
            self.n,
            self.r,
            self.L.source,
            [f.source for f in self.dynamics],
            [c.source for c in self.constraints],
            m_ineq=self.m_ineq,
            interval=(self.a, self.b),
            x_a=self.x_a,
            x_b=self.x_b,
            sense=self.sense,
            params=merged,
            description=self.description,
        )

    @property
    def equality_rows(self) -> range:
        return range(0, self.m - self.m_ineq)

    @property
    def inequality_rows(self) -> range:
        return range(self.m - self.m_ineq, self.m)

    @property
    def autonomous(self) -> bool:
        return not any(f.depends_on("t") for f in self.fields())

    def fields(self) -> tuple[ScalarField, ...]:
        return (self.L, *self.dynamics, *self.constraints)

    # Vector evaluation helpers ------------------------------------------------

    def cost(self, t: float, x: Sequence[float], u: Sequence[float]) -> float:
        return self.L.value(t, x, u)

    def velocity(self, t: float, x: Sequence[float], u: Sequence[float]) -> np.ndarray:
        return np.array([f.value(t, x, u) for f in self.dynamics])

    def constraint_values(self, t: float, x: Sequence[float], u: Sequence[float]) -> np.ndarray:
        return np.array([c.value(t, x, u) for c in self.constraints])

    def jacobian(
        self,
        fields: Sequence[ScalarField],
        t: float,
        x: Sequence[float],
        u: Sequence[float],
        wrt: Sequence[str],
    ) -> np.ndarray:
        """Rows of partial derivatives, shape ``(len(fields), len(wrt))``."""
        out = np.zeros((len(fields), len(wrt)))
        for i, f in enumerate(fields):
            out[i] = f.partials(t, x, u, wrt)
        return out


class Diagnostic(NamedTuple):
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


def validate(p: Problem) -> list[Diagnostic]:
    """Structural checks; returns one diagnostic per violation, empty when valid."""
    out: list[Diagnostic] = []
    if p.n < 1 or p.r < 1:
        out.append(Diagnostic("BadDimension", f"n={p.n}, r={p.r}; both must be at least 1"))
    if not p.a < p.b:
        out.append(Diagnostic("IntervalReversed", f"a={p.a} is not below b={p.b}"))
    if p.m_ineq < 0 or p.m_ineq > p.m:
        out.append(Diagnostic("InequalityCount", f"m_ineq={p.m_ineq} outside 0..m={p.m}"))
    if p.m > p.r:
        out.append(Diagnostic("TooManyConstraints", f"m={p.m} exceeds r={p.r}; du-rank condition unsatisfiable"))
    if len(p.constraints) != p.m:
        out.append(Diagnostic("ConstraintCount", f"{len(p.constraints)} constraint fields for m={p.m}"))
    if len(p.dynamics) != p.n:
        out.append(Diagnostic("DynamicsCount", f"{len(p.dynamics)} dynamics fields for n={p.n}"))
    if len(p.x_a) != p.n or len(p.x_b) != p.n:
        out.append(Diagnostic("BoundaryDimension", f"boundary values must have {p.n} components"))
    if p.sense not in ("maximize", "minimize"):
        out.append(Diagnostic("UnknownSense", f"sense {p.sense!r}"))
    labelled = [("cost", p.L)]
    labelled += [(f"dynamics[{i}]", f) for i, f in enumerate(p.dynamics)]
    labelled += [(f"constraints[{i}]", c) for i, c in enumerate(p.constraints)]
    for label, f in labelled:
        if (f.n, f.r) != (p.n, p.r) or f.extras:
            out.append(Diagnostic("ArityMismatch", f"{label} declared over (n={f.n}, r={f.r}), problem is ({p.n}, {p.r})"))
    return out


@dataclass
class Trajectory:
    """State and control samples on a uniform grid."""

    grid: np.ndarray
    x: np.ndarray  # (N + 1, n)
    u: np.ndarray  # (N + 1, r)

    @property
    def size(self) -> int:
        return len(self.grid)

    @property
    def h(self) -> float:
        return float(self.grid[1] - self.grid[0])

    def point(self, k: int) -> Point:
        return Point(float(self.grid[k]), self.x[k], self.u[k])
