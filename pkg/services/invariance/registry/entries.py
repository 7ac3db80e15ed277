"""Built-in problems with their symmetry families and documented laws."""

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from core.errors import NotFound
from expr import Point, ScalarField, parse
from ocp import Problem, feasible_points
from solver.oracle import OracleSolution, resource_oracle
from symmetry.family import SymmetryFamily

Sampler = Callable[[Problem, int, np.random.Generator], list[Point]]
Oracle = Callable[[Sequence[float]], OracleSolution]


def law_extras(n: int) -> tuple[str, ...]:
    """Extra variables of a documented-law expression: ``psi1..psin`` and ``H``."""
    return (*(f"psi{i}" for i in range(1, n + 1)), "H")


@dataclass(frozen=True)
class DocumentedLaw:
    family: str
    display: str
    expression: Optional[ScalarField] = None

    def evaluate(self, t: float, x: Sequence[float], u: Sequence[float], psi: Sequence[float], H: float) -> float:
        if self.expression is None:
            raise ValueError(f"law {self.display!r} has no evaluable expression")
        return self.expression.value(t, x, u, (*psi, H))


@dataclass(frozen=True)
class ExampleEntry:
    name: str
    problem: Problem
    families: tuple[SymmetryFamily, ...]
    documented_laws: tuple[DocumentedLaw, ...] = ()
    default_params: dict[str, float] = field(default_factory=dict)
    default_psi_a: tuple[float, ...] = ()
    seed_u: tuple[float, ...] = ()
    seed_lambda: tuple[float, ...] = ()
    active: tuple[int, ...] = ()
    description: str = ""
    sampler: Sampler = feasible_points
    oracle: Optional[Oracle] = None

    def family(self, name: str) -> SymmetryFamily:
        for f in self.families:
            if f.name == name:
                return f
        raise NotFound(name, [f.name for f in self.families])

    def law(self, family: str) -> Optional[DocumentedLaw]:
        return next((law for law in self.documented_laws if law.family == family), None)

    @property
    def seeds(self) -> tuple[np.ndarray, np.ndarray]:
        u = self.seed_u or (1.0,) * self.problem.r
        lam = self.seed_lambda or (0.0,) * self.problem.m
        return np.asarray(u, dtype=float), np.asarray(lam, dtype=float)

    @property
    def psi_a(self) -> np.ndarray:
        return np.asarray(self.default_psi_a or (0.0,) * self.problem.n, dtype=float)

    def summary(self) -> dict[str, Any]:
        p = self.problem
        return {
            "name": self.name,
            "description": self.description,
            "n": p.n,
            "r": p.r,
            "m": p.m,
            "m_ineq": p.m_ineq,
            "sense": p.sense,
            "autonomous": p.autonomous,
            "interval": [p.a, p.b],
            "params": dict(p.params),
            "families": [f.name for f in self.families],
            "documented_laws": [{"family": law.family, "display": law.display} for law in self.documented_laws],
        }


def _law(family: str, display: str, expression: str, n: int, r: int, params: dict[str, float]) -> DocumentedLaw:
    return DocumentedLaw(family, display, parse(expression, n, r, params, law_extras(n)))


def _time_translation(n: int, r: int) -> SymmetryFamily:
    return SymmetryFamily.build(
        "time-translation",
        n,
        r,
        T="t + s",
        X=[f"x{i}" for i in range(1, n + 1)],
        U=[f"u{j}" for j in range(1, r + 1)],
        generator={"tau": "1", "xi": ["0"] * n, "upsilon": ["0"] * r},
    )


def _resource_problem(name: str, gamma: float, alpha: float, beta: float, x0: float, xT: float, T: float) -> Problem:
    return Problem.build(
        name,
        n=1,
        r=2,
        cost="u1^gamma",
        dynamics=["-u2"],
        constraints=["x1^(alpha*gamma) * u2^(beta*gamma) - u1^gamma"],
        interval=(0.0, T),
        x_a=[x0],
        x_b=[xT],
        sense="maximize",
        params={"gamma": gamma, "alpha": alpha, "beta": beta},
        description="Extraction of an exhaustible resource with Cobb-Douglas production",
    )


def _resource_sampler(gamma: float, alpha: float, beta: float) -> Sampler:
    def sample(p: Problem, count: int, rng: np.random.Generator) -> list[Point]:
        out = []
        for _ in range(count):
            t = float(rng.uniform(p.a, p.b))
            x, u2 = np.exp(rng.uniform(np.log(0.1), np.log(10.0), 2))
            u1 = (x ** (alpha * gamma) * u2 ** (beta * gamma)) ** (1.0 / gamma)
            out.append(Point(t, np.array([x]), np.array([u1, u2])))
        return out

    return sample


def exhaustible_resource(
    gamma: float = 0.5,
    alpha: float = 0.25,
    beta: float = 0.25,
    x0: float = 1.0,
    xT: float = 0.5,
    T: float = 1.0,
) -> ExampleEntry:
    """max int u1^gamma, x' = -u2, x^(alpha gamma) u2^(beta gamma) = u1^gamma."""
    params = {"gamma": gamma, "alpha": alpha, "beta": beta}
    p = _resource_problem("exhaustible-resource", gamma, alpha, beta, x0, xT, T)
    scaling = SymmetryFamily.build(
        "scaling",
        1,
        2,
        T="exp(-gamma*(alpha+beta)*s) * t",
        X=["exp((1-beta*gamma)*s) * x1"],
        U=["exp((alpha+beta)*s) * u1", "exp((alpha*gamma+1)*s) * u2"],
        params=params,
        generator={
            "tau": "-gamma*(alpha+beta)*t",
            "xi": ["(1-beta*gamma)*x1"],
            "upsilon": ["(alpha+beta)*u1", "(alpha*gamma+1)*u2"],
        },
    )
    laws = (
        _law(
            "scaling",
            "(1 - beta gamma) psi(t) x(t) + gamma H (alpha + beta) t = constant",
            "(1-beta*gamma)*psi1*x1 + gamma*H*(alpha+beta)*t",
            1,
            2,
            params,
        ),
        _law("time-translation", "H = constant", "-H", 1, 2, params),
    )
    return ExampleEntry(
        name="exhaustible-resource",
        problem=p,
        families=(scaling, _time_translation(1, 2)),
        documented_laws=laws,
        default_params={**params, "x0": x0, "xT": xT, "T": T},
        default_psi_a=(-0.4,),
        seed_u=(1.0, 1.0),
        seed_lambda=(-1.0,),
        description=p.description,
        sampler=_resource_sampler(gamma, alpha, beta),
        oracle=lambda grid: resource_oracle(gamma, alpha, beta, x0, xT, T, grid),
    )


def autonomous_energy(
    gamma: float = 0.5,
    alpha: float = 0.25,
    beta: float = 0.25,
    x0: float = 1.0,
    xT: float = 0.5,
    T: float = 1.0,
) -> ExampleEntry:
    """The resource problem paired with time translation; H is conserved."""
    params = {"gamma": gamma, "alpha": alpha, "beta": beta}
    p = _resource_problem("autonomous-energy", gamma, alpha, beta, x0, xT, T)
    return ExampleEntry(
        name="autonomous-energy",
        problem=p,
        families=(_time_translation(1, 2),),
        documented_laws=(_law("time-translation", "H = constant", "-H", 1, 2, params),),
        default_params={**params, "x0": x0, "xT": xT, "T": T},
        default_psi_a=(-0.4,),
        seed_u=(1.0, 1.0),
        seed_lambda=(-1.0,),
        description="Autonomous problem under time translation: the Hamiltonian is a first integral",
        sampler=_resource_sampler(gamma, alpha, beta),
        oracle=lambda grid: resource_oracle(gamma, alpha, beta, x0, xT, T, grid),
    )


def _translation(n: int = 1, r: int = 1) -> SymmetryFamily:
    return SymmetryFamily.build(
        "translation", n, r, T="t", X=["x1 + s"], U=["u1"], generator={"tau": "0", "xi": ["1"], "upsilon": ["0"]}
    )


def quadratic_translation() -> ExampleEntry:
    """min int u^2, x' = u; the state is cyclic, so psi is conserved."""
    p = Problem.build(
        "quadratic-translation",
        n=1,
        r=1,
        cost="u1^2",
        dynamics=["u1"],
        x_a=[0.0],
        x_b=[1.0],
        sense="minimize",
        description="Unconstrained quadratic control; translation in x",
    )
    return ExampleEntry(
        name="quadratic-translation",
        problem=p,
        families=(_translation(), _time_translation(1, 1)),
        documented_laws=(
            _law("translation", "psi = constant", "psi1", 1, 1, {}),
            _law("time-translation", "H = constant", "-H", 1, 1, {}),
        ),
        default_psi_a=(0.0,),
        seed_u=(1.0,),
        description=p.description,
    )


def weighted_quadratic() -> ExampleEntry:
    """min int (1 + t) u^2, x' = u; non-autonomous, psi = 2 / ln 2."""
    p = Problem.build(
        "weighted-quadratic",
        n=1,
        r=1,
        cost="(1 + t) * u1^2",
        dynamics=["u1"],
        x_a=[0.0],
        x_b=[1.0],
        sense="minimize",
        description="Time-weighted quadratic control; explicit time dependence",
    )
    return ExampleEntry(
        name="weighted-quadratic",
        problem=p,
        families=(_translation(),),
        documented_laws=(_law("translation", "psi = constant", "psi1", 1, 1, {}),),
        default_psi_a=(1.0,),
        seed_u=(1.0,),
        description=p.description,
    )


BUILTINS: dict[str, Callable[..., ExampleEntry]] = {
    "exhaustible-resource": exhaustible_resource,
    "quadratic-translation": quadratic_translation,
    "autonomous-energy": autonomous_energy,
    "weighted-quadratic": weighted_quadratic,
}
