"""One-parameter families ``h^s = (T, X, U)`` and their generators."""

from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from expr import Point, ScalarField, parse

GeneratorSource = Literal["analytic", "finite-difference"]
FD_STEP_S = 1e-5

ScalarMap = Callable[[float, np.ndarray, np.ndarray], float]
VectorMap = Callable[[float, np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Generator:
    """``(tau, xi, upsilon)``: the s-derivative of a family at s = 0."""

    tau: ScalarMap
    xi: VectorMap
    upsilon: VectorMap
    source: GeneratorSource
    n: int
    r: int

    def at(self, t: float, x: Sequence[float], u: Sequence[float]) -> tuple[float, np.ndarray, np.ndarray]:
        x, u = np.asarray(x, dtype=float), np.asarray(u, dtype=float)
        return float(self.tau(t, x, u)), np.asarray(self.xi(t, x, u)), np.asarray(self.upsilon(t, x, u))

    def __add__(self, other: "Generator") -> "Generator":
        source: GeneratorSource = "analytic" if self.source == other.source == "analytic" else "finite-difference"
        return Generator(
            tau=lambda t, x, u: self.tau(t, x, u) + other.tau(t, x, u),
            xi=lambda t, x, u: self.xi(t, x, u) + other.xi(t, x, u),
            upsilon=lambda t, x, u: self.upsilon(t, x, u) + other.upsilon(t, x, u),
            source=source,
            n=self.n,
            r=self.r,
        )

    @classmethod
    def zero(cls, n: int, r: int) -> "Generator":
        return cls(lambda t, x, u: 0.0, lambda t, x, u: np.zeros(n), lambda t, x, u: np.zeros(r), "analytic", n, r)

    @classmethod
    def from_fields(cls, tau: ScalarField, xi: Sequence[ScalarField], upsilon: Sequence[ScalarField]) -> "Generator":
        return cls(
            tau=lambda t, x, u: tau.value(t, x, u),
            xi=lambda t, x, u: np.array([f.value(t, x, u) for f in xi]),
            upsilon=lambda t, x, u: np.array([f.value(t, x, u) for f in upsilon]),
            source="analytic",
            n=tau.n,
            r=tau.r,
        )


@dataclass(frozen=True)
class SymmetryFamily:
    """Maps over ``(t, x, u, s)``; ``h^0`` must be the identity."""

    name: str
    T: ScalarField
    X: tuple[ScalarField, ...]
    U: tuple[ScalarField, ...]
    epsilon: float = 1.0
    analytic: Optional[tuple[ScalarField, tuple[ScalarField, ...], tuple[ScalarField, ...]]] = None

    @classmethod
    def build(
        cls,
        name: str,
        n: int,
        r: int,
        T: str,
        X: Sequence[str],
        U: Sequence[str],
        params: Mapping[str, float] | None = None,
        epsilon: float = 1.0,
        generator: Optional[Mapping[str, object]] = None,
    ) -> "SymmetryFamily":
        """Parse family maps (and optionally an analytic generator) from text.

        ``generator`` holds ``tau`` (string), ``xi`` and ``upsilon`` (string lists).
        """
        params = dict(params or {})
        analytic = None
        if generator is not None:
            analytic = (
                parse(str(generator["tau"]), n, r, params),
                tuple(parse(str(e), n, r, params) for e in generator["xi"]),  # type: ignore[attr-defined]
                tuple(parse(str(e), n, r, params) for e in generator["upsilon"]),  # type: ignore[attr-defined]
            )
        return cls(
            name=name,
            T=parse(T, n, r, params, ("s",)),
            X=tuple(parse(e, n, r, params, ("s",)) for e in X),
            U=tuple(parse(e, n, r, params, ("s",)) for e in U),
            epsilon=float(epsilon),
            analytic=analytic,
        )

    @property
    def n(self) -> int:
        return self.T.n

    @property
    def r(self) -> int:
        return self.T.r

    @property
    def separable(self) -> bool:
        """T depends on (t, s) only and X on (t, x, s) only."""
        t_ok = self.T.variables <= {"t", "s"}
        x_ok = all(not any(v.startswith("u") for v in f.variables) for f in self.X)
        return t_ok and x_ok

    def generator(self) -> Generator:
        """Analytic generator when declared, finite-difference otherwise."""
        if self.analytic is not None:
            tau, xi, upsilon = self.analytic
            return Generator.from_fields(tau, xi, upsilon)
        return generator_of(self)

    def with_params(self, **updates: float) -> "SymmetryFamily":
        analytic = None
        if self.analytic is not None:
            tau, xi, upsilon = self.analytic
            analytic = (
                tau.with_params(**updates),
                tuple(f.with_params(**updates) for f in xi),
                tuple(f.with_params(**updates) for f in upsilon),
            )
        return SymmetryFamily(
            name=self.name,
            T=self.T.with_params(**updates),
            X=tuple(f.with_params(**updates) for f in self.X),
            U=tuple(f.with_params(**updates) for f in self.U),
            epsilon=self.epsilon,
            analytic=analytic,
        )

    def to_document(self) -> dict[str, object]:
        doc: dict[str, object] = {
            "name": self.name,
            "T": self.T.source,
            "X": [f.source for f in self.X],
            "U": [f.source for f in self.U],
            "epsilon": self.epsilon,
        }
        if self.analytic is not None:
            tau, xi, upsilon = self.analytic
            doc["generator"] = {
                "tau": tau.source,
                "xi": [f.source for f in xi],
                "upsilon": [f.source for f in upsilon],
            }
        return doc


def apply(f: SymmetryFamily, point: Point, s: float) -> Point:
    t, x, u = point
    extra = (s,)
    return Point(
        f.T.value(t, x, u, extra),
        np.array([g.value(t, x, u, extra) for g in f.X]),
        np.array([g.value(t, x, u, extra) for g in f.U]),
    )


def generator_of(f: SymmetryFamily, step: float = FD_STEP_S) -> Generator:
    """Central difference in s of every map."""

    def diff(g: ScalarField) -> ScalarMap:
        return lambda t, x, u: (g.value(t, x, u, (step,)) - g.value(t, x, u, (-step,))) / (2 * step)

    d_t = diff(f.T)
    d_x = [diff(g) for g in f.X]
    d_u = [diff(g) for g in f.U]
    return Generator(
        tau=d_t,
        xi=lambda t, x, u: np.array([d(t, x, u) for d in d_x]),
        upsilon=lambda t, x, u: np.array([d(t, x, u) for d in d_u]),
        source="finite-difference",
        n=f.n,
        r=f.r,
    )


def identity_defect(f: SymmetryFamily, points: Iterable[Point]) -> float:
    """Largest component of ``|h^0(p) - p|`` over the points."""
    worst = 0.0
    for point in points:
        image = apply(f, point, 0.0)
        worst = max(
            worst,
            abs(image.t - point.t),
            float(np.max(np.abs(image.x - np.asarray(point.x)), initial=0.0)),
            float(np.max(np.abs(image.u - np.asarray(point.u)), initial=0.0)),
        )
    return worst
