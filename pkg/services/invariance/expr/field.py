"""Scalar fields over (t, x, u): parsed once, evaluated on floats or duals."""

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np

from core.errors import ArityMismatch, ExpressionSyntaxError
from expr.dual import Dual, real
from expr.parser import FUNCTIONS, Compiled, Node, Parser


class Point(NamedTuple):
    t: float
    x: Sequence[float]
    u: Sequence[float]


def variable_names(n: int, r: int, extras: Sequence[str] = ()) -> list[str]:
    """Environment layout: ``t, x1..xn, u1..ur, *extras``."""
    return ["t", *(f"x{i}" for i in range(1, n + 1)), *(f"u{j}" for j in range(1, r + 1)), *extras]


@dataclass(frozen=True)
class ScalarField:
    """A compiled expression ``f(t, x, u[, extras])``.

    ``params`` are substituted as named constants; they stay visible in
    :meth:`to_source` so a field can be written back to a problem file.
    """

    source: str
    n: int
    r: int
    params: tuple[tuple[str, float], ...] = ()
    extras: tuple[str, ...] = ()
    tree: Node = field(init=False, repr=False, compare=False)
    names: tuple[str, ...] = field(init=False, repr=False, compare=False)
    variables: frozenset[str] = field(init=False, repr=False, compare=False)
    _fn: Compiled = field(init=False, repr=False, compare=False)
    _slots: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        names = variable_names(self.n, self.r, self.extras)
        slots = {name: i for i, name in enumerate(names)}
        param_map = dict(self.params)
        for name in param_map:
            if name in slots or name in FUNCTIONS:
                raise ExpressionSyntaxError("parameter name shadows a variable or function", 0, name)
        tree = Parser(self.source, slots, param_map).parse()
        object.__setattr__(self, "tree", tree)
        object.__setattr__(self, "names", tuple(names))
        object.__setattr__(self, "variables", tree.variables())
        object.__setattr__(self, "_fn", tree.compile())
        object.__setattr__(self, "_slots", slots)

    def _env(self, t: float, x: Sequence[float], u: Sequence[float], extra: Sequence[float]) -> list[float]:
        if len(x) != self.n or len(u) != self.r or len(extra) != len(self.extras):
            raise ArityMismatch(
                "point dimensions do not match the field",
                expected=[self.n, self.r, len(self.extras)],
                got=[len(x), len(u), len(extra)],
            )
        return [float(t), *map(float, x), *map(float, u), *map(float, extra)]

    def value(self, t: float, x: Sequence[float], u: Sequence[float], extra: Sequence[float] = ()) -> float:
        return float(real(self._fn(self._env(t, x, u, extra))))

    def partials(
        self,
        t: float,
        x: Sequence[float],
        u: Sequence[float],
        wrt: Sequence[str],
        extra: Sequence[float] = (),
    ) -> np.ndarray:
        """Exact partial derivatives, one forward pass per requested variable.

        Variables the expression never mentions get 0 without a pass.
        """
        env: list[Any] = self._env(t, x, u, extra)
        out = np.zeros(len(wrt))
        for k, name in enumerate(wrt):
            slot = self._slots.get(name)
            if slot is None:
                raise ArityMismatch(f"no variable {name!r} in this field", variable=name)
            if name not in self.variables:
                continue
            seeded = list(env)
            seeded[slot] = Dual(env[slot], 1.0)
            result = self._fn(seeded)
            out[k] = result.der if isinstance(result, Dual) else 0.0
        return out

    def depends_on(self, name: str) -> bool:
        return name in self.variables

    def to_source(self) -> str:
        return self.tree.render()

    def with_params(self, **updates: float) -> "ScalarField":
        merged = dict(self.params)
        merged.update(updates)
        return ScalarField(self.source, self.n, self.r, tuple(sorted(merged.items())), self.extras)


def parse(
    text: str,
    n: int,
    r: int,
    params: Mapping[str, float] | None = None,
    extras: Sequence[str] = (),
) -> ScalarField:
    return ScalarField(text, n, r, tuple(sorted((params or {}).items())), tuple(extras))


def evaluate(f: ScalarField, point: Point, extra: Sequence[float] = ()) -> float:
    return f.value(point.t, point.x, point.u, extra)


def grad(f: ScalarField, point: Point, wrt: Sequence[str], extra: Sequence[float] = ()) -> np.ndarray:
    return f.partials(point.t, point.x, point.u, wrt, extra)
