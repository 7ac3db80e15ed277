"""Problem documents (JSON or YAML) to registry entries and back.

Loading never stops at the first problem: schema errors, expression errors,
structural diagnostics and h^0 failures are collected and raised together.
"""

from collections.abc import Mapping
from pathlib import Path
from typing import Any

import numpy as np
from ruamel.yaml.error import YAMLError

from core.errors import InvarianceError, ProblemFileError
from core.settings import settings
from core.yaml_utils import yaml_helper
from expr import ScalarField, parse
from ocp import Problem, feasible_points, validate
from registry.entries import DocumentedLaw, ExampleEntry, law_extras
from schemas.validators import validator
from symmetry.family import SymmetryFamily, identity_defect

IDENTITY_POINTS = 20
IDENTITY_TOL = 1e-12


class _Collector:
    def __init__(self) -> None:
        self.diagnostics: list[str] = []

    def parse(self, label: str, text: str, n: int, r: int, params: Mapping[str, float], extras=()) -> ScalarField | None:
        try:
            return parse(text, n, r, params, extras)
        except InvarianceError as exc:
            self.diagnostics.append(f"{label}: {exc.message}")
            return None


def _family(doc: Mapping[str, Any], index: int, n: int, r: int, params: Mapping[str, float], out: _Collector):
    label = f"families[{index}]"
    if len(doc["X"]) != n or len(doc["U"]) != r:
        out.diagnostics.append(f"{label}: X needs {n} and U needs {r} expressions")
        return None
    before = len(out.diagnostics)
    out.parse(f"{label}.T", doc["T"], n, r, params, ("s",))
    for i, e in enumerate(doc["X"]):
        out.parse(f"{label}.X[{i}]", e, n, r, params, ("s",))
    for j, e in enumerate(doc["U"]):
        out.parse(f"{label}.U[{j}]", e, n, r, params, ("s",))
    generator = doc.get("generator")
    if generator is not None:
        if len(generator["xi"]) != n or len(generator["upsilon"]) != r:
            out.diagnostics.append(f"{label}.generator: xi needs {n} and upsilon needs {r} expressions")
            return None
        for e in [generator["tau"], *generator["xi"], *generator["upsilon"]]:
            out.parse(f"{label}.generator", e, n, r, params)
    if len(out.diagnostics) > before:
        return None
    return SymmetryFamily.build(
        doc["name"], n, r, doc["T"], doc["X"], doc["U"], params, doc.get("epsilon", 1.0), generator
    )


def entry_from_document(data: Any, source: str = "<document>") -> ExampleEntry:
    """Validate a problem document and build an entry from it."""
    schema_errors = validator.errors(data, "problem_file")
    if schema_errors:
        raise ProblemFileError(schema_errors, source=source)

    out = _Collector()
    n, r = data["n"], data["r"]
    params = {k: float(v) for k, v in data.get("params", {}).items()}
    cost = out.parse("cost", data["cost"], n, r, params)
    dynamics = [out.parse(f"dynamics[{i}]", e, n, r, params) for i, e in enumerate(data["dynamics"])]
    constraints = [out.parse(f"constraints[{i}]", e, n, r, params) for i, e in enumerate(data["constraints"])]
    if data["m"] != len(data["constraints"]):
        out.diagnostics.append(f"m: {data['m']} declared but {len(data['constraints'])} constraints given")

    problem = None
    if cost is not None and None not in dynamics and None not in constraints:
        problem = Problem(
            name=data.get("name", Path(source).stem),
            n=n,
            r=r,
            m=len(constraints),
            m_ineq=data["m_ineq"],
            L=cost,
            dynamics=tuple(dynamics),
            constraints=tuple(constraints),
            a=float(data["interval"]["a"]),
            b=float(data["interval"]["b"]),
            x_a=tuple(float(v) for v in data["boundary"]["x_a"]),
            x_b=tuple(float(v) for v in data["boundary"]["x_b"]),
            sense=data["sense"],
            params=tuple(sorted(params.items())),
            description=data.get("description", ""),
        )
        out.diagnostics.extend(str(d) for d in validate(problem))

    families = []
    for i, doc in enumerate(data.get("families", [])):
        family = _family(doc, i, n, r, params, out)
        if family is not None:
            families.append(family)

    laws = []
    for i, law in enumerate(data.get("documented_laws", [])):
        if isinstance(law, str):
            laws.append(DocumentedLaw("", law))
            continue
        expression = None
        if "expression" in law:
            expression = out.parse(f"documented_laws[{i}]", law["expression"], n, r, params, law_extras(n))
        laws.append(DocumentedLaw(law["family"], law["display"], expression))

    if problem is not None and not out.diagnostics and families:
        rng = np.random.default_rng(settings.default_seed)
        try:
            sample = feasible_points(problem, IDENTITY_POINTS, rng)
        except InvarianceError as exc:
            out.diagnostics.append(f"families: could not sample points for the h^0 check ({exc.message})")
            sample = []
        for i, family in enumerate(families):
            try:
                defect = identity_defect(family, sample)
            except InvarianceError as exc:
                out.diagnostics.append(f"families[{i}]: {exc.message}")
                continue
            if defect > IDENTITY_TOL:
                out.diagnostics.append(f"families[{i}]: h^0 differs from the identity by {defect:.3g}")

    if out.diagnostics:
        raise ProblemFileError(out.diagnostics, source=source)
    assert problem is not None

    solver = data.get("solver", {})
    return ExampleEntry(
        name=problem.name,
        problem=problem,
        families=tuple(families),
        documented_laws=tuple(laws),
        default_params=params,
        default_psi_a=tuple(solver.get("psi_a", ())),
        seed_u=tuple(solver.get("seed_u", ())),
        seed_lambda=tuple(solver.get("seed_lambda", ())),
        active=tuple(solver.get("active", ())),
        description=problem.description,
    )


def load_problem_file(path: str | Path) -> ExampleEntry:
    path = Path(path)
    try:
        data = yaml_helper.load(path)
    except (OSError, ValueError, YAMLError) as exc:
        raise ProblemFileError([f"cannot read document: {exc}"], source=str(path)) from exc
    return entry_from_document(data, source=str(path))


def export_problem_file(entry: ExampleEntry) -> dict[str, Any]:
    """The entry as a problem document that :func:`entry_from_document` accepts."""
    p = entry.problem
    doc: dict[str, Any] = {
        "name": entry.name,
        "description": entry.description,
        "n": p.n,
        "r": p.r,
        "m": p.m,
        "m_ineq": p.m_ineq,
        "sense": p.sense,
        "interval": {"a": p.a, "b": p.b},
        "boundary": {"x_a": list(p.x_a), "x_b": list(p.x_b)},
        "params": dict(p.params),
        "cost": p.L.source,
        "dynamics": [f.source for f in p.dynamics],
        "constraints": [c.source for c in p.constraints],
        "families": [f.to_document() for f in entry.families],
        "documented_laws": [
            {"family": law.family, "display": law.display, "expression": law.expression.source}
            if law.expression is not None
            else {"family": law.family, "display": law.display}
            for law in entry.documented_laws
        ],
    }
    solver: dict[str, Any] = {"psi_a": list(entry.psi_a)}
    if entry.seed_u:
        solver["seed_u"] = list(entry.seed_u)
    if entry.seed_lambda:
        solver["seed_lambda"] = list(entry.seed_lambda)
    if entry.active:
        solver["active"] = list(entry.active)
    doc["solver"] = solver
    return doc
