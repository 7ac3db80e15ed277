"""Expression language: parsing, evaluation and forward-mode derivatives."""

from expr.dual import Dual
from expr.field import Point, ScalarField, evaluate, grad, parse, variable_names

__all__ = ["Dual", "Point", "ScalarField", "evaluate", "grad", "parse", "variable_names"]
