"""Tests for the expression parser, evaluation and dual-number derivatives."""

import numpy as np
import pytest

from core.errors import ArityMismatch, DomainError, ExpressionSyntaxError, UnknownIdentifier
from expr import Dual, Point, evaluate, grad, parse
from registry import BUILTINS

RESOURCE_PARAMS = {"a": 0.25, "b": 0.25, "g": 0.5}


class TestParse:
    """Grammar, precedence and rejection of bad input."""

    def test_square_root_of_control(self):
        """u1^0.5 at u1 = 4 is 2."""
        f = parse("u1^0.5", 1, 2, {})
        assert evaluate(f, Point(0.0, [1.0], [4.0, 0.0])) == 2.0

    def test_resource_constraint_vanishes_at_unit_point(self):
        """The Cobb-Douglas constraint holds with equality at x = 1, u = (1, 1)."""
        f = parse("x1^(a*g) * u2^(b*g) - u1^g", 1, 2, RESOURCE_PARAMS)
        assert f.value(0.0, [1.0], [1.0, 1.0]) == 0.0

    def test_out_of_arity_variable(self):
        """x2 does not exist when n = 1."""
        with pytest.raises(UnknownIdentifier) as exc:
            parse("x2 + 1", 1, 1, {})
        assert exc.value.name == "x2"
        assert exc.value.position == 0

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("2*3+4", 10.0),
            ("(2+3)*4", 20.0),
            ("8/4/2", 1.0),
            ("2^3^2", 512.0),
            ("-x1^2", -9.0),
            ("x1 - -1", 4.0),
            ("2^-1", 0.5),
            ("pow(2, 3)", 8.0),
            ("(-2)^3", -8.0),
            ("1.5e1 + .5", 15.5),
            ("exp(0) + log(1)", 1.0),
        ],
    )
    def test_precedence_and_associativity(self, text, expected):
        """Standard precedence; ^ binds tighter than unary minus and is right-associative."""
        assert parse(text, 1, 1).value(0.0, [3.0], [0.0]) == pytest.approx(expected, abs=1e-15)

    def test_parameters_are_bound_at_parse_time(self):
        """Parameters evaluate to their values and can be rebound into a new field."""
        f = parse("k*x1", 1, 1, {"k": 2.0})
        g = f.with_params(k=5.0)
        assert f.value(0.0, [3.0], [0.0]) == 6.0
        assert g.value(0.0, [3.0], [0.0]) == 15.0

    @pytest.mark.parametrize(
        "text,position,token",
        [
            ("x1 +", 4, ""),
            ("2 $ 3", 2, "$"),
            ("2x1", 1, "x1"),
            (")", 0, ")"),
            ("(x1", 3, ""),
            ("", 0, ""),
        ],
    )
    def test_syntax_errors_carry_position_and_token(self, text, position, token):
        """Malformed input reports where it went wrong."""
        with pytest.raises(ExpressionSyntaxError) as exc:
            parse(text, 1, 1)
        assert exc.value.position == position
        assert exc.value.token == token

    def test_function_without_arguments(self):
        """A bare function name is a syntax error."""
        with pytest.raises(ExpressionSyntaxError):
            parse("exp + 1", 1, 1)

    def test_wrong_function_arity(self):
        """exp takes one argument, pow two."""
        with pytest.raises(ArityMismatch):
            parse("exp(1, 2)", 1, 1)
        with pytest.raises(ArityMismatch):
            parse("pow(2)", 1, 1)

    def test_unknown_function(self):
        """Only exp, log and pow are known."""
        with pytest.raises(UnknownIdentifier):
            parse("sin(t)", 1, 1)

    def test_parameter_cannot_shadow_variable(self):
        """A parameter named like a variable is rejected."""
        with pytest.raises(ExpressionSyntaxError):
            parse("t + 1", 1, 1, {"t": 2.0})

    def test_extra_variables(self):
        """Family maps admit s; documented laws admit psi and H."""
        f = parse("exp(s)*x1", 1, 1, extras=("s",))
        law = parse("psi1*x1 - H", 1, 1, extras=("psi1", "H"))
        assert f.value(0.0, [2.0], [0.0], (0.0,)) == 2.0
        assert law.value(0.0, [2.0], [0.0], (3.0, 1.0)) == 5.0
        with pytest.raises(UnknownIdentifier):
            parse("s*x1", 1, 1)

    def test_variables_used(self):
        """The field records which variables it mentions."""
        f = parse("u1^g + t", 1, 2, {"g": 0.5})
        assert f.variables == frozenset({"u1", "t"})
        assert f.depends_on("t")
        assert not f.depends_on("x1")


class TestEvaluate:
    """Values and domain errors."""

    def test_square_root(self):
        """u1^0.5 at u1 = 9 is 3."""
        assert parse("u1^0.5", 1, 2).value(0.0, [0.0], [9.0, 0.0]) == 3.0

    def test_resource_constraint_at_unit_point(self):
        """x^0.125 u2^0.125 - u1^0.5 is 0 at x = 1, u = (1, 1)."""
        f = parse("x1^0.125 * u2^0.125 - u1^0.5", 1, 2)
        assert f.value(0.0, [1.0], [1.0, 1.0]) == 0.0

    def test_log_of_zero(self):
        """log(u1) at u1 = 0 is a domain error naming the sub-expression."""
        with pytest.raises(DomainError) as exc:
            parse("1 + log(u1)", 1, 1).value(0.0, [0.0], [0.0])
        assert exc.value.expression == "log(u1)"

    def test_negative_base_with_fractional_exponent(self):
        """Non-integer powers need a positive base."""
        with pytest.raises(DomainError):
            parse("u1^0.5", 1, 1).value(0.0, [0.0], [-1.0])
        with pytest.raises(DomainError):
            parse("(-8)^(1/3)", 1, 1).value(0.0, [0.0], [0.0])

    def test_division_by_zero(self):
        """Division by zero is a domain error."""
        with pytest.raises(DomainError):
            parse("1/x1", 1, 1).value(0.0, [0.0], [0.0])

    def test_point_dimension_mismatch(self):
        """Points must match (n, r)."""
        with pytest.raises(ArityMismatch):
            parse("x1", 1, 1).value(0.0, [1.0, 2.0], [0.0])

    def test_evaluation_is_pure(self):
        """Same point, same result, bit for bit."""
        f = parse("exp(x1) * u1^0.3 / (1 + t)", 1, 1)
        first = f.value(0.3, [0.7], [1.9])
        f.partials(0.3, [0.7], [1.9], ["x1", "u1"])
        assert f.value(0.3, [0.7], [1.9]) == first


class TestGrad:
    """Forward-mode derivatives."""

    def test_square_root_derivative(self):
        """d/du1 u1^0.5 at 4 is 0.25."""
        f = parse("u1^0.5", 1, 2)
        assert grad(f, Point(0.0, [1.0], [4.0, 1.0]), ["u1"])[0] == 0.25

    def test_power_rule_at_one(self):
        """x1^0.125 u2^0.125 has gradient (0.125, 0.125) at x = u2 = 1."""
        f = parse("x1^0.125 * u2^0.125", 1, 2)
        np.testing.assert_allclose(grad(f, Point(0.0, [1.0], [1.0, 1.0]), ["x1", "u2"]), [0.125, 0.125])

    def test_unused_variable_is_zero(self):
        """Variables absent from the expression get an exact zero."""
        f = parse("u1^2", 1, 2)
        assert list(f.partials(0.0, [5.0], [3.0, 7.0], ["t", "x1", "u2", "u1"])) == [0.0, 0.0, 0.0, 6.0]

    def test_variable_exponent(self):
        """d/dx x^x = x^x (1 + log x)."""
        f = parse("x1^x1", 1, 1)
        x = 1.7
        assert f.partials(0.0, [x], [0.0], ["x1"])[0] == pytest.approx(x**x * (1 + np.log(x)), rel=1e-12)

    def test_unknown_derivative_variable(self):
        """Asking for a variable outside the arity is an error."""
        with pytest.raises(ArityMismatch):
            parse("x1", 1, 1).partials(0.0, [1.0], [1.0], ["x2"])

    def test_dual_arithmetic(self):
        """Product and quotient rules on raw duals."""
        a, b = Dual(2.0, 1.0), Dual(4.0, 0.0)
        assert (a * b).der == 4.0
        assert (a / b).der == 0.25
        assert (1.0 / a).der == -0.25
        assert (3.0 - a).der == -1.0


def _builtin_fields():
    """Every expression field of every built-in example, with its extras."""
    for name, factory in BUILTINS.items():
        entry = factory()
        p = entry.problem
        for f in p.fields():
            yield name, p, f
        for family in entry.families:
            for f in (family.T, *family.X, *family.U):
                yield name, p, f
        for law in entry.documented_laws:
            if law.expression is not None:
                yield name, p, law.expression


@pytest.mark.parametrize("name,problem,field", list(_builtin_fields()))
def test_grad_matches_central_differences(name, problem, field):
    """Dual-number partials agree with central differences (h = 1e-6) at 100 random points."""
    rng = np.random.default_rng(7)
    wrt = list(field.names)
    h = 1e-6
    for _ in range(100):
        t = rng.uniform(problem.a, problem.b)
        x = np.exp(rng.uniform(np.log(0.1), np.log(10.0), field.n))
        u = np.exp(rng.uniform(np.log(0.1), np.log(10.0), field.r))
        extra = rng.uniform(-0.5, 0.5, len(field.extras))
        exact = field.partials(t, x, u, wrt, extra)
        base = np.concatenate([[t], x, u, extra])
        for k in range(base.size):
            plus, minus = base.copy(), base.copy()
            plus[k] += h
            minus[k] -= h

            def at(v):
                return field.value(v[0], v[1 : 1 + field.n], v[1 + field.n : 1 + field.n + field.r], v[1 + field.n + field.r :])

            fd = (at(plus) - at(minus)) / (2 * h)
            assert abs(exact[k] - fd) <= 1e-6, (name, field.source, wrt[k])


@pytest.mark.parametrize("name,problem,field", list(_builtin_fields()))
def test_printed_form_round_trips(name, problem, field):
    """Re-parsing the printed form gives a field that evaluates identically."""
    again = parse(field.to_source(), field.n, field.r, dict(field.params), field.extras)
    rng = np.random.default_rng(11)
    for _ in range(100):
        t = rng.uniform(problem.a, problem.b)
        x = np.exp(rng.uniform(-2.0, 2.0, field.n))
        u = np.exp(rng.uniform(-2.0, 2.0, field.r))
        extra = rng.uniform(-0.5, 0.5, len(field.extras))
        assert again.value(t, x, u, extra) == field.value(t, x, u, extra)
