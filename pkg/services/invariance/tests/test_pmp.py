"""Tests for the Hamiltonian, the algebraic resolve and the PMP residual suite."""

import dataclasses

import numpy as np
import pytest

from core.errors import DomainError, NoConvergence, SingularJacobian
from ocp import Problem
from pmp import resolve as resolve_module
from pmp import (
    CostateState,
    ResolveConfig,
    active_candidates,
    adjoint_rhs,
    dHdt_residual,
    hamiltonian,
    hamiltonian_check,
    hamiltonian_jumps,
    hamiltonian_series,
    partial_t,
    pmp_report,
    resolve_algebraic,
    stationarity_residual,
)
from registry import get
from solver import integrate

UNIT = (0.0, np.array([1.0]), np.array([1.0, 1.0]))


@pytest.fixture
def bounded():
    """min u^2, x' = u, subject to u - 1 >= 0."""
    return Problem.build(
        "bounded", n=1, r=1, cost="u1^2", dynamics=["u1"], constraints=["u1 - 1"], m_ineq=1, x_a=[0.0], x_b=[1.0]
    )


def test_hamiltonian_at_unit_point(resource):
    """H = -1 + 0.3 + 0 at x = u = 1, psi = -0.3, lambda = -1."""
    c = CostateState.of(-1.0, [-0.3], [-1.0])
    assert hamiltonian(resource.problem, *UNIT, c) == pytest.approx(-0.7, abs=1e-15)


def test_hamiltonian_is_linear_in_multipliers(resource):
    """H(t, x, u, c1 + c2) = H(.., c1) + H(.., c2)."""
    p = resource.problem
    point = (0.3, np.array([0.8]), np.array([1.2, 0.7]))
    c1 = CostateState.of(-1.0, [0.4], [2.0])
    c2 = CostateState.of(0.0, [-1.1], [0.5])
    assert hamiltonian(p, *point, c1 + c2) == pytest.approx(hamiltonian(p, *point, c1) + hamiltonian(p, *point, c2))


def test_adjoint_at_unit_point(resource):
    """psi' = -lambda * 1/8 at x = u = 1."""
    c = CostateState.of(-1.0, [-0.3], [-1.0])
    np.testing.assert_allclose(adjoint_rhs(resource.problem, *UNIT, c), [0.125])


def test_stationarity_vanishes_on_the_extremal_relation(resource):
    """With lambda = -1 and psi = -1/8 both control rows vanish at the unit point."""
    c = CostateState.of(-1.0, [-0.125], [-1.0])
    np.testing.assert_allclose(stationarity_residual(resource.problem, *UNIT, c), [0.0, 0.0], atol=1e-15)


def test_partial_t_of_autonomous_problem(resource):
    """No explicit time dependence."""
    assert partial_t(resource.problem, *UNIT, CostateState.of(-1.0, [0.2], [1.0])) == 0.0


class TestResolve:
    """Newton solve of (u, lambda) from stationarity and the constraints."""

    def test_quadratic_control(self, quadratic):
        """-2u + psi = 0 gives u = psi / 2."""
        sol = resolve_algebraic(quadratic.problem, 0.0, [0.0], (-1.0, [2.0]), ([0.3], []))
        assert sol.u[0] == pytest.approx(1.0, abs=1e-12)
        assert sol.lam.size == 0
        assert sol.residual <= 1e-12

    def test_resource_closed_form(self, resource):
        """At x = 1, psi = -0.3: lambda = -1, u2 = 2.4^(-8/7), u1 = u2^(1/4)."""
        sol = resolve_algebraic(resource.problem, 0.0, [1.0], (-1.0, [-0.3]), ([1.0, 1.0], [-1.0]))
        u2 = 2.4 ** (-8.0 / 7.0)
        np.testing.assert_allclose(sol.u, [u2**0.25, u2], rtol=1e-10)
        np.testing.assert_allclose(sol.lam, [-1.0], rtol=1e-10)

    def test_domain_error_at_seed(self, resource):
        """u1 = 0 is outside the domain of u1^(1/2) and its derivative."""
        with pytest.raises(DomainError) as exc:
            resolve_algebraic(resource.problem, 0.0, [1.0], (-1.0, [-0.3]), ([0.0, 1.0], [-1.0]))
        assert exc.value.details["stage"] == "initial guess"

    def test_is_deterministic(self, resource):
        """Same inputs, same bits."""
        args = (resource.problem, 0.2, [0.9], (-1.0, [-0.35]), ([1.0, 1.0], [-1.0]))
        first, second = resolve_algebraic(*args), resolve_algebraic(*args)
        np.testing.assert_array_equal(first.u, second.u)
        np.testing.assert_array_equal(first.lam, second.lam)

    def test_guess_size_is_checked(self, resource):
        """The guess must have r + m entries."""
        with pytest.raises(ValueError):
            resolve_algebraic(resource.problem, 0.0, [1.0], (-1.0, [-0.3]), ([1.0], [-1.0]))

    def test_inactive_inequality_has_zero_multiplier(self, bounded):
        """Inactive rows pin lambda to 0; the unconstrained optimum u = psi / 2 is kept."""
        sol = resolve_algebraic(bounded, 0.0, [0.0], (-1.0, [4.0]), ([1.0], [0.0]))
        assert sol.u[0] == pytest.approx(2.0, abs=1e-12)
        assert sol.lam[0] == pytest.approx(0.0, abs=1e-14)

    def test_active_inequality_binds(self, bounded):
        """An active row enforces u = 1 and yields a nonnegative multiplier."""
        sol = resolve_algebraic(bounded, 0.0, [0.0], (-1.0, [0.0]), ([1.5], [0.0]), active={0})
        assert sol.u[0] == pytest.approx(1.0, abs=1e-12)
        assert sol.lam[0] == pytest.approx(2.0, abs=1e-10)

    def test_singular_jacobian(self):
        """A control that enters H linearly leaves dH/du without a u-derivative."""
        linear = Problem.build("linear", n=1, r=1, cost="u1", dynamics=["u1"], x_a=[0.0], x_b=[1.0])
        with pytest.raises(SingularJacobian):
            resolve_algebraic(linear, 0.0, [0.0], (-1.0, [2.0]), ([1.0], []))

    def test_warm_jacobian_is_reused(self, resource, monkeypatch):
        """A factored matrix from a nearby point converges without new finite differences."""
        first = resolve_algebraic(resource.problem, 0.2, [0.9], (-1.0, [-0.35]), ([1.0, 1.0], [-1.0]))
        assert first.jacobian is not None
        calls = []
        original = resolve_module._fd_jacobian
        monkeypatch.setattr(resolve_module, "_fd_jacobian", lambda *args: calls.append(1) or original(*args))
        second = resolve_algebraic(
            resource.problem, 0.201, [0.8995], (-1.0, [-0.3501]), (first.u, first.lam), jacobian=first.jacobian
        )
        assert calls == []
        assert second.jacobian is first.jacobian
        assert second.residual <= 1e-12

    def test_budget_exhaustion(self, resource):
        """A single iteration is not enough from a poor seed."""
        config = ResolveConfig(max_iter=1)
        with pytest.raises(NoConvergence):
            resolve_algebraic(resource.problem, 0.0, [1.0], (-1.0, [-0.3]), ([1.0, 1.0], [-1.0]), config=config)

    def test_active_candidates(self, bounded):
        """Rows at or below the threshold are candidates."""
        assert active_candidates(bounded, 0.0, [0.0], [1.0]) == [0]
        assert active_candidates(bounded, 0.0, [0.0], [2.0]) == []


class TestReport:
    """Residual suite along an arc."""

    def test_quadratic_arc_passes(self, quadratic_arc, quadratic):
        """u = 1, psi = 2 and H = 1 along the whole arc."""
        report = pmp_report(quadratic_arc, quadratic.problem)
        assert report.passed
        assert report.nontrivial
        assert report.inequality_multiplier_min is None
        np.testing.assert_allclose(quadratic_arc.u[:, 0], 1.0, atol=1e-8)
        np.testing.assert_allclose(hamiltonian_series(quadratic_arc, quadratic.problem), 1.0, atol=1e-8)

    def test_resource_shot_passes(self, resource_shot, resource):
        """The converged resource extremal satisfies every condition."""
        report = pmp_report(resource_shot, resource.problem)
        assert report.passed
        assert report.stationarity <= 1e-10
        assert report.constraint_violation <= 1e-10
        assert report.adjoint_defect <= 1e-4

    def test_trivial_multipliers_fail(self, quadratic_arc, quadratic):
        """(psi0, psi) = 0 is not an extremal even though every residual vanishes."""
        trivial = dataclasses.replace(quadratic_arc, psi0=0.0, psi=np.zeros_like(quadratic_arc.psi))
        report = pmp_report(trivial, quadratic.problem)
        assert not report.nontrivial
        assert not report.passed

    def test_boundary_mismatch_fails(self, quadratic_arc, quadratic):
        """Moving the last state off x_b is caught."""
        x = quadratic_arc.x.copy()
        x[-1] += 1e-3
        report = pmp_report(dataclasses.replace(quadratic_arc, x=x), quadratic.problem)
        assert report.boundary_mismatch == pytest.approx(1e-3, rel=1e-6)
        assert not report.passed


class TestHamiltonianResidual:
    """dH/dt along the arc against the explicit partial."""

    def test_constant_hamiltonian(self, quadratic_arc, quadratic):
        """H is constant for the autonomous quadratic problem."""
        check = hamiltonian_check(quadratic_arc, quadratic.problem)
        assert check.passed
        assert check.max_residual <= 1e-8
        assert dHdt_residual(quadratic_arc, quadratic.problem).shape == (quadratic_arc.size - 2,)

    def test_corrupted_costate_is_caught(self, quadratic_arc, quadratic):
        """Doubling psi on the second half makes H jump from 1 to 3."""
        psi = quadratic_arc.psi.copy()
        psi[quadratic_arc.size // 2 :] *= 2.0
        corrupted = dataclasses.replace(quadratic_arc, psi=psi)
        check = hamiltonian_check(corrupted, quadratic.problem)
        assert not check.passed
        assert check.max_residual == pytest.approx(1000.0, rel=1e-6)
        assert hamiltonian_jumps(corrupted, quadratic.problem) == pytest.approx(2000.0, rel=1e-6)

    def test_gate_catches_slow_drift(self, quadratic_arc, quadratic):
        """A smooth H drift of 1e-4 per unit time fails the gate at N = 1000."""
        assert hamiltonian_check(quadratic_arc, quadratic.problem).bound == pytest.approx(5e-6)
        psi = quadratic_arc.psi + 1e-4 * quadratic_arc.grid[:, None]
        check = hamiltonian_check(dataclasses.replace(quadratic_arc, psi=psi), quadratic.problem)
        assert check.max_residual == pytest.approx(1e-4, rel=1e-3)
        assert not check.passed

    def test_too_few_nodes(self, quadratic_arc, quadratic):
        """The central difference needs interior nodes."""
        short = dataclasses.replace(
            quadratic_arc,
            grid=quadratic_arc.grid[:2],
            x=quadratic_arc.x[:2],
            u=quadratic_arc.u[:2],
            psi=quadratic_arc.psi[:2],
            lam=quadratic_arc.lam[:2],
        )
        with pytest.raises(ValueError):
            dHdt_residual(short, quadratic.problem)

    def test_second_order_convergence(self):
        """On the time-weighted problem the residual decays like h^2 with C close to psi^2 / 4."""
        entry = get("weighted-quadratic")
        psi = 2.0 / np.log(2.0)
        sizes = np.array([50, 100, 200, 400])
        worst, constants = [], []
        for N in sizes:
            arc = integrate(entry.problem, -1.0, [psi], entry.seeds, N=int(N))
            assert arc.x[-1, 0] == pytest.approx(1.0, abs=1e-8)
            check = hamiltonian_check(arc, entry.problem)
            assert check.passed
            worst.append(check.max_residual)
            constants.append(check.constant)
        slope = -np.polyfit(np.log(sizes), np.log(worst), 1)[0]
        assert slope >= 1.8
        assert constants[-1] == pytest.approx(psi**2 / 4, rel=0.1)
