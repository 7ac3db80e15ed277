"""Tests for the Noether charge and its drift along extremals."""

import dataclasses

import numpy as np
import pytest

from expr import Point, parse
from noether import DRIFT_THRESHOLD, charge, charge_series, conservation_report, report_to_csv
from pmp import CostateState, hamiltonian
from registry import get
from solver import ShootConfig, refine, shoot
from symmetry import Generator

ROUND_OFF_DRIFT = 1e-11


def test_quadratic_charges(quadratic, quadratic_arc):
    """Translation conserves psi = 2; time translation conserves -H = -1."""
    translation = quadratic.family("translation").generator()
    time_shift = quadratic.family("time-translation").generator()
    for k in (0, 500, 1000):
        c = quadratic_arc.costate(k)
        assert charge(quadratic.problem, translation, quadratic_arc.point(k), c) == pytest.approx(2.0, abs=1e-8)
        assert charge(quadratic.problem, time_shift, quadratic_arc.point(k), c) == pytest.approx(-1.0, abs=1e-8)


def test_charge_is_linear_in_the_generator(resource, resource_shot):
    """Q(g1 + g2) = Q(g1) + Q(g2)."""
    p = resource.problem
    g1 = resource.family("scaling").generator()
    g2 = resource.family("time-translation").generator()
    node, c = resource_shot.point(300), resource_shot.costate(300)
    assert charge(p, g1 + g2, node, c) == pytest.approx(charge(p, g1, node, c) + charge(p, g2, node, c), rel=1e-13)


def test_abnormal_multiplier(quadratic):
    """With psi0 = 0 the cost drops out of H."""
    gen = quadratic.family("time-translation").generator()
    c = CostateState.of(0.0, [2.0])
    node = Point(0.3, np.array([0.3]), np.array([1.0]))
    assert hamiltonian(quadratic.problem, *node, c) == 2.0
    assert charge(quadratic.problem, gen, node, c) == -2.0


@pytest.mark.parametrize("family", ["scaling", "time-translation"])
def test_charge_matches_documented_law(resource, resource_shot, family):
    """The computed charge equals the documented closed form at every node."""
    p = resource.problem
    gen = resource.family(family).generator()
    law = resource.law(family)
    for k in range(0, resource_shot.size, 50):
        t, x, u = resource_shot.point(k)
        c = resource_shot.costate(k)
        documented = law.evaluate(t, x, u, c.psi, hamiltonian(p, t, x, u, c))
        assert charge(p, gen, resource_shot.point(k), c) == pytest.approx(documented, abs=1e-12)


@pytest.mark.parametrize("family", ["scaling", "time-translation"])
def test_resource_charges_are_conserved(resource, resource_shot, family):
    """Both charges drift by far less than the default threshold."""
    report = conservation_report(
        resource.problem, resource.family(family).generator(), resource_shot, family=family
    )
    assert report.passed
    assert report.rel_drift <= DRIFT_THRESHOLD
    assert report.grid_size == resource_shot.size
    assert report.missing_nodes == []
    assert report.generator_source == "analytic"


def test_scaling_reference_value(resource, resource_shot, resource_oracle):
    """At t = 0 the scaling charge is (7/8) psi(0) x0."""
    report = conservation_report(resource.problem, resource.family("scaling").generator(), resource_shot)
    assert report.reference == pytest.approx(0.875 * resource_oracle.psi_a, rel=1e-6)


def test_corrupted_costate_drifts(resource, resource_shot):
    """Shifting psi by one on the second half of the arc is caught."""
    psi = resource_shot.psi.copy()
    psi[resource_shot.size // 2 :] += 1.0
    corrupted = dataclasses.replace(resource_shot, psi=psi)
    report = conservation_report(resource.problem, resource.family("scaling").generator(), corrupted)
    assert not report.passed
    assert report.rel_drift > 0.1


def test_undefined_nodes_are_reported(quadratic, quadratic_arc):
    """A generator undefined at x = 0 leaves node 0 missing and fails the report."""
    gen = Generator.from_fields(parse("0", 1, 1), [parse("log(x1)", 1, 1)], [parse("0", 1, 1)])
    values, missing = charge_series(quadratic.problem, gen, quadratic_arc)
    assert missing == [0]
    assert np.isnan(values[0])
    report = conservation_report(quadratic.problem, gen, quadratic_arc)
    assert not report.passed
    assert report.charge_series[0] is None
    assert report.reference == pytest.approx(values[1])


def test_csv_export(quadratic, quadratic_arc, tmp_path):
    """t, charge, drift columns with full precision."""
    report = conservation_report(quadratic.problem, quadratic.family("translation").generator(), quadratic_arc)
    path = tmp_path / "charge.csv"
    text = report_to_csv(report, quadratic_arc.grid, path)
    assert text.splitlines()[0] == "t,charge,drift"
    assert path.read_text() == text
    table = np.loadtxt(path, delimiter=",", skiprows=1)
    assert table.shape == (1001, 3)
    np.testing.assert_array_equal(table[:, 0], quadratic_arc.grid)
    np.testing.assert_array_equal(table[:, 1], report.charge_series)


@pytest.mark.slow
def test_drift_decays_at_fourth_order():
    """The scaling charge drift of solved RK4 arcs shrinks like h^4 until it reaches round-off."""
    entry = get("exhaustible-resource", xT=0.2)
    guess = 1.2 * entry.oracle(np.linspace(0.0, 1.0, 11)).psi_a
    gen = entry.family("scaling").generator()
    arc = shoot(entry.problem, [guess], ShootConfig(grid=250), seeds=entry.seeds)
    sizes, drifts = [], []
    while True:
        drift = conservation_report(entry.problem, gen, arc).max_abs_drift
        if drift < ROUND_OFF_DRIFT:
            break
        sizes.append(arc.size - 1)
        drifts.append(drift)
        if arc.size > 2000:
            break
        arc = refine(entry.problem, arc, 2)
    assert len(sizes) >= 2
    slope = -np.polyfit(np.log(sizes), np.log(drifts), 1)[0]
    assert slope >= 3.5
