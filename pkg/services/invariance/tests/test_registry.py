"""Tests for the example registry and its self-test."""

import dataclasses

import pytest

from core.errors import InvarianceError, NotFound
from registry import BUILTINS, Registry, get, names, resolve_target, self_test
from registry.entries import quadratic_translation
from symmetry import SymmetryFamily


def test_names():
    """Every built-in is listed, sorted."""
    assert names() == sorted(BUILTINS)
    assert "exhaustible-resource" in names()


def test_unknown_name():
    """Unknown names list the available ones."""
    with pytest.raises(NotFound) as exc:
        get("no-such-problem")
    assert exc.value.details["available"] == names()


def test_entries_are_cached():
    """Lookups without parameters return the same entry."""
    assert get("quadratic-translation") is get("quadratic-translation")


def test_parameter_overrides():
    """Keyword arguments rebuild the entry with new parameters."""
    entry = get("exhaustible-resource", gamma=0.4, xT=0.3)
    assert dict(entry.problem.params)["gamma"] == 0.4
    assert entry.problem.x_b == (0.3,)
    assert entry is not get("exhaustible-resource")
    assert get("exhaustible-resource").problem.x_b == (0.5,)


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_builtins_pass_self_test(name):
    """Identity and pointwise invariance hold for every built-in family."""
    self_test(BUILTINS[name](), points=50, seed=3)


def test_self_test_rejects_broken_family():
    """A family that is not a symmetry fails the self-test."""
    entry = quadratic_translation()
    broken = SymmetryFamily.build("stretch", 1, 1, T="t", X=["exp(s) * x1"], U=["u1"])
    with pytest.raises(InvarianceError) as exc:
        self_test(dataclasses.replace(entry, families=(broken,)), points=10)
    assert "stretch" in exc.value.details["failures"][0]


def test_self_test_rejects_non_identity():
    """h^0 must be the identity."""
    entry = quadratic_translation()
    shifted = SymmetryFamily.build("shifted", 1, 1, T="t + 1", X=["x1 + s"], U=["u1"])
    with pytest.raises(InvarianceError):
        self_test(dataclasses.replace(entry, families=(shifted,)), points=10)


def test_custom_registry():
    """Factories can be supplied and checking disabled."""
    reg = Registry({"toy": quadratic_translation}, check=False)
    assert reg.names() == ["toy"]
    assert reg.get("toy").name == "quadratic-translation"


def test_entry_accessors(resource):
    """Families, laws and the summary."""
    assert resource.family("scaling").name == "scaling"
    assert resource.law("time-translation").display == "H = constant"
    assert resource.law("missing") is None
    with pytest.raises(NotFound):
        resource.family("rotation")
    summary = resource.summary()
    assert summary["families"] == ["scaling", "time-translation"]
    assert summary["sense"] == "maximize"
    assert summary["autonomous"] is True
    assert summary["params"] == {"alpha": 0.25, "beta": 0.25, "gamma": 0.5}


def test_seeds_and_default_costate(resource, quadratic):
    """Declared seeds are used; missing ones default."""
    u, lam = resource.seeds
    assert list(u) == [1.0, 1.0]
    assert list(lam) == [-1.0]
    assert list(quadratic.psi_a) == [0.0]
    assert list(quadratic.seeds[1]) == []


def test_resolve_target_by_name():
    """Names that are not paths go to the registry."""
    assert resolve_target("quadratic-translation").name == "quadratic-translation"
